#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "idsolve/cnf.hpp"
#include "idsolve/graph.hpp"
#include "idsolve/test_cover.hpp"

namespace idsolve {

struct TreeDecomposition;  // tree_decomposition.hpp

// Strict parse failure with a 1-based line number.
struct ParseError : std::runtime_error {
    ParseError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line(line) {}
    int line;
};

// PACE-style .gr files: comment lines `c ...`, header `p tw <n> <m>`, one
// `u v` line per edge, everything 1-based. Optional trailing comments
// `c role red: ...` / `c role blue: ...` carry the bipartite roles.
Graph read_gr(std::istream& in);
void write_gr(std::ostream& out, const Graph& g, const std::vector<std::string>& comments = {});

// .tc files: header `p tc <|U|> <|F|>`, then one `t i1 i2 ...` line per test
// (a bare `t` is the empty test), 1-based item ids, tests in input order.
TestCoverInstance read_tc(std::istream& in);
void write_tc(std::ostream& out, const TestCoverInstance& inst,
              const std::vector<std::string>& comments = {});

// DIMACS CNF.
CnfFormula read_cnf(std::istream& in);
void write_cnf(std::ostream& out, const CnfFormula& f, const std::vector<std::string>& comments = {});

// PACE .td files: header `s td <#bags> <maxbag> <n>`, bag lines
// `b <id> v1 v2 ...`, then one line per tree edge between bag ids.
TreeDecomposition read_td(std::istream& in);
void write_td(std::ostream& out, const TreeDecomposition& td, int graph_vertex_count);

// Path helpers; throw std::runtime_error when the file cannot be opened.
Graph read_gr_file(const std::string& path);
TestCoverInstance read_tc_file(const std::string& path);
CnfFormula read_cnf_file(const std::string& path);
TreeDecomposition read_td_file(const std::string& path);
void write_gr_file(const std::string& path, const Graph& g,
                   const std::vector<std::string>& comments = {});
void write_tc_file(const std::string& path, const TestCoverInstance& inst,
                   const std::vector<std::string>& comments = {});
void write_cnf_file(const std::string& path, const CnfFormula& f,
                    const std::vector<std::string>& comments = {});
void write_td_file(const std::string& path, const TreeDecomposition& td, int graph_vertex_count);

}  // namespace idsolve
