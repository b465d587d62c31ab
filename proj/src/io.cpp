#include "idsolve/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "idsolve/tree_decomposition.hpp"

namespace idsolve {
namespace {

struct LineReader {
    std::istream& in;
    int line_no = 0;
    std::string line;

    bool next() {
        while (std::getline(in, line)) {
            ++line_no;
            return true;
        }
        return false;
    }
};

std::vector<std::string> tokenize(const std::string& s) {
    std::istringstream iss(s);
    std::vector<std::string> out;
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

int parse_int(const std::string& tok, const LineReader& r, const char* what) {
    try {
        size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ParseError(r.line_no, std::string("malformed ") + what + " '" + tok + "'");
    }
}

// `c role red: 1 2 3` -> ids; empty optional when the comment is unrelated
std::optional<std::vector<int>> parse_role_comment(const std::string& line, const char* color,
                                                   const LineReader& r) {
    std::string prefix = std::string("c role ") + color + ":";
    if (line.rfind(prefix, 0) != 0) return std::nullopt;
    std::vector<int> ids;
    for (const auto& tok : tokenize(line.substr(prefix.size())))
        ids.push_back(parse_int(tok, r, "role vertex id"));
    return ids;
}

}  // namespace

Graph read_gr(std::istream& in) {
    LineReader r{in};
    int n = -1, m = -1;
    Graph g;
    int edges_seen = 0;
    std::vector<int> red_ids, blue_ids;
    while (r.next()) {
        if (r.line.empty()) continue;
        if (r.line[0] == 'c') {
            if (auto ids = parse_role_comment(r.line, "red", r)) red_ids = *ids;
            if (auto ids = parse_role_comment(r.line, "blue", r)) blue_ids = *ids;
            continue;
        }
        auto toks = tokenize(r.line);
        if (toks.empty()) continue;
        if (toks[0] == "p") {
            if (n >= 0) throw ParseError(r.line_no, "duplicate header");
            if (toks.size() != 4 || toks[1] != "tw")
                throw ParseError(r.line_no, "malformed header, expected 'p tw <n> <m>'");
            n = parse_int(toks[2], r, "vertex count");
            m = parse_int(toks[3], r, "edge count");
            if (n < 0 || m < 0) throw ParseError(r.line_no, "negative counts in header");
            g = Graph(n);
            continue;
        }
        if (n < 0) throw ParseError(r.line_no, "edge line before header");
        if (toks.size() != 2) throw ParseError(r.line_no, "expected 'u v' edge line");
        int u = parse_int(toks[0], r, "vertex id");
        int v = parse_int(toks[1], r, "vertex id");
        if (u < 1 || u > n || v < 1 || v > n) throw ParseError(r.line_no, "vertex id out of range");
        if (u == v) throw ParseError(r.line_no, "self-loop " + std::to_string(u));
        if (g.has_edge(u - 1, v - 1))
            throw ParseError(r.line_no, "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
        g.add_edge(u - 1, v - 1);
        ++edges_seen;
    }
    if (n < 0) throw ParseError(r.line_no, "missing header");
    if (edges_seen != m)
        throw ParseError(r.line_no, "header announces " + std::to_string(m) + " edges, found " +
                                        std::to_string(edges_seen));
    if (!red_ids.empty() || !blue_ids.empty()) {
        std::vector<Role> roles(n, Role::None);
        for (int id : red_ids) {
            if (id < 1 || id > n) throw ParseError(r.line_no, "role vertex id out of range");
            roles[id - 1] = Role::Red;
        }
        for (int id : blue_ids) {
            if (id < 1 || id > n) throw ParseError(r.line_no, "role vertex id out of range");
            if (roles[id - 1] != Role::None) throw ParseError(r.line_no, "vertex with two roles");
            roles[id - 1] = Role::Blue;
        }
        for (int v = 0; v < n; ++v)
            if (roles[v] == Role::None)
                throw ParseError(r.line_no, "roles present but vertex " + std::to_string(v + 1) +
                                                " has none");
        try {
            g.set_roles(std::move(roles));
        } catch (const std::invalid_argument& e) {
            throw ParseError(r.line_no, e.what());
        }
    }
    return g;
}

void write_gr(std::ostream& out, const Graph& g, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "c " << c << "\n";
    out << "p tw " << g.vertex_count() << " " << g.edge_count() << "\n";
    for (auto [u, v] : g.edges()) out << u + 1 << " " << v + 1 << "\n";
    if (g.has_roles()) {
        std::string red, blue;
        for (int v = 0; v < g.vertex_count(); ++v)
            (g.role(v) == Role::Red ? red : blue) += " " + std::to_string(v + 1);
        out << "c role red:" << red << "\n";
        out << "c role blue:" << blue << "\n";
    }
}

TestCoverInstance read_tc(std::istream& in) {
    LineReader r{in};
    int u = -1, f = -1;
    TestCoverInstance inst;
    while (r.next()) {
        if (r.line.empty()) continue;
        if (r.line[0] == 'c') continue;
        auto toks = tokenize(r.line);
        if (toks.empty()) continue;
        if (toks[0] == "p") {
            if (u >= 0) throw ParseError(r.line_no, "duplicate header");
            if (toks.size() != 4 || toks[1] != "tc")
                throw ParseError(r.line_no, "malformed header, expected 'p tc <|U|> <|F|>'");
            u = parse_int(toks[2], r, "universe size");
            f = parse_int(toks[3], r, "test count");
            if (u < 0 || f < 0) throw ParseError(r.line_no, "negative counts in header");
            inst.universe_size = u;
            continue;
        }
        if (u < 0) throw ParseError(r.line_no, "test line before header");
        if (toks[0] != "t") throw ParseError(r.line_no, "expected 't i1 i2 ...' test line");
        std::vector<int> test;
        for (size_t i = 1; i < toks.size(); ++i) {
            int item = parse_int(toks[i], r, "item id");
            if (item < 1 || item > u) throw ParseError(r.line_no, "item id out of range");
            test.push_back(item - 1);
        }
        std::vector<int> sorted = test;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ParseError(r.line_no, "duplicate item in test");
        inst.tests.push_back(std::move(sorted));
    }
    if (u < 0) throw ParseError(r.line_no, "missing header");
    if (inst.test_count() != f)
        throw ParseError(r.line_no, "header announces " + std::to_string(f) + " tests, found " +
                                        std::to_string(inst.test_count()));
    return inst;
}

void write_tc(std::ostream& out, const TestCoverInstance& inst,
              const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "c " << c << "\n";
    out << "p tc " << inst.universe_size << " " << inst.test_count() << "\n";
    for (const auto& t : inst.tests) {
        out << "t";
        for (int item : t) out << " " << item + 1;
        out << "\n";
    }
}

CnfFormula read_cnf(std::istream& in) {
    LineReader r{in};
    int n = -1, m = -1;
    CnfFormula f;
    std::vector<int> current;
    bool clause_open = false;
    while (r.next()) {
        if (r.line.empty()) continue;
        if (r.line[0] == 'c') continue;
        auto toks = tokenize(r.line);
        if (toks.empty()) continue;
        if (toks[0] == "p") {
            if (n >= 0) throw ParseError(r.line_no, "duplicate header");
            if (toks.size() != 4 || toks[1] != "cnf")
                throw ParseError(r.line_no, "malformed header, expected 'p cnf <vars> <clauses>'");
            n = parse_int(toks[2], r, "variable count");
            m = parse_int(toks[3], r, "clause count");
            if (n < 0 || m < 0) throw ParseError(r.line_no, "negative counts in header");
            f.variable_count = n;
            continue;
        }
        if (n < 0) throw ParseError(r.line_no, "clause line before header");
        for (const auto& tok : toks) {
            int lit = parse_int(tok, r, "literal");
            if (lit == 0) {
                f.clauses.push_back(current);
                current.clear();
                clause_open = false;
            } else {
                if (std::abs(lit) > n) throw ParseError(r.line_no, "literal out of range");
                current.push_back(lit);
                clause_open = true;
            }
        }
    }
    if (n < 0) throw ParseError(r.line_no, "missing header");
    if (clause_open) throw ParseError(r.line_no, "unterminated clause");
    if (f.clause_count() != m)
        throw ParseError(r.line_no, "header announces " + std::to_string(m) + " clauses, found " +
                                        std::to_string(f.clause_count()));
    return f;
}

void write_cnf(std::ostream& out, const CnfFormula& f, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "c " << c << "\n";
    out << "p cnf " << f.variable_count << " " << f.clause_count() << "\n";
    for (const auto& clause : f.clauses) {
        for (int lit : clause) out << lit << " ";
        out << "0\n";
    }
}

TreeDecomposition read_td(std::istream& in) {
    LineReader r{in};
    int bags = -1, maxbag = -1, n = -1;
    TreeDecomposition td;
    std::vector<char> seen;
    int actual_maxbag = 0;
    while (r.next()) {
        if (r.line.empty()) continue;
        if (r.line[0] == 'c') continue;
        auto toks = tokenize(r.line);
        if (toks.empty()) continue;
        if (toks[0] == "s") {
            if (bags >= 0) throw ParseError(r.line_no, "duplicate header");
            if (toks.size() != 5 || toks[1] != "td")
                throw ParseError(r.line_no, "malformed header, expected 's td <#bags> <maxbag> <n>'");
            bags = parse_int(toks[2], r, "bag count");
            maxbag = parse_int(toks[3], r, "max bag size");
            n = parse_int(toks[4], r, "vertex count");
            if (bags < 0 || maxbag < 0 || n < 0) throw ParseError(r.line_no, "negative counts");
            td.bags.assign(bags, {});
            seen.assign(bags, 0);
            continue;
        }
        if (bags < 0) throw ParseError(r.line_no, "body before header");
        if (toks[0] == "b") {
            if (toks.size() < 2) throw ParseError(r.line_no, "bag line without id");
            int id = parse_int(toks[1], r, "bag id");
            if (id < 1 || id > bags) throw ParseError(r.line_no, "bag id out of range");
            if (seen[id - 1]) throw ParseError(r.line_no, "duplicate bag " + std::to_string(id));
            seen[id - 1] = 1;
            std::vector<int> bag;
            for (size_t i = 2; i < toks.size(); ++i) {
                int v = parse_int(toks[i], r, "vertex id");
                if (v < 1 || v > n) throw ParseError(r.line_no, "vertex id out of range");
                bag.push_back(v - 1);
            }
            std::sort(bag.begin(), bag.end());
            if (std::adjacent_find(bag.begin(), bag.end()) != bag.end())
                throw ParseError(r.line_no, "duplicate vertex in bag");
            actual_maxbag = std::max(actual_maxbag, static_cast<int>(bag.size()));
            td.bags[id - 1] = std::move(bag);
            continue;
        }
        if (toks.size() != 2) throw ParseError(r.line_no, "expected bag edge line 'i j'");
        int a = parse_int(toks[0], r, "bag id");
        int b = parse_int(toks[1], r, "bag id");
        if (a < 1 || a > bags || b < 1 || b > bags)
            throw ParseError(r.line_no, "bag id out of range");
        td.edges.emplace_back(a - 1, b - 1);
    }
    if (bags < 0) throw ParseError(r.line_no, "missing header");
    for (int i = 0; i < bags; ++i)
        if (!seen[i]) throw ParseError(r.line_no, "bag " + std::to_string(i + 1) + " missing");
    if (actual_maxbag != maxbag)
        throw ParseError(r.line_no, "header max bag size " + std::to_string(maxbag) +
                                        " does not match body " + std::to_string(actual_maxbag));
    return td;
}

void write_td(std::ostream& out, const TreeDecomposition& td, int graph_vertex_count) {
    int maxbag = 0;
    for (const auto& b : td.bags) maxbag = std::max(maxbag, static_cast<int>(b.size()));
    out << "s td " << td.bag_count() << " " << maxbag << " " << graph_vertex_count << "\n";
    for (int i = 0; i < td.bag_count(); ++i) {
        out << "b " << i + 1;
        for (int v : td.bags[i]) out << " " << v + 1;
        out << "\n";
    }
    auto edges = td.edges;
    for (auto& [a, b] : edges)
        if (a > b) std::swap(a, b);
    std::sort(edges.begin(), edges.end());
    for (auto [a, b] : edges) out << a + 1 << " " << b + 1 << "\n";
}

namespace {

template <typename T, typename Fn>
T read_file(const std::string& path, Fn fn) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return fn(in);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

}  // namespace

Graph read_gr_file(const std::string& path) {
    return read_file<Graph>(path, [](std::istream& in) { return read_gr(in); });
}
TestCoverInstance read_tc_file(const std::string& path) {
    return read_file<TestCoverInstance>(path, [](std::istream& in) { return read_tc(in); });
}
CnfFormula read_cnf_file(const std::string& path) {
    return read_file<CnfFormula>(path, [](std::istream& in) { return read_cnf(in); });
}
TreeDecomposition read_td_file(const std::string& path) {
    return read_file<TreeDecomposition>(path, [](std::istream& in) { return read_td(in); });
}
void write_gr_file(const std::string& path, const Graph& g, const std::vector<std::string>& comments) {
    auto out = open_out(path);
    write_gr(out, g, comments);
}
void write_tc_file(const std::string& path, const TestCoverInstance& inst,
                   const std::vector<std::string>& comments) {
    auto out = open_out(path);
    write_tc(out, inst, comments);
}
void write_cnf_file(const std::string& path, const CnfFormula& f,
                    const std::vector<std::string>& comments) {
    auto out = open_out(path);
    write_cnf(out, f, comments);
}
void write_td_file(const std::string& path, const TreeDecomposition& td, int graph_vertex_count) {
    auto out = open_out(path);
    write_td(out, td, graph_vertex_count);
}

}  // namespace idsolve
