#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "idsolve/cnf.hpp"
#include "idsolve/graph.hpp"
#include "idsolve/oracles.hpp"
#include "idsolve/test_cover.hpp"

namespace idsolve {

// Rewrites a CNF with clauses of size <= 3 into an equisatisfiable (3,3)
// formula: pure literals are eliminated iteratively, variables with more
// than 3 occurrences are split into a cyclically implied chain of copies,
// and variables are renumbered compactly. Every variable of the output
// occurs at most 3 times and in both polarities.
CnfFormula to_33sat(const CnfFormula& f);

// Injective map from literal occurrences to p-subsets of [2p], p minimal
// with 4n <= C(2p,p). Occurrence order per variable: x^1, !x^1, x^2, !x^2;
// sets are handed out in colexicographic order.
struct SpernerAssignment {
    int p = 0;
    // occurrence_sets[4*(i-1) + o] for variable i, o in {0:x1, 1:!x1, 2:x2, 3:!x2},
    // each a sorted p-subset of {0..2p-1}
    std::vector<std::vector<int>> occurrence_sets;

    const std::vector<int>& set_for(int variable, bool positive, int appearance) const;
};
SpernerAssignment sperner_family(int variable_count);
// smallest p with 4n <= C(2p,p)
int sperner_p(int variable_count);
std::uint64_t binomial(int n, int k);

// Bit-representation plan: q code bits cover 1-based codes, so that targets
// with distinct codes get distinct non-empty neighborhoods among the q
// pair-vertices, plus one shared pair adjacent to every target.
struct BitrepPlan {
    int q = 0;                         // ceil(log2(max_code)) + 1
    std::vector<std::uint32_t> codes;  // per target, starting at 1
};
BitrepPlan bitrep_plan(const std::vector<std::uint32_t>& codes);
BitrepPlan bitrep_plan_sequential(int target_count);

// A reduction output with bookkeeping: every vertex/test/item carries a
// role label, and named groups give tests direct access to gadget parts.
struct ReducedGraph {
    Graph graph;
    long long k = 0;
    int p = 0;  // Sperner parameter (treewidth form) or unused
    std::vector<std::string> trace;               // one label per vertex
    std::map<std::string, std::vector<int>> groups;
    std::vector<std::string> trace_comments() const;
};

struct ReducedTc {
    TestCoverInstance instance;
    long long k = 0;
    int p = 0;
    std::vector<std::string> test_trace;
    std::vector<std::string> item_trace;
    std::map<std::string, std::vector<int>> test_groups;
    std::map<std::string, std::vector<int>> item_groups;
    std::vector<std::string> trace_comments() const;
};

// (3,3)-SAT -> Locating-Dominating Set with k = 4n + 3m + 2p and a
// 2p-clique connection portal; treewidth of the output is O(p).
ReducedGraph lds_tw_reduction(const CnfFormula& f33);

// 3-SAT -> Locating-Dominating Set with sqrt(n) assignment buckets and two
// bit-representation gadgets; k = |B|/3 + (q+1) + (p+1) + sqrt(n).
ReducedGraph lds_solsize_reduction(const CnfFormula& f);

// (3,3)-SAT -> Test Cover, portal is an independent set of 2p tests;
// k = n + 2m + 2p.
ReducedTc tc_tw_reduction(const CnfFormula& f33);

// 3-SAT -> Test Cover with n padded to 2^(2q) (q a power of two), r = log2 n
// buckets of 2^(n/r) assignment tests; k = r + p + 1.
ReducedTc tc_solsize_reduction(const CnfFormula& f, int padded_cap = 16);

struct StructuredLdsCaps {
    int component_vertices = 18;
    int forced_vertices = 62;
    int shared_mask_bits = 60;
    std::uint64_t state_cap = 1u << 22;
};

struct StructuredLdsResult {
    bool yes = false;
    long long optimum = -1;  // size of a minimum LDS containing the forced set
};

// Exact LDS decision for graphs whose pendant-forced set F leaves only small
// components in G - F. Enumerates solutions per component and resolves
// cross-component signature clashes with a frontier DP over shared
// portal-signatures. Throws CapExceeded when the structure is too large.
StructuredLdsResult solve_reduced_lds(const Graph& g, long long k,
                                      const StructuredLdsCaps& caps = {});

enum class TcDecision { Yes, No, Infeasible };

// Exact Test Cover decision: forced-test closure (tests that are the sole
// separator of some pair) followed by branch and bound on the pair with the
// fewest separators. node_cap bounds the search tree.
TcDecision tc_branch_decide(const TestCoverInstance& inst, long long k,
                            std::uint64_t node_cap = 5'000'000);

enum class ReductionKind { LdsTreewidth, LdsSolutionSize, TcTreewidth, TcSolutionSize };

struct VerifyReport {
    bool skipped = false;
    std::string skip_reason;
    bool sat = false;
    bool instance_yes = false;
    bool agree = false;
    long long k = 0;
    // graph targets: first=vertices, second=edges; tc targets: items, tests
    std::pair<long long, long long> sizes{0, 0};
};

// Builds the chosen reduction from f (via to_33sat for the treewidth forms)
// and compares the SAT oracle with the reduced-instance solver at budget k.
VerifyReport verify_reduction(const CnfFormula& f, ReductionKind kind,
                              const OracleCaps& caps = {});

}  // namespace idsolve
