#pragma once

#include <optional>
#include <vector>

#include "idsolve/graph.hpp"
#include "idsolve/oracles.hpp"
#include "idsolve/test_cover.hpp"

namespace idsolve {

enum class KernelVerdict { Reject, Proceed };

// Slater bound: a graph with a locating-dominating set of size k has at most
// 2^k + k - 1 vertices. Reject certifies a NO instance. Pure arithmetic on
// the vertex count; for k >= 63 the bound exceeds any representable count.
KernelVerdict lds_kernel_check(long long vertex_count, int k);
KernelVerdict lds_kernel_check(const Graph& g, int k);

// Search over vertex subsets of size <= k in size-then-lex order, pruned by
// the pendant rule (supersets of pendant_forced_vertices only).
std::optional<std::vector<int>> lds_solve_by_enumeration(const Graph& g, int k);

struct TcPreprocessResult {
    enum class Status { Reject, Yes, Proceed };
    Status status = Status::Proceed;
    TestCoverInstance reduced;       // duplicates removed, first occurrence kept
    std::vector<int> kept_indices;   // reduced test -> original index
    std::vector<int> witness;        // original indices, when status == Yes
};

// Duplicate-test removal, the 2^k item bound, and the Bondy fast path
// (k >= |U| - 1 on a separable instance answers YES via greedy refinement).
TcPreprocessResult tc_preprocess(const TestCoverInstance& inst, int k);

struct TcEnumerationResult {
    TcStatus status = TcStatus::NoneWithinBudget;
    std::vector<int> witness;  // original test indices
};

// tc_preprocess followed by subset enumeration over the kept tests.
TcEnumerationResult tc_solve_by_enumeration(const TestCoverInstance& inst, int k,
                                            const OracleCaps& caps = {});

}  // namespace idsolve
