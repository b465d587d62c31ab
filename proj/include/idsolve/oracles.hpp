#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "idsolve/graph.hpp"
#include "idsolve/test_cover.hpp"

namespace idsolve {

// Thrown when an instance exceeds a configured exhaustive-search cap.
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exhaustive-search size caps. Defaults keep every oracle run below ~10s.
struct OracleCaps {
    int lds_vertices = 16;
    int tc_tests = 20;
    int sat_variables = 24;
};

enum class TcStatus { Found, NoneWithinBudget, Infeasible };

struct TcResult {
    TcStatus status = TcStatus::NoneWithinBudget;
    std::vector<int> witness;  // chosen test indices, valid iff Found
};

struct TcOptimum {
    TcStatus status = TcStatus::Infeasible;  // Found or Infeasible
    int optimum = -1;
    std::vector<int> witness;
};

// Minimum locating-dominating set of size <= k, by subset enumeration in
// size-then-lexicographic order (first hit wins, so witnesses are
// deterministic). With use_pendant_rule the search only scans supersets of
// pendant_forced_vertices(g), which preserves the optimum.
std::optional<std::vector<int>> brute_force_lds(const Graph& g, int k,
                                                const OracleCaps& caps = {},
                                                bool use_pendant_rule = false);
int brute_force_lds_opt(const Graph& g, const OracleCaps& caps = {}, bool use_pendant_rule = false);

// Minimum test cover of size <= k. Infeasible means even the full family
// fails to separate some item pair (e.g. twin items).
TcResult brute_force_tc(const TestCoverInstance& inst, int k, const OracleCaps& caps = {});
TcOptimum brute_force_tc_opt(const TestCoverInstance& inst, const OracleCaps& caps = {});

}  // namespace idsolve
