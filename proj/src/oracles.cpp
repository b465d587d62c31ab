#include "idsolve/oracles.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace idsolve {
namespace {

// Visits subsets of {0..n-1} of size exactly `size` in lexicographic order of
// the sorted index list. Returns true once visit() accepts a subset.
bool for_each_subset_of_size(int n, int size, const std::function<bool(const std::vector<int>&)>& visit) {
    std::vector<int> pick(size);
    std::function<bool(int, int)> rec = [&](int start, int depth) {
        if (depth == size) return visit(pick);
        for (int i = start; i <= n - (size - depth); ++i) {
            pick[depth] = i;
            if (rec(i + 1, depth + 1)) return true;
        }
        return false;
    };
    return rec(0, 0);
}

}  // namespace

std::optional<std::vector<int>> brute_force_lds(const Graph& g, int k, const OracleCaps& caps,
                                                bool use_pendant_rule) {
    const int n = g.vertex_count();
    if (n > caps.lds_vertices)
        throw CapExceeded("LDS oracle cap exceeded: " + std::to_string(n) + " > " +
                          std::to_string(caps.lds_vertices) + " vertices");
    if (k < 0) return std::nullopt;

    std::vector<int> forced;
    if (use_pendant_rule) forced = pendant_forced_vertices(g);
    std::vector<int> free_vertices;
    {
        std::vector<char> is_forced(n, 0);
        for (int v : forced) is_forced[v] = 1;
        for (int v = 0; v < n; ++v)
            if (!is_forced[v]) free_vertices.push_back(v);
    }
    if (static_cast<int>(forced.size()) > k) {
        // forcing preserves the optimum, so a budget below |forced| is a NO
        return std::nullopt;
    }

    for (int size = 0; size <= std::min<int>(k - forced.size(), free_vertices.size()); ++size) {
        std::optional<std::vector<int>> found;
        for_each_subset_of_size(
            static_cast<int>(free_vertices.size()), size, [&](const std::vector<int>& idx) {
                std::vector<int> s = forced;
                for (int i : idx) s.push_back(free_vertices[i]);
                std::sort(s.begin(), s.end());
                if (is_locating_dominating_set(g, s)) {
                    found = std::move(s);
                    return true;
                }
                return false;
            });
        if (found) return found;
    }
    return std::nullopt;
}

int brute_force_lds_opt(const Graph& g, const OracleCaps& caps, bool use_pendant_rule) {
    auto sol = brute_force_lds(g, g.vertex_count(), caps, use_pendant_rule);
    // V(G) is always a locating-dominating set
    return static_cast<int>(sol->size());
}

TcResult brute_force_tc(const TestCoverInstance& inst, int k, const OracleCaps& caps) {
    inst.validate();
    const int t = inst.test_count();
    if (t > caps.tc_tests)
        throw CapExceeded("TC oracle cap exceeded: " + std::to_string(t) + " > " +
                          std::to_string(caps.tc_tests) + " tests");

    std::vector<int> all(t);
    for (int i = 0; i < t; ++i) all[i] = i;
    if (!is_test_cover(inst, all)) return {TcStatus::Infeasible, {}};

    for (int size = 0; size <= std::min(k, t); ++size) {
        TcResult res;
        bool hit = for_each_subset_of_size(t, size, [&](const std::vector<int>& idx) {
            if (is_test_cover(inst, idx)) {
                res = {TcStatus::Found, idx};
                return true;
            }
            return false;
        });
        if (hit) return res;
    }
    return {TcStatus::NoneWithinBudget, {}};
}

TcOptimum brute_force_tc_opt(const TestCoverInstance& inst, const OracleCaps& caps) {
    TcResult r = brute_force_tc(inst, inst.test_count(), caps);
    if (r.status == TcStatus::Infeasible) return {TcStatus::Infeasible, -1, {}};
    return {TcStatus::Found, static_cast<int>(r.witness.size()), r.witness};
}

}  // namespace idsolve
