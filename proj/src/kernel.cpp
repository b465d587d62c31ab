#include "idsolve/kernel.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace idsolve {

KernelVerdict lds_kernel_check(long long vertex_count, int k) {
    if (k < 0) throw std::invalid_argument("budget must be non-negative");
    if (k >= 63) return KernelVerdict::Proceed;  // 2^k + k - 1 > any vertex count
    long long bound = (1LL << k) + k - 1;
    return vertex_count > bound ? KernelVerdict::Reject : KernelVerdict::Proceed;
}

KernelVerdict lds_kernel_check(const Graph& g, int k) {
    return lds_kernel_check(g.vertex_count(), k);
}

std::optional<std::vector<int>> lds_solve_by_enumeration(const Graph& g, int k) {
    if (lds_kernel_check(g, k) == KernelVerdict::Reject) return std::nullopt;
    const int n = g.vertex_count();
    std::vector<int> forced = pendant_forced_vertices(g);
    if (static_cast<int>(forced.size()) > k) return std::nullopt;
    std::vector<char> is_forced(n, 0);
    for (int v : forced) is_forced[v] = 1;
    std::vector<int> free_vertices;
    for (int v = 0; v < n; ++v)
        if (!is_forced[v]) free_vertices.push_back(v);

    const int room = std::min<int>(k - static_cast<int>(forced.size()),
                                   static_cast<int>(free_vertices.size()));
    std::vector<int> pick;
    std::optional<std::vector<int>> found;
    std::function<bool(int, int)> rec = [&](int start, int remaining) {
        if (remaining == 0) {
            std::vector<int> s = forced;
            for (int i : pick) s.push_back(free_vertices[i]);
            std::sort(s.begin(), s.end());
            if (is_locating_dominating_set(g, s)) {
                found = std::move(s);
                return true;
            }
            return false;
        }
        for (int i = start; i + remaining <= static_cast<int>(free_vertices.size()); ++i) {
            pick.push_back(i);
            if (rec(i + 1, remaining - 1)) return true;
            pick.pop_back();
        }
        return false;
    };
    for (int size = 0; size <= room; ++size)
        if (rec(0, size)) return found;
    return std::nullopt;
}

TcPreprocessResult tc_preprocess(const TestCoverInstance& inst, int k) {
    inst.validate();
    if (k < 0) throw std::invalid_argument("budget must be non-negative");
    TcPreprocessResult res;

    // any two items must receive distinct test subsets
    if (k < 63 && inst.universe_size > (1LL << k)) {
        res.status = TcPreprocessResult::Status::Reject;
        return res;
    }

    std::map<std::vector<int>, int> seen;
    for (int i = 0; i < inst.test_count(); ++i) {
        if (seen.emplace(inst.tests[i], i).second) {
            res.reduced.tests.push_back(inst.tests[i]);
            res.kept_indices.push_back(i);
        }
    }
    res.reduced.universe_size = inst.universe_size;

    if (k >= inst.universe_size - 1) {
        // Bondy: a separable instance has a cover of size <= |U| - 1; build
        // one greedily, each picked test refining the current partition
        std::vector<int> sig_class(inst.universe_size, 0);
        int classes = 1;
        std::vector<int> witness;
        bool progress = true;
        while (classes < inst.universe_size && progress) {
            progress = false;
            for (size_t t = 0; t < res.reduced.tests.size(); ++t) {
                std::map<std::pair<int, bool>, int> relabel;
                std::vector<char> inside(inst.universe_size, 0);
                for (int item : res.reduced.tests[t]) inside[item] = 1;
                int next = 0;
                std::vector<int> fresh(inst.universe_size);
                for (int item = 0; item < inst.universe_size; ++item) {
                    auto key = std::make_pair(sig_class[item], inside[item] != 0);
                    auto [it, ins] = relabel.emplace(key, next);
                    if (ins) ++next;
                    fresh[item] = it->second;
                }
                if (next > classes) {
                    sig_class = std::move(fresh);
                    classes = next;
                    witness.push_back(res.kept_indices[t]);
                    progress = true;
                    break;
                }
            }
        }
        if (classes == inst.universe_size || inst.universe_size <= 1) {
            res.status = TcPreprocessResult::Status::Yes;
            std::sort(witness.begin(), witness.end());
            res.witness = std::move(witness);
            return res;
        }
        // not separable: fall through, enumeration will report infeasible
    }
    return res;
}

TcEnumerationResult tc_solve_by_enumeration(const TestCoverInstance& inst, int k,
                                            const OracleCaps& caps) {
    {
        std::vector<int> all(inst.test_count());
        for (int i = 0; i < inst.test_count(); ++i) all[i] = i;
        if (!is_test_cover(inst, all)) return {TcStatus::Infeasible, {}};
    }
    TcPreprocessResult pre = tc_preprocess(inst, k);
    if (pre.status == TcPreprocessResult::Status::Reject) return {TcStatus::NoneWithinBudget, {}};
    if (pre.status == TcPreprocessResult::Status::Yes) return {TcStatus::Found, pre.witness};

    TcResult r = brute_force_tc(pre.reduced, k, caps);
    TcEnumerationResult out;
    out.status = r.status;
    for (int idx : r.witness) out.witness.push_back(pre.kept_indices[idx]);
    std::sort(out.witness.begin(), out.witness.end());
    return out;
}

}  // namespace idsolve
