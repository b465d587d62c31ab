#include "idsolve/cnf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

namespace idsolve {

void CnfFormula::validate() const {
    for (const auto& clause : clauses)
        for (int lit : clause) {
            int v = std::abs(lit);
            if (lit == 0 || v > variable_count)
                throw std::invalid_argument("literal " + std::to_string(lit) + " out of range");
        }
}

void CnfFormula::normalize() {
    validate();
    std::vector<std::vector<int>> kept;
    for (auto clause : clauses) {
        std::sort(clause.begin(), clause.end(),
                  [](int a, int b) { return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b; });
        clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
        bool tautology = false;
        for (size_t i = 0; i + 1 < clause.size(); ++i)
            if (clause[i] == -clause[i + 1]) tautology = true;
        if (!tautology) kept.push_back(std::move(clause));
    }
    clauses = std::move(kept);
}

bool CnfFormula::has_empty_clause() const {
    return std::any_of(clauses.begin(), clauses.end(), [](const auto& c) { return c.empty(); });
}

std::vector<std::pair<int, int>> CnfFormula::occurrence_counts() const {
    std::vector<std::pair<int, int>> occ(variable_count + 1, {0, 0});
    for (const auto& clause : clauses)
        for (int lit : clause) {
            if (lit > 0)
                ++occ[lit].first;
            else
                ++occ[-lit].second;
        }
    return occ;
}

bool is_33_formula(const CnfFormula& f, bool require_both_polarities) {
    for (const auto& clause : f.clauses)
        if (clause.size() > 3) return false;
    auto occ = f.occurrence_counts();
    for (int v = 1; v <= f.variable_count; ++v) {
        auto [pos, neg] = occ[v];
        if (pos + neg > 3) return false;
        if (require_both_polarities && pos + neg > 0 && (pos == 0 || neg == 0)) return false;
    }
    return true;
}

bool satisfies(const CnfFormula& f, const std::vector<bool>& assignment) {
    for (const auto& clause : f.clauses) {
        bool ok = false;
        for (int lit : clause) {
            int v = std::abs(lit);
            if ((lit > 0) == assignment[v]) {
                ok = true;
                break;
            }
        }
        if (!ok) return false;
    }
    return true;
}

std::optional<std::vector<bool>> brute_force_sat(const CnfFormula& f, int var_cap) {
    f.validate();
    if (f.variable_count > var_cap)
        throw std::invalid_argument("SAT oracle cap exceeded: " + std::to_string(f.variable_count) +
                                    " > " + std::to_string(var_cap) + " variables");
    const int n = f.variable_count;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        std::vector<bool> assignment(n + 1, false);
        for (int v = 1; v <= n; ++v) assignment[v] = (bits >> (v - 1)) & 1;
        if (satisfies(f, assignment)) return assignment;
    }
    return std::nullopt;
}

CnfFormula make_random_cnf(int variables, int clauses, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CnfFormula f;
    f.variable_count = variables;
    std::uniform_int_distribution<int> size_dist(1, 3);
    std::uniform_int_distribution<int> var_dist(1, variables);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int i = 0; i < clauses; ++i) {
        int len = std::min(size_dist(rng), variables);
        std::vector<int> vars;
        while (static_cast<int>(vars.size()) < len) {
            int v = var_dist(rng);
            if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
        }
        std::vector<int> clause;
        for (int v : vars) clause.push_back(coin(rng) ? v : -v);
        f.clauses.push_back(std::move(clause));
    }
    f.normalize();
    return f;
}

std::vector<CnfFormula> enumerate_small_formulas(int max_vars, int max_clauses) {
    // all normalized non-empty clauses of size <= 3 over max_vars variables
    std::vector<std::vector<int>> pool;
    std::vector<int> lits;
    for (int v = 1; v <= max_vars; ++v) {
        lits.push_back(v);
        lits.push_back(-v);
    }
    const int L = static_cast<int>(lits.size());
    for (int mask = 1; mask < (1 << L); ++mask) {
        if (__builtin_popcount(mask) > 3) continue;
        std::vector<int> clause;
        bool tautology = false;
        for (int i = 0; i < L; ++i)
            if (mask & (1 << i)) clause.push_back(lits[i]);
        for (size_t i = 0; i < clause.size(); ++i)
            for (size_t j = i + 1; j < clause.size(); ++j)
                if (clause[i] == -clause[j]) tautology = true;
        if (tautology) continue;
        std::sort(clause.begin(), clause.end(),
                  [](int a, int b) { return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b; });
        pool.push_back(std::move(clause));
    }
    std::sort(pool.begin(), pool.end());

    std::vector<CnfFormula> out;
    const int P = static_cast<int>(pool.size());
    std::vector<int> pick;
    auto emit = [&]() {
        CnfFormula f;
        f.variable_count = max_vars;
        for (int idx : pick) f.clauses.push_back(pool[idx]);
        out.push_back(std::move(f));
    };
    // subsets of the pool of size 0..max_clauses, in index order
    std::function<void(int)> rec = [&](int start) {
        emit();
        if (static_cast<int>(pick.size()) == max_clauses) return;
        for (int i = start; i < P; ++i) {
            pick.push_back(i);
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return out;
}

}  // namespace idsolve
