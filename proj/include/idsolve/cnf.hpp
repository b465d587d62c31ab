#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace idsolve {

// CNF formula over variables 1..variable_count. A literal is a signed
// variable id (DIMACS convention). Clauses are kept in input order.
struct CnfFormula {
    int variable_count = 0;
    std::vector<std::vector<int>> clauses;

    int clause_count() const { return static_cast<int>(clauses.size()); }

    // Throws std::invalid_argument on zero/out-of-range literals.
    void validate() const;

    // Sorts literals by variable, drops duplicate literals and tautological
    // clauses. Keeps clause order otherwise. Empty clauses are kept.
    void normalize();

    bool has_empty_clause() const;

    // occurrences[v] = {positive count, negative count}, v in 1..n
    std::vector<std::pair<int, int>> occurrence_counts() const;

    bool operator==(const CnfFormula&) const = default;
};

// True iff every clause has at most 3 literals and every variable occurs at
// most 3 times. When require_both_polarities is set, every occurring variable
// must appear in both polarities.
bool is_33_formula(const CnfFormula& f, bool require_both_polarities = false);

// Exhaustive satisfiability check, variables capped (default 24).
// Returns the lexicographically first satisfying assignment (index 0 unused).
std::optional<std::vector<bool>> brute_force_sat(const CnfFormula& f, int var_cap = 24);

bool satisfies(const CnfFormula& f, const std::vector<bool>& assignment);

// Random k-CNF-ish formula: `clauses` clauses, each over 1..3 distinct
// variables with random polarities. Deterministic per seed.
CnfFormula make_random_cnf(int variables, int clauses, std::uint64_t seed);

// Every normalized formula over at most `max_vars` variables with at most
// `max_clauses` clauses: clauses are the non-tautological, non-empty clauses
// of size <= 3, formulas are subsets of them (deduplicated, order canonical).
std::vector<CnfFormula> enumerate_small_formulas(int max_vars, int max_clauses);

}  // namespace idsolve
