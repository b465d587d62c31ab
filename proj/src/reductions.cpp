#include "idsolve/reductions.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <functional>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace idsolve {

// ---------------------------------------------------------------- to_33sat

CnfFormula to_33sat(const CnfFormula& f) {
    CnfFormula work = f;
    work.normalize();
    for (const auto& clause : work.clauses)
        if (clause.size() > 3) throw std::invalid_argument("to_33sat expects clauses of size <= 3");
    if (work.has_empty_clause())
        throw std::invalid_argument("to_33sat expects a formula without empty clauses");

    // iterated pure-literal elimination: a variable seen in one polarity only
    // can be satisfied for free, dropping its clauses
    bool changed = true;
    while (changed) {
        changed = false;
        auto occ = work.occurrence_counts();
        for (int v = 1; v <= work.variable_count && !changed; ++v) {
            auto [pos, neg] = occ[v];
            if (pos + neg == 0 || (pos > 0 && neg > 0)) continue;
            std::vector<std::vector<int>> kept;
            for (const auto& clause : work.clauses) {
                bool has = std::any_of(clause.begin(), clause.end(),
                                       [v](int lit) { return std::abs(lit) == v; });
                if (!has) kept.push_back(clause);
            }
            work.clauses = std::move(kept);
            changed = true;
        }
    }

    // split variables with more than 3 occurrences into a chain of copies
    // tied together by cyclic implications
    CnfFormula out;
    auto occ = work.occurrence_counts();
    std::vector<int> base_id(work.variable_count + 1, 0);
    int next = 0;
    std::vector<int> copies_of(work.variable_count + 1, 0);
    for (int v = 1; v <= work.variable_count; ++v) {
        int total = occ[v].first + occ[v].second;
        if (total == 0) continue;
        copies_of[v] = total > 3 ? total : 1;
        base_id[v] = next + 1;
        next += copies_of[v];
    }
    out.variable_count = next;

    std::vector<int> used(work.variable_count + 1, 0);
    for (const auto& clause : work.clauses) {
        std::vector<int> fresh;
        for (int lit : clause) {
            int v = std::abs(lit);
            int id = copies_of[v] > 1 ? base_id[v] + used[v]++ : base_id[v];
            fresh.push_back(lit > 0 ? id : -id);
        }
        out.clauses.push_back(std::move(fresh));
    }
    for (int v = 1; v <= work.variable_count; ++v) {
        if (copies_of[v] <= 1) continue;
        for (int j = 0; j < copies_of[v]; ++j) {
            int a = base_id[v] + j;
            int b = base_id[v] + (j + 1) % copies_of[v];
            out.clauses.push_back({-a, b});  // a => b
        }
    }
    return out;
}

// ------------------------------------------------------- Sperner assignment

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

int sperner_p(int variable_count) {
    if (variable_count < 1) variable_count = 1;
    int p = 1;
    while (binomial(2 * p, p) < 4ULL * variable_count) ++p;
    return p;
}

SpernerAssignment sperner_family(int variable_count) {
    if (variable_count < 1) throw std::invalid_argument("need at least one variable");
    SpernerAssignment sa;
    sa.p = sperner_p(variable_count);
    const int need = 4 * variable_count;

    // p-subsets of [2p] in colexicographic order
    std::vector<int> cur(sa.p);
    for (int i = 0; i < sa.p; ++i) cur[i] = i;
    sa.occurrence_sets.push_back(cur);
    while (static_cast<int>(sa.occurrence_sets.size()) < need) {
        // next p-subset in colex: bump the lowest element that can move
        int i = 0;
        while (i + 1 < sa.p && cur[i] + 1 == cur[i + 1]) ++i;
        ++cur[i];
        for (int j = 0; j < i; ++j) cur[j] = j;
        sa.occurrence_sets.push_back(cur);
    }
    return sa;
}

const std::vector<int>& SpernerAssignment::set_for(int variable, bool positive,
                                                   int appearance) const {
    int o = (appearance - 1) * 2 + (positive ? 0 : 1);
    return occurrence_sets.at(4 * (variable - 1) + o);
}

// --------------------------------------------------------------- bitrep

BitrepPlan bitrep_plan(const std::vector<std::uint32_t>& codes) {
    if (codes.empty()) throw std::invalid_argument("bitrep needs at least one target");
    BitrepPlan plan;
    plan.codes = codes;
    std::uint32_t maxc = *std::max_element(codes.begin(), codes.end());
    int q = 1;
    while ((1u << (q - 1)) < maxc) ++q;  // ceil(log2(maxc)) + 1, codes start at 1
    plan.q = q;
    return plan;
}

BitrepPlan bitrep_plan_sequential(int target_count) {
    std::vector<std::uint32_t> codes(target_count);
    for (int i = 0; i < target_count; ++i) codes[i] = i + 1;
    return bitrep_plan(codes);
}

// --------------------------------------------------- reduction bookkeeping

std::vector<std::string> ReducedGraph::trace_comments() const {
    std::vector<std::string> out;
    out.push_back("budget " + std::to_string(k));
    for (size_t v = 0; v < trace.size(); ++v)
        out.push_back("trace " + std::to_string(v + 1) + " " + trace[v]);
    return out;
}

std::vector<std::string> ReducedTc::trace_comments() const {
    std::vector<std::string> out;
    out.push_back("budget " + std::to_string(k));
    for (size_t t = 0; t < test_trace.size(); ++t)
        out.push_back("trace test " + std::to_string(t + 1) + " " + test_trace[t]);
    for (size_t i = 0; i < item_trace.size(); ++i)
        out.push_back("trace item " + std::to_string(i + 1) + " " + item_trace[i]);
    return out;
}

namespace {

struct OccurrenceIndexer {
    // per clause and literal position: which appearance (1 or 2) this is
    std::vector<std::vector<int>> appearance;

    OccurrenceIndexer(const CnfFormula& f) {
        std::vector<int> pos_seen(f.variable_count + 1, 0), neg_seen(f.variable_count + 1, 0);
        appearance.resize(f.clause_count());
        for (int j = 0; j < f.clause_count(); ++j) {
            for (int lit : f.clauses[j]) {
                int v = std::abs(lit);
                int& cnt = lit > 0 ? pos_seen[v] : neg_seen[v];
                ++cnt;
                if (cnt > 2)
                    throw std::invalid_argument("not a both-polarity (3,3) formula");
                appearance[j].push_back(cnt);
            }
        }
    }
};

void require_33(const CnfFormula& f) {
    if (!is_33_formula(f, /*require_both_polarities=*/true))
        throw std::invalid_argument("reduction expects a (3,3) formula with both polarities");
    if (f.has_empty_clause()) throw std::invalid_argument("empty clause");
}

int add_traced(ReducedGraph& rg, const std::string& label, const std::string& group) {
    int id = rg.graph.add_vertex();
    rg.trace.push_back(label);
    rg.groups[group].push_back(id);
    return id;
}

}  // namespace

// ------------------------------------------------ LDS treewidth reduction

ReducedGraph lds_tw_reduction(const CnfFormula& f33) {
    CnfFormula f = f33;
    f.normalize();
    require_33(f);
    const int n = f.variable_count;
    const int m = f.clause_count();

    ReducedGraph rg;
    SpernerAssignment sr = sperner_family(std::max(n, 1));
    rg.p = sr.p;
    const int p2 = 2 * sr.p;

    // connection portal: a clique with one pendant per portal vertex
    std::vector<int> portal(p2), pendant(p2);
    for (int q = 0; q < p2; ++q) {
        portal[q] = add_traced(rg, "portal " + std::to_string(q + 1), "portal");
        pendant[q] = add_traced(rg, "pendant " + std::to_string(q + 1), "pendant");
    }
    for (int q = 0; q < p2; ++q) {
        rg.graph.add_edge(portal[q], pendant[q]);
        for (int r = q + 1; r < p2; ++r) rg.graph.add_edge(portal[q], portal[r]);
    }

    // variable gadgets: two claws plus the four occurrence vertices
    // lit[i][o]: o = 0:x^1, 1:!x^1, 2:x^2, 3:!x^2
    std::vector<std::array<int, 4>> lit(n + 1);
    for (int i = 1; i <= n; ++i) {
        std::string vs = std::to_string(i);
        int a0 = add_traced(rg, "alpha0 var " + vs, "alpha0");
        int a1 = add_traced(rg, "alpha1 var " + vs, "var-gadget");
        int a2 = add_traced(rg, "alpha2 var " + vs, "var-gadget");
        int a3 = add_traced(rg, "alpha3 var " + vs, "var-gadget");
        int b0 = add_traced(rg, "beta0 var " + vs, "beta0");
        int b1 = add_traced(rg, "beta1 var " + vs, "var-gadget");
        int b2 = add_traced(rg, "beta2 var " + vs, "var-gadget");
        int b3 = add_traced(rg, "beta3 var " + vs, "var-gadget");
        int x1 = add_traced(rg, "lit +" + vs + " occ 1", "literal");
        int nx1 = add_traced(rg, "lit -" + vs + " occ 1", "literal");
        int x2 = add_traced(rg, "lit +" + vs + " occ 2", "literal");
        int nx2 = add_traced(rg, "lit -" + vs + " occ 2", "literal");
        lit[i] = {x1, nx1, x2, nx2};
        for (int leaf : {a1, a2, a3}) rg.graph.add_edge(a0, leaf);
        for (int leaf : {b1, b2, b3}) rg.graph.add_edge(b0, leaf);
        rg.graph.add_edge(a1, x1);
        rg.graph.add_edge(a1, nx1);
        rg.graph.add_edge(a2, x2);
        rg.graph.add_edge(a2, nx2);
        rg.graph.add_edge(b1, nx1);
        rg.graph.add_edge(b1, x2);
        rg.graph.add_edge(b2, nx2);
        rg.graph.add_edge(b2, x1);
        for (int o = 0; o < 4; ++o)
            for (int q : sr.occurrence_sets[4 * (i - 1) + o]) rg.graph.add_edge(lit[i][o], portal[q]);
    }

    // clause gadgets: 4-leaf star plus c^1..c^3; gamma^{1+r} misses c^r
    OccurrenceIndexer occ(f);
    for (int j = 0; j < m; ++j) {
        std::string cs = std::to_string(j + 1);
        int g0 = add_traced(rg, "gamma0 clause " + cs, "gamma0");
        std::array<int, 4> gl;
        for (int a = 0; a < 4; ++a) {
            gl[a] = add_traced(rg, "gamma" + std::to_string(a + 1) + " clause " + cs, "clause-gadget");
            rg.graph.add_edge(g0, gl[a]);
        }
        std::array<int, 3> c;
        for (int r = 0; r < 3; ++r) {
            c[r] = add_traced(rg, "cvert " + cs + " slot " + std::to_string(r + 1), "cvert");
            for (int a = 1; a < 4; ++a)
                if (a - 1 != r) rg.graph.add_edge(gl[a], c[r]);
        }
        for (size_t r = 0; r < f.clauses[j].size(); ++r) {
            int litv = f.clauses[j][r];
            int v = std::abs(litv);
            int o = (occ.appearance[j][r] - 1) * 2 + (litv > 0 ? 0 : 1);
            for (int q : sr.occurrence_sets[4 * (v - 1) + o]) rg.graph.add_edge(c[r], portal[q]);
        }
    }

    rg.k = 4LL * n + 3LL * m + p2;
    return rg;
}

// -------------------------------------------- LDS solution-size reduction

namespace {

// smallest perfect square with an even root covering n
int pad_even_square(int n) {
    int t = 1;
    while ((2 * t) * (2 * t) < n) ++t;
    return (2 * t) * (2 * t);
}

// does the partial assignment (values of bucket variables) satisfy clause?
// vars_of_bucket maps variable -> bit position, absent variables unknown
bool bucket_satisfies(const std::vector<int>& clause, const std::unordered_map<int, int>& bit_of,
                      std::uint64_t assignment_bits) {
    for (int lit : clause) {
        auto it = bit_of.find(std::abs(lit));
        if (it == bit_of.end()) continue;
        bool value = (assignment_bits >> it->second) & 1;
        if ((lit > 0) == value) return true;
    }
    return false;
}

}  // namespace

ReducedGraph lds_solsize_reduction(const CnfFormula& f) {
    CnfFormula work = f;
    work.normalize();
    for (const auto& clause : work.clauses)
        if (clause.size() > 3)
            throw std::invalid_argument("solution-size reduction expects a 3-SAT formula");
    if (work.has_empty_clause()) throw std::invalid_argument("empty clause");

    const int padded = pad_even_square(std::max(work.variable_count, 1));
    const int s = static_cast<int>(std::lround(std::sqrt(padded)));
    const int m = work.clause_count();

    ReducedGraph rg;
    // buckets of s variables each; dummies beyond variable_count constrain nothing
    std::vector<std::unordered_map<int, int>> bucket_bits(s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            int var = i * s + j + 1;
            if (var <= work.variable_count) bucket_bits[i][var] = j;
        }

    std::vector<std::vector<int>> bucket_vertices(s);
    std::vector<int> b_circ(s), b_prime(s), b_star(s);
    std::vector<std::uint32_t> a_codes;
    std::vector<int> a_all;
    for (int i = 0; i < s; ++i) {
        std::string bs = std::to_string(i + 1);
        for (int l = 0; l < (1 << s); ++l) {
            int a = add_traced(rg, "assign bucket " + bs + " code " + std::to_string(l + 1), "assign");
            bucket_vertices[i].push_back(a);
            a_all.push_back(a);
            // code i + (l)*s with 1-based bucket index
            a_codes.push_back(static_cast<std::uint32_t>(i + 1 + l * s));
        }
        b_circ[i] = add_traced(rg, "bcirc bucket " + bs, "bcirc");
        b_prime[i] = add_traced(rg, "bprime bucket " + bs, "bprime");
        b_star[i] = add_traced(rg, "bstar bucket " + bs, "bstar");
        rg.graph.add_edge(b_circ[i], b_prime[i]);
        rg.graph.add_edge(b_prime[i], b_star[i]);
        for (int a : bucket_vertices[i]) rg.graph.add_edge(b_circ[i], a);
    }

    std::vector<int> c_circ(m), c_star(m), c_all;
    for (int j = 0; j < m; ++j) {
        std::string cs = std::to_string(j + 1);
        c_circ[j] = add_traced(rg, "ccirc clause " + cs, "ccirc");
        c_star[j] = add_traced(rg, "cstar clause " + cs, "cstar");
        c_all.push_back(c_circ[j]);
        c_all.push_back(c_star[j]);
        for (int i = 0; i < s; ++i)
            for (int l = 0; l < (1 << s); ++l)
                if (bucket_satisfies(work.clauses[j], bucket_bits[i], l))
                    rg.graph.add_edge(bucket_vertices[i][l], c_circ[j]);
    }

    auto attach_bitrep = [&rg](const std::vector<int>& targets,
                               const std::vector<std::uint32_t>& codes, const std::string& name) {
        BitrepPlan plan = bitrep_plan(codes);
        std::vector<int> heads(plan.q);
        for (int b = 0; b < plan.q; ++b) {
            heads[b] = add_traced(rg, name + " bit " + std::to_string(b + 1), name);
            int tail = add_traced(rg, name + " bit " + std::to_string(b + 1) + " pendant",
                                  name + "-pendant");
            rg.graph.add_edge(heads[b], tail);
        }
        int shared = add_traced(rg, name + " shared", name);
        int shared_tail = add_traced(rg, name + " shared pendant", name + "-pendant");
        rg.graph.add_edge(shared, shared_tail);
        for (size_t t = 0; t < targets.size(); ++t) {
            for (int b = 0; b < plan.q; ++b)
                if ((codes[t] >> b) & 1) rg.graph.add_edge(targets[t], heads[b]);
            rg.graph.add_edge(targets[t], shared);
        }
        return plan.q;
    };

    int q = attach_bitrep(a_all, a_codes, "bitrep-a");
    int pc = 0;
    if (m > 0) {
        std::vector<std::uint32_t> c_codes;
        for (int j = 0; j < m; ++j) {
            c_codes.push_back(j + 1);
            c_codes.push_back(j + 1);
        }
        pc = attach_bitrep(c_all, c_codes, "bitrep-c");
    }

    rg.p = pc;
    rg.k = s /* |B|/3 */ + (q + 1) + (m > 0 ? pc + 1 : 0) + s;
    return rg;
}

// ------------------------------------------------- TC treewidth reduction

namespace {

struct TcBuilder {
    ReducedTc out;

    int add_test(const std::string& label, const std::string& group) {
        out.instance.tests.emplace_back();
        out.test_trace.push_back(label);
        int id = static_cast<int>(out.instance.tests.size()) - 1;
        out.test_groups[group].push_back(id);
        return id;
    }
    int add_item(const std::string& label, const std::string& group) {
        int id = out.instance.universe_size++;
        out.item_trace.push_back(label);
        out.item_groups[group].push_back(id);
        return id;
    }
    void put(int test, int item) { out.instance.tests[test].push_back(item); }
    ReducedTc finish() {
        for (auto& t : out.instance.tests) std::sort(t.begin(), t.end());
        out.instance.validate();
        return std::move(out);
    }
};

}  // namespace

ReducedTc tc_tw_reduction(const CnfFormula& f33) {
    CnfFormula f = f33;
    f.normalize();
    require_33(f);
    const int n = f.variable_count;
    const int m = f.clause_count();

    TcBuilder tb;
    SpernerAssignment sr = sperner_family(std::max(n, 1));
    tb.out.p = sr.p;
    const int p2 = 2 * sr.p;

    // portal: independent set of tests, each holding its own pendant item
    std::vector<int> portal(p2);
    for (int qi = 0; qi < p2; ++qi) {
        portal[qi] = tb.add_test("portal " + std::to_string(qi + 1), "portal");
        int u = tb.add_item("pendant " + std::to_string(qi + 1), "pendant");
        tb.put(portal[qi], u);
    }

    std::vector<std::array<int, 4>> lit(n + 1);
    std::vector<std::array<int, 2>> alpha(n + 1);
    for (int i = 1; i <= n; ++i) {
        std::string vs = std::to_string(i);
        int beta = tb.add_item("beta var " + vs, "beta");
        alpha[i][0] = tb.add_test("alpha1 var " + vs, "alpha");
        alpha[i][1] = tb.add_test("alpha2 var " + vs, "alpha");
        int x1 = tb.add_item("lit +" + vs + " occ 1", "literal");
        int nx1 = tb.add_item("lit -" + vs + " occ 1", "literal");
        int x2 = tb.add_item("lit +" + vs + " occ 2", "literal");
        int nx2 = tb.add_item("lit -" + vs + " occ 2", "literal");
        lit[i] = {x1, nx1, x2, nx2};
        tb.put(alpha[i][0], beta);
        tb.put(alpha[i][1], beta);
        tb.put(alpha[i][0], x1);
        tb.put(alpha[i][0], x2);
        tb.put(alpha[i][1], nx1);
        tb.put(alpha[i][1], nx2);
        for (int o = 0; o < 4; ++o)
            for (int q : sr.occurrence_sets[4 * (i - 1) + o]) tb.put(portal[q], lit[i][o]);
    }

    OccurrenceIndexer occ(f);
    for (int j = 0; j < m; ++j) {
        std::string cs = std::to_string(j + 1);
        const int w = static_cast<int>(f.clauses[j].size());
        std::array<int, 3> delta, c;
        for (int r = 0; r < 3; ++r) {
            delta[r] = tb.add_test("delta" + std::to_string(r + 1) + " clause " + cs, "delta");
            c[r] = tb.add_item("citem " + cs + " slot " + std::to_string(r + 1), "citem");
            tb.put(delta[r], c[r]);
        }
        // gamma items force two chosen deltas per clause. Real literal slots
        // carry a portal neighborhood, so their c items never collide with a
        // gamma item; padding slots have none, so they must avoid the
        // singleton signatures the gammas take and instead pin their own
        // delta through the pair with the isolated item.
        if (w == 3) {
            for (int a = 0; a < 3; ++a) {
                int gm = tb.add_item("gamma" + std::to_string(a + 1) + " clause " + cs, "gamma");
                for (int r = 0; r < 3; ++r)
                    if (r != a) tb.put(delta[r], gm);
            }
        } else if (w == 2) {
            int gm = tb.add_item("gamma1 clause " + cs, "gamma");
            tb.put(delta[0], gm);
            tb.put(delta[1], gm);
        }
        for (int r = 0; r < w; ++r) {
            int litv = f.clauses[j][r];
            int v = std::abs(litv);
            int o = (occ.appearance[j][r] - 1) * 2 + (litv > 0 ? 0 : 1);
            for (int q : sr.occurrence_sets[4 * (v - 1) + o]) tb.put(portal[q], c[r]);
        }
    }

    tb.add_item("isolated", "isolated");
    ReducedTc out = tb.finish();
    out.k = 1LL * n + 2LL * m + p2;
    return out;
}

// ---------------------------------------------- TC solution-size reduction

ReducedTc tc_solsize_reduction(const CnfFormula& f, int padded_cap) {
    CnfFormula work = f;
    work.normalize();
    for (const auto& clause : work.clauses)
        if (clause.size() > 3)
            throw std::invalid_argument("solution-size reduction expects a 3-SAT formula");
    if (work.has_empty_clause()) throw std::invalid_argument("empty clause");

    // pad to n = 2^(2q) with q a power of two: 4, 16, 256, ...
    int padded = 4;
    int q = 1;
    while (padded < work.variable_count) {
        q *= 2;
        padded = 1 << (2 * q);
    }
    if (padded > padded_cap)
        throw CapExceeded("tc_solsize_reduction: padded variable count " + std::to_string(padded) +
                          " exceeds cap " + std::to_string(padded_cap));
    const int r = 2 * q;       // log2(padded)
    const int s = padded / r;  // bucket size
    const int m = work.clause_count();

    TcBuilder tb;
    std::vector<std::unordered_map<int, int>> bucket_bits(r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < s; ++j) {
            int var = i * s + j + 1;
            if (var <= work.variable_count) bucket_bits[i][var] = j;
        }

    // items first: buckets, clause pairs, bit heads' pendants, isolated
    std::vector<int> b_items(r);
    for (int i = 0; i < r; ++i) b_items[i] = tb.add_item("bucket " + std::to_string(i + 1), "bucket");
    std::vector<int> c_circ(m), c_star(m);
    for (int j = 0; j < m; ++j) {
        c_circ[j] = tb.add_item("ccirc clause " + std::to_string(j + 1), "ccirc");
        c_star[j] = tb.add_item("cstar clause " + std::to_string(j + 1), "cstar");
    }

    for (int i = 0; i < r; ++i) {
        for (int l = 0; l < (1 << s); ++l) {
            int t = tb.add_test(
                "assign bucket " + std::to_string(i + 1) + " code " + std::to_string(l + 1),
                "assign");
            tb.put(t, b_items[i]);
            for (int j = 0; j < m; ++j)
                if (bucket_satisfies(work.clauses[j], bucket_bits[i], l)) tb.put(t, c_circ[j]);
        }
    }

    int p = 0;
    if (m > 0) {
        while ((1 << (p)) < m) ++p;
        ++p;  // ceil(log2(m)) + 1
        for (int b = 0; b < p; ++b) {
            int t = tb.add_test("bitrep bit " + std::to_string(b + 1), "bitrep");
            int tail = tb.add_item("bitrep bit " + std::to_string(b + 1) + " pendant",
                                   "bitrep-pendant");
            tb.put(t, tail);
            for (int j = 0; j < m; ++j)
                if (((j + 1) >> b) & 1) {
                    tb.put(t, c_circ[j]);
                    tb.put(t, c_star[j]);
                }
        }
        int shared = tb.add_test("bitrep shared", "bitrep");
        int shared_tail = tb.add_item("bitrep shared pendant", "bitrep-pendant");
        tb.put(shared, shared_tail);
        for (int j = 0; j < m; ++j) {
            tb.put(shared, c_circ[j]);
            tb.put(shared, c_star[j]);
        }
    }

    tb.add_item("isolated", "isolated");
    ReducedTc out = tb.finish();
    out.p = p;
    out.k = m > 0 ? r + p + 1 : r;
    return out;
}

// ------------------------------------------- structured exact LDS decision

namespace {

struct ComponentChoice {
    std::uint64_t shared_bits = 0;  // exposed signatures that other components can also expose
    int cost = 0;
};

}  // namespace

StructuredLdsResult solve_reduced_lds(const Graph& g, long long k, const StructuredLdsCaps& caps) {
    const int n = g.vertex_count();
    std::vector<int> forced = pendant_forced_vertices(g);
    for (int v = 0; v < n; ++v)
        if (g.degree(v) == 0) forced.push_back(v);  // isolated vertices are never dominated
    std::sort(forced.begin(), forced.end());
    forced.erase(std::unique(forced.begin(), forced.end()), forced.end());
    if (static_cast<int>(forced.size()) > caps.forced_vertices)
        throw CapExceeded("structured LDS solver: forced set too large");

    std::vector<int> forced_index(n, -1);
    for (size_t i = 0; i < forced.size(); ++i) forced_index[forced[i]] = static_cast<int>(i);

    // components of G - F
    std::vector<std::vector<int>> components;
    {
        std::vector<char> seen(n, 0);
        for (int v : forced) seen[v] = 1;
        for (int v = 0; v < n; ++v) {
            if (seen[v]) continue;
            std::vector<int> comp, stack{v};
            seen[v] = 1;
            while (!stack.empty()) {
                int x = stack.back();
                stack.pop_back();
                comp.push_back(x);
                for (int y : g.neighbors(x))
                    if (forced_index[y] < 0 && !seen[y]) {
                        seen[y] = 1;
                        stack.push_back(y);
                    }
            }
            std::sort(comp.begin(), comp.end());
            if (static_cast<int>(comp.size()) > caps.component_vertices)
                throw CapExceeded("structured LDS solver: component of " +
                                  std::to_string(comp.size()) + " vertices exceeds cap");
            components.push_back(std::move(comp));
        }
    }

    // per component: every subset choice that is internally valid, reduced to
    // (exposed F-signature set -> minimum cost)
    std::vector<std::map<std::vector<std::uint64_t>, int>> choices(components.size());
    std::map<std::uint64_t, int> mask_component_count;  // distinct components exposing the mask
    for (size_t ci = 0; ci < components.size(); ++ci) {
        const auto& comp = components[ci];
        const int cs = static_cast<int>(comp.size());
        std::vector<std::uint64_t> fmask(cs, 0);
        std::vector<std::uint32_t> cmask(cs, 0);
        std::vector<int> local(n, -1);
        for (int i = 0; i < cs; ++i) local[comp[i]] = i;
        for (int i = 0; i < cs; ++i)
            for (int u : g.neighbors(comp[i])) {
                if (forced_index[u] >= 0)
                    fmask[i] |= std::uint64_t{1} << forced_index[u];
                else
                    cmask[i] |= std::uint32_t{1} << local[u];
            }

        std::set<std::uint64_t> seen_masks;
        std::vector<std::pair<std::uint64_t, std::uint32_t>> sigs;
        for (std::uint32_t take = 0; take < (1u << cs); ++take) {
            sigs.clear();
            bool valid = true;
            std::vector<std::uint64_t> exposed;
            for (int i = 0; i < cs && valid; ++i) {
                if ((take >> i) & 1) continue;
                std::uint32_t tsig = cmask[i] & take;
                if (fmask[i] == 0 && tsig == 0) valid = false;  // undominated
                sigs.emplace_back(fmask[i], tsig);
                if (tsig == 0) exposed.push_back(fmask[i]);
            }
            if (!valid) continue;
            std::sort(sigs.begin(), sigs.end());
            if (std::adjacent_find(sigs.begin(), sigs.end()) != sigs.end()) continue;
            std::sort(exposed.begin(), exposed.end());
            int cost = std::popcount(take);
            auto [it, inserted] = choices[ci].emplace(std::move(exposed), cost);
            if (!inserted && cost < it->second) it->second = cost;
        }
        if (choices[ci].empty())
            throw std::logic_error("component admits no valid choice although taking all must work");
        std::set<std::uint64_t> masks_here;
        for (const auto& [exp, cost] : choices[ci])
            for (std::uint64_t msk : exp) masks_here.insert(msk);
        for (std::uint64_t msk : masks_here) ++mask_component_count[msk];
    }

    // signatures exposable by two or more components clash across components;
    // give them global bit indices and run a frontier DP
    std::map<std::uint64_t, int> shared_index;
    for (const auto& [msk, cnt] : mask_component_count)
        if (cnt >= 2) {
            if (static_cast<int>(shared_index.size()) >= caps.shared_mask_bits)
                throw CapExceeded("structured LDS solver: too many shared signatures");
            int idx = static_cast<int>(shared_index.size());
            shared_index[msk] = idx;
        }

    std::vector<std::vector<ComponentChoice>> compact(components.size());
    for (size_t ci = 0; ci < components.size(); ++ci) {
        std::map<std::uint64_t, int> best;  // shared-bit pattern -> min cost
        for (const auto& [exp, cost] : choices[ci]) {
            std::uint64_t bits = 0;
            for (std::uint64_t msk : exp) {
                auto it = shared_index.find(msk);
                if (it != shared_index.end()) bits |= std::uint64_t{1} << it->second;
            }
            auto [it, inserted] = best.emplace(bits, cost);
            if (!inserted && cost < it->second) it->second = cost;
        }
        for (const auto& [bits, cost] : best) compact[ci].push_back({bits, cost});
    }

    // bits still relevant after component i (shared masks some later component exposes)
    std::vector<std::uint64_t> suffix_relevant(components.size() + 1, 0);
    for (int ci = static_cast<int>(components.size()) - 1; ci >= 0; --ci) {
        std::uint64_t here = 0;
        for (const auto& choice : compact[ci]) here |= choice.shared_bits;
        suffix_relevant[ci] = suffix_relevant[ci + 1] | here;
    }

    std::unordered_map<std::uint64_t, int> dp{{0, 0}};
    for (size_t ci = 0; ci < components.size(); ++ci) {
        std::unordered_map<std::uint64_t, int> next;
        for (const auto& [used, cost] : dp)
            for (const auto& choice : compact[ci]) {
                if (used & choice.shared_bits) continue;  // an exposed signature repeats
                std::uint64_t nu = (used | choice.shared_bits) & suffix_relevant[ci + 1];
                int nc = cost + choice.cost;
                auto [it, inserted] = next.emplace(nu, nc);
                if (!inserted && nc < it->second) it->second = nc;
            }
        dp = std::move(next);
        if (dp.empty()) break;
        if (dp.size() > caps.state_cap)
            throw CapExceeded("structured LDS solver: frontier state cap exceeded");
    }

    StructuredLdsResult res;
    if (dp.empty()) {
        // cannot happen: taking every component vertex is always valid
        throw std::logic_error("structured LDS solver lost all states");
    }
    int best = dp.begin()->second;
    for (const auto& [used, cost] : dp) best = std::min(best, cost);
    res.optimum = static_cast<long long>(forced.size()) + best;
    res.yes = res.optimum <= k;
    return res;
}

// -------------------------------------------------- exact TC decision

TcDecision tc_branch_decide(const TestCoverInstance& inst, long long k, std::uint64_t node_cap) {
    inst.validate();
    const int u = inst.universe_size;
    const int t = inst.test_count();
    std::vector<std::vector<char>> contains(t, std::vector<char>(u, 0));
    for (int i = 0; i < t; ++i)
        for (int item : inst.tests[i]) contains[i][item] = 1;

    struct PairInfo {
        std::vector<int> separators;
    };
    std::vector<PairInfo> pairs;
    for (int a = 0; a < u; ++a)
        for (int b = a + 1; b < u; ++b) {
            PairInfo pi;
            for (int i = 0; i < t; ++i)
                if (contains[i][a] != contains[i][b]) pi.separators.push_back(i);
            if (pi.separators.empty()) return TcDecision::Infeasible;
            pairs.push_back(std::move(pi));
        }
    if (k < 0) return pairs.empty() ? TcDecision::Yes : TcDecision::No;

    std::vector<char> chosen(t, 0);
    long long chosen_count = 0;

    // forced closure: a pair with a single separator decides that test
    {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& pi : pairs) {
                int open = -1, open_count = 0;
                bool done = false;
                for (int i : pi.separators) {
                    if (chosen[i]) {
                        done = true;
                        break;
                    }
                    open = i;
                    if (++open_count > 1) break;
                }
                if (done || open_count > 1) continue;
                if (open_count == 0) return TcDecision::No;  // cannot happen before choices
                chosen[open] = 1;
                ++chosen_count;
                changed = true;
            }
        }
    }
    if (chosen_count > k) return TcDecision::No;

    std::uint64_t nodes = 0;
    std::function<bool()> dfs = [&]() -> bool {
        if (++nodes > node_cap) throw CapExceeded("tc_branch_decide node cap exceeded");
        // pick the unresolved pair with the fewest open separators
        const PairInfo* pick = nullptr;
        int pick_open = -1;
        for (const auto& pi : pairs) {
            bool done = false;
            int open = 0;
            for (int i : pi.separators) {
                if (chosen[i]) {
                    done = true;
                    break;
                }
                ++open;
            }
            if (done) continue;
            if (open == 0) return false;
            if (!pick || open < pick_open) {
                pick = &pi;
                pick_open = open;
                if (open == 1) break;
            }
        }
        if (!pick) return true;  // every pair separated
        if (chosen_count == k) return false;
        for (int i : pick->separators) {
            chosen[i] = 1;
            ++chosen_count;
            if (dfs()) return true;
            chosen[i] = 0;
            --chosen_count;
        }
        return false;
    };
    return dfs() ? TcDecision::Yes : TcDecision::No;
}

// ------------------------------------------------------------- verify

VerifyReport verify_reduction(const CnfFormula& f, ReductionKind kind, const OracleCaps& caps) {
    VerifyReport rep;
    CnfFormula work = f;
    work.normalize();
    if (work.has_empty_clause()) {
        rep.skipped = true;
        rep.skip_reason = "empty clause";
        return rep;
    }
    std::optional<std::vector<bool>> sat;
    try {
        sat = brute_force_sat(work, caps.sat_variables);
    } catch (const std::invalid_argument& e) {
        rep.skipped = true;
        rep.skip_reason = e.what();
        return rep;
    }
    rep.sat = sat.has_value();

    try {
        switch (kind) {
            case ReductionKind::LdsTreewidth: {
                ReducedGraph red = lds_tw_reduction(to_33sat(work));
                rep.k = red.k;
                rep.sizes = {red.graph.vertex_count(), red.graph.edge_count()};
                rep.instance_yes = solve_reduced_lds(red.graph, red.k).yes;
                break;
            }
            case ReductionKind::LdsSolutionSize: {
                ReducedGraph red = lds_solsize_reduction(work);
                rep.k = red.k;
                rep.sizes = {red.graph.vertex_count(), red.graph.edge_count()};
                rep.instance_yes = solve_reduced_lds(red.graph, red.k).yes;
                break;
            }
            case ReductionKind::TcTreewidth: {
                ReducedTc red = tc_tw_reduction(to_33sat(work));
                rep.k = red.k;
                rep.sizes = {red.instance.universe_size, red.instance.test_count()};
                rep.instance_yes = tc_branch_decide(red.instance, red.k) == TcDecision::Yes;
                break;
            }
            case ReductionKind::TcSolutionSize: {
                ReducedTc red = tc_solsize_reduction(work);
                rep.k = red.k;
                rep.sizes = {red.instance.universe_size, red.instance.test_count()};
                rep.instance_yes = tc_branch_decide(red.instance, red.k) == TcDecision::Yes;
                break;
            }
        }
    } catch (const CapExceeded& e) {
        rep.skipped = true;
        rep.skip_reason = e.what();
        return rep;
    }
    rep.agree = rep.sat == rep.instance_yes;
    return rep;
}

}  // namespace idsolve
