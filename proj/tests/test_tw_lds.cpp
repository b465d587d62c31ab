#include <doctest.h>

#include <algorithm>

#include "idsolve/graph.hpp"
#include "idsolve/oracles.hpp"
#include "idsolve/tree_decomposition.hpp"
#include "idsolve/tw_solver.hpp"

using namespace idsolve;

namespace {

NiceTreeDecomposition path_ntd(const std::vector<NiceNode>& nodes) {
    NiceTreeDecomposition ntd;
    ntd.nodes = nodes;
    ntd.root = static_cast<int>(nodes.size()) - 1;
    return ntd;
}

TwEngine lds_engine(const Graph& g, const NiceTreeDecomposition& ntd) {
    std::vector<char> all(g.vertex_count(), 1);
    return TwEngine(g, ntd, all, all, false);
}

TwOutcome solve_with_heuristic(const Graph& g, const TwOptions& opts = {}) {
    TreeDecomposition td = heuristic_td(g, EliminationStrategy::MinFill);
    NiceTreeDecomposition ntd = make_nice(g, td);
    return solve_lds_tw(g, ntd, opts);
}

bool has_pair(const DpState& s, int i, int j) {
    if (i > j) std::swap(i, j);
    int idx = j * (j - 1) / 2 + i;
    return idx < 64 ? (s.pairs_lo >> idx) & 1 : (s.pairs_hi >> (idx - 64)) & 1;
}

}  // namespace

TEST_CASE("leaf states") {
    Graph g(1);
    auto ntd = path_ntd({
        {NiceNodeType::Leaf, -1, {}, -1, -1},
        {NiceNodeType::Introduce, 0, {0}, 0, -1},
        {NiceNodeType::Forget, 0, {}, 1, -1},
    });
    TwEngine engine = lds_engine(g, ntd);
    StateMap leaf = engine.leaf_states(0);
    CHECK(leaf.size() <= 4);
    auto it = leaf.find(DpState{});
    REQUIRE(it != leaf.end());
    CHECK(it->second.cost == 0);
    for (const auto& [s, e] : leaf) CHECK(e.cost == 0);
    CHECK_THROWS_AS(engine.leaf_states(1), std::invalid_argument);
}

TEST_CASE("introduce transitions") {
    // vertices: 0, 1 in the bag, then introduce 2 adjacent to 1 only
    Graph g(3, {{1, 2}});
    auto ntd = path_ntd({
        {NiceNodeType::Leaf, -1, {}, -1, -1},
        {NiceNodeType::Introduce, 0, {0}, 0, -1},
        {NiceNodeType::Introduce, 1, {0, 1}, 1, -1},
        {NiceNodeType::Introduce, 2, {0, 1, 2}, 2, -1},
        {NiceNodeType::Forget, 0, {1, 2}, 3, -1},
        {NiceNodeType::Forget, 1, {2}, 4, -1},
        {NiceNodeType::Forget, 2, {}, 5, -1},
    });
    TwEngine engine = lds_engine(g, ntd);

    SUBCASE("isolated vertex into an empty-bag child state") {
        auto out = engine.introduce_states(1, DpState{}, DpEntry{0, {}});
        REQUIRE(out.size() == 2);
        // skip branch: nothing tracked yet, no pairs
        CHECK(out[0].first.ymask == 0);
        CHECK(out[0].first.pairs_lo == 0);
        CHECK(out[0].second.cost == 0);
        // take branch: Y grows, A unchanged, cost +1
        CHECK(out[1].first.ymask == 1);
        CHECK(out[1].first.a.empty());
        CHECK(out[1].second.cost == 1);
    }

    SUBCASE("take branch keeps A, drops pairs split by the new vertex") {
        // child state at bag {0,1}: both outside Y, paired (equal signatures)
        DpState paired;
        paired.pairs_lo = 1;  // pair (0,1)
        auto out = engine.introduce_states(3, paired, DpEntry{0, {}});
        REQUIRE(out.size() == 2);
        const DpState& skip = out[0].first;
        const DpState& take = out[1].first;
        // vertex 2 is adjacent to 1 but not 0: the old pair dies in the take
        // branch, survives in the skip branch
        CHECK(has_pair(skip, 0, 1));
        CHECK_FALSE(has_pair(take, 0, 1));
        CHECK(take.ymask == 0b100);
        CHECK(out[1].second.cost == 1);
    }

    SUBCASE("skip branch pairs the new vertex with signature twins") {
        // bag {0,1}, Y = {}, introduce 2: empty signature matches both
        auto out = engine.introduce_states(3, DpState{}, DpEntry{0, {}});
        const DpState& skip = out[0].first;
        CHECK(has_pair(skip, 0, 2));
        CHECK(has_pair(skip, 1, 2));
    }
}

TEST_CASE("forget transitions") {
    Graph p2 = make_path(2);
    auto ntd = path_ntd({
        {NiceNodeType::Leaf, -1, {}, -1, -1},
        {NiceNodeType::Introduce, 0, {0}, 0, -1},
        {NiceNodeType::Introduce, 1, {0, 1}, 1, -1},
        {NiceNodeType::Forget, 0, {1}, 2, -1},
        {NiceNodeType::Forget, 1, {}, 3, -1},
    });
    TwEngine engine = lds_engine(p2, ntd);

    SUBCASE("forgetting a solution vertex moves its neighbors into W") {
        DpState s;
        s.ymask = 0b01;  // vertex 0 chosen
        auto r = engine.forget_state(3, s, DpEntry{1, {0}});
        REQUIRE(r.has_value());
        CHECK(r->first.ymask == 0);
        CHECK(r->first.wmask == 0b1);  // vertex 1, now at position 0
        CHECK(r->second.cost == 1);
    }

    SUBCASE("a plus-flagged vertex cannot be forgotten") {
        DpState s;
        s.wmask = 0b01;
        s.plusmask = 0b01;  // vertex 0 clashes with a frozen signature
        auto r = engine.forget_state(3, s, DpEntry{1, {}});
        CHECK_FALSE(r.has_value());
    }

    SUBCASE("an undominated vertex cannot be forgotten in the LDS problem") {
        auto r = engine.forget_state(3, DpState{}, DpEntry{0, {}});
        CHECK_FALSE(r.has_value());
    }

    SUBCASE("two frozen signatures may not collide") {
        DpState s;
        s.ymask = 0b10;  // vertex 1 chosen, vertex 0 outside with sig {1}
        s.a = {1};       // a forgotten vertex already owns signature {1}
        auto r = engine.forget_state(3, s, DpEntry{2, {}});
        CHECK_FALSE(r.has_value());
    }

    SUBCASE("clean forgets record their signature in A") {
        DpState s;
        s.ymask = 0b10;
        auto r = engine.forget_state(3, s, DpEntry{1, {1}});
        REQUIRE(r.has_value());
        CHECK(r->first.a == std::vector<std::uint16_t>{1});
    }
}

TEST_CASE("join transitions") {
    SUBCASE("empty-graph branches join at cost 0") {
        Graph empty(0);
        NiceTreeDecomposition ntd;
        ntd.nodes = {
            {NiceNodeType::Leaf, -1, {}, -1, -1},
            {NiceNodeType::Leaf, -1, {}, -1, -1},
            {NiceNodeType::Join, -1, {}, 0, 1},
        };
        ntd.root = 2;
        TwEngine engine = lds_engine(empty, ntd);
        auto r = engine.join_states(2, DpState{}, DpEntry{0, {}}, DpState{}, DpEntry{0, {}});
        REQUIRE(r.has_value());
        CHECK(r->second.cost == 0);
    }

    Graph g(2);
    NiceTreeDecomposition ntd;
    ntd.nodes = {
        {NiceNodeType::Leaf, -1, {}, -1, -1},
        {NiceNodeType::Introduce, 0, {0}, 0, -1},
        {NiceNodeType::Introduce, 1, {0, 1}, 1, -1},
        {NiceNodeType::Leaf, -1, {}, -1, -1},
        {NiceNodeType::Introduce, 0, {0}, 3, -1},
        {NiceNodeType::Introduce, 1, {0, 1}, 4, -1},
        {NiceNodeType::Join, -1, {0, 1}, 2, 5},
        {NiceNodeType::Forget, 0, {1}, 6, -1},
        {NiceNodeType::Forget, 1, {}, 7, -1},
    };
    ntd.root = 8;
    TwEngine engine = lds_engine(g, ntd);

    SUBCASE("identical non-empty A families are rejected") {
        DpState s;
        s.ymask = 0b01;
        s.a = {1};
        auto r = engine.join_states(6, s, DpEntry{2, {}}, s, DpEntry{2, {}});
        CHECK_FALSE(r.has_value());
    }

    SUBCASE("pairs survive only when present on both sides") {
        DpState s1, s2;
        s1.pairs_lo = 1;
        auto r = engine.join_states(6, s1, DpEntry{0, {}}, s2, DpEntry{0, {}});
        REQUIRE(r.has_value());
        CHECK(r->first.pairs_lo == 0);
        auto r2 = engine.join_states(6, s1, DpEntry{0, {}}, s1, DpEntry{0, {}});
        REQUIRE(r2.has_value());
        CHECK(r2->first.pairs_lo == 1);
    }

    SUBCASE("join cost subtracts the shared solution part") {
        DpState s;
        s.ymask = 0b11;
        auto r = engine.join_states(6, s, DpEntry{3, {}}, s, DpEntry{2, {}});
        REQUIRE(r.has_value());
        CHECK(r->second.cost == 3 + 2 - 2);
    }
}

TEST_CASE("solve_lds_tw frozen examples") {
    CHECK(solve_with_heuristic(make_path(3)).optimum == 2);
    CHECK(solve_with_heuristic(make_star(3)).optimum == 3);
    CHECK(solve_with_heuristic(Graph(1)).optimum == 1);
    CHECK(solve_with_heuristic(make_path(2)).optimum == 1);

    Graph two_k2(4, {{0, 1}, {2, 3}});
    CHECK(solve_with_heuristic(two_k2).optimum == 2);

    TwOptions yes2;
    yes2.budget = 2;
    CHECK(solve_with_heuristic(make_path(3), yes2).status == TwStatus::Found);
    TwOptions no1;
    no1.budget = 1;
    CHECK(solve_with_heuristic(make_path(3), no1).status == TwStatus::NoneWithinBudget);
}

TEST_CASE("solve_lds_tw equals the oracle on random graphs") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        int n = 1 + static_cast<int>(seed % 8);
        double p = seed % 3 == 0 ? 0.2 : (seed % 3 == 1 ? 0.5 : 0.8);
        Graph g = make_random_graph(n, p, seed * 31 + 7);
        TwOptions opts;
        opts.check_invariants = true;
        TwOutcome got = solve_with_heuristic(g, opts);
        CAPTURE(seed);
        CHECK(got.optimum == brute_force_lds_opt(g));
        CHECK(got.states_total > 0);
    }
    for (int n = 1; n <= 10; ++n) {
        CHECK(solve_with_heuristic(make_path(n)).optimum == brute_force_lds_opt(make_path(n)));
        if (n >= 3)
            CHECK(solve_with_heuristic(make_cycle(n)).optimum == brute_force_lds_opt(make_cycle(n)));
        if (n >= 2)
            CHECK(solve_with_heuristic(make_star(n - 1)).optimum ==
                  brute_force_lds_opt(make_star(n - 1)));
    }
}

TEST_CASE("witness reconstruction is valid and deterministic") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        int n = 2 + static_cast<int>(seed % 7);
        Graph g = make_random_graph(n, 0.45, seed * 13 + 3);
        TwOptions opts;
        opts.witness = true;
        TwOutcome got = solve_with_heuristic(g, opts);
        REQUIRE(got.status == TwStatus::Found);
        CHECK(static_cast<int>(got.witness.size()) == got.optimum);
        CHECK(is_locating_dominating_set(g, got.witness));
        // brute force enumerates size-then-lex, so it also returns the
        // lexicographically smallest optimum
        auto brute = brute_force_lds(g, n);
        CHECK(got.witness == *brute);
    }
}

TEST_CASE("solve validates the decomposition") {
    Graph p3 = make_path(3);
    NiceTreeDecomposition bogus;
    bogus.nodes = {{NiceNodeType::Leaf, -1, {}, -1, -1}};
    bogus.root = 0;
    CHECK_THROWS_AS(solve_lds_tw(p3, bogus), std::invalid_argument);
}
