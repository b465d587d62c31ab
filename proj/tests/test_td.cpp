#include <doctest.h>

#include <stdexcept>
#include "idsolve/graph.hpp"
#include "idsolve/tree_decomposition.hpp"

using namespace idsolve;

TEST_CASE("validate_td accepts and rejects") {
    Graph k3 = make_complete(3);
    TreeDecomposition one_bag{{{0, 1, 2}}, {}};
    CHECK(validate_td(k3, one_bag).ok());

    Graph p3 = make_path(3);
    TreeDecomposition td{{{0, 1}, {1, 2}}, {{0, 1}}};
    CHECK(validate_td(p3, td).ok());

    TreeDecomposition bad{{{0, 1}, {2}}, {{0, 1}}};
    auto rep = validate_td(p3, bad);
    CHECK_FALSE(rep.ok());
    CHECK(rep.kind == TdReport::Kind::EdgeNotCovered);

    TreeDecomposition no_tree{{{0, 1}, {1, 2}}, {}};
    CHECK(validate_td(p3, no_tree).kind == TdReport::Kind::NotATree);

    TreeDecomposition missing{{{0}, {2}}, {{0, 1}}};
    CHECK(validate_td(p3, missing).kind == TdReport::Kind::VertexNotCovered);

    TreeDecomposition split{{{0, 1}, {1, 2}, {0}}, {{0, 1}, {1, 2}}};
    // vertex 0 occurs in bags 0 and 2 which are not adjacent
    CHECK(validate_td(p3, split).kind == TdReport::Kind::OccurrencesDisconnected);
}

TEST_CASE("width") {
    CHECK(width({{{0, 1, 2, 3}}, {}}) == 3);
    CHECK(width({{{0}, {1}}, {{0, 1}}}) == 0);
    CHECK(width({{{0, 1}, {1, 2}}, {{0, 1}}}) == 1);
}

TEST_CASE("make_nice on a single K2 bag") {
    Graph k2 = make_path(2);
    TreeDecomposition td{{{0, 1}}, {}};
    NiceTreeDecomposition ntd = make_nice(k2, td);
    CHECK(validate_nice(k2, ntd).ok());

    int leaves = 0, intros = 0, forgets = 0, joins = 0;
    for (const auto& nd : ntd.nodes) {
        switch (nd.type) {
            case NiceNodeType::Leaf: ++leaves; break;
            case NiceNodeType::Introduce: ++intros; break;
            case NiceNodeType::Forget: ++forgets; break;
            case NiceNodeType::Join: ++joins; break;
        }
    }
    CHECK(leaves == 1);
    CHECK(intros == 2);
    CHECK(forgets == 2);
    CHECK(joins == 0);
    CHECK(ntd.nodes[ntd.root].bag.empty());

    int w = 0;
    for (const auto& nd : ntd.nodes) w = std::max(w, static_cast<int>(nd.bag.size()) - 1);
    CHECK(w == 1);
}

TEST_CASE("make_nice binarizes shared bags into join trees") {
    // star of bags: center {0,1} with three children carrying 2, 3, 4
    Graph g(5, {{0, 1}, {1, 2}, {1, 3}, {1, 4}});
    TreeDecomposition td{{{0, 1}, {1, 2}, {1, 3}, {1, 4}}, {{0, 1}, {0, 2}, {0, 3}}};
    REQUIRE(validate_td(g, td).ok());
    NiceTreeDecomposition ntd = make_nice(g, td);
    CHECK(validate_nice(g, ntd).ok());
    int joins = 0;
    for (const auto& nd : ntd.nodes)
        if (nd.type == NiceNodeType::Join) {
            ++joins;
            CHECK(nd.bag == ntd.nodes[nd.child0].bag);
            CHECK(nd.bag == ntd.nodes[nd.child1].bag);
        }
    CHECK(joins == 2);  // three children, left-deep
}

TEST_CASE("make_nice is idempotent on validity and width") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Graph g = make_random_graph(2 + seed % 9, 0.4, seed);
        TreeDecomposition td = heuristic_td(g, EliminationStrategy::MinFill);
        REQUIRE(validate_td(g, td).ok());
        NiceTreeDecomposition ntd = make_nice(g, td);
        CHECK(validate_nice(g, ntd).ok());
        int w = -1;
        for (const auto& nd : ntd.nodes) w = std::max(w, static_cast<int>(nd.bag.size()) - 1);
        CHECK(w == width(td));
        // introduce vertex absent from child bag, forget vertex present in it
        for (const auto& nd : ntd.nodes) {
            if (nd.type == NiceNodeType::Introduce) {
                const auto& cb = ntd.nodes[nd.child0].bag;
                CHECK_FALSE(std::binary_search(cb.begin(), cb.end(), nd.vertex));
            }
            if (nd.type == NiceNodeType::Forget) {
                const auto& cb = ntd.nodes[nd.child0].bag;
                CHECK(std::binary_search(cb.begin(), cb.end(), nd.vertex));
            }
        }
    }
}

TEST_CASE("heuristic_td strategies") {
    for (auto strategy : {EliminationStrategy::MinDegree, EliminationStrategy::MinFill}) {
        // trees give width exactly 1
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Graph t = make_random_tree(2 + seed % 12, seed);
            TreeDecomposition td = heuristic_td(t, strategy);
            REQUIRE(validate_td(t, td).ok());
            CHECK(width(td) == 1);
        }
        Graph k4 = make_complete(4);
        TreeDecomposition td = heuristic_td(k4, strategy);
        REQUIRE(validate_td(k4, td).ok());
        CHECK(width(td) == 3);
    }
    Graph c4 = make_cycle(4);
    TreeDecomposition td = heuristic_td(c4, EliminationStrategy::MinDegree);
    REQUIRE(validate_td(c4, td).ok());
    CHECK(width(td) == 2);

    Graph empty(0);
    TreeDecomposition etd = heuristic_td(empty, EliminationStrategy::MinFill);
    CHECK(etd.bag_count() == 1);
    CHECK(etd.bags[0].empty());

    Graph isolated(3);
    TreeDecomposition itd = heuristic_td(isolated, EliminationStrategy::MinDegree);
    CHECK(validate_td(isolated, itd).ok());
}

TEST_CASE("exact_td_small") {
    CHECK(exact_td_small(make_path(4), 1).has_value());
    CHECK_FALSE(exact_td_small(make_complete(4), 2).has_value());
    CHECK(exact_td_small(Graph(0), 0).has_value());

    auto td = exact_td_small(make_cycle(5), 2);
    REQUIRE(td.has_value());
    CHECK(validate_td(make_cycle(5), *td).ok());
    CHECK(width(*td) <= 2);
    CHECK_FALSE(exact_td_small(make_cycle(5), 1).has_value());

    CHECK_THROWS_AS(exact_td_small(make_path(13), 3), std::invalid_argument);

    // agreement with the heuristic on graphs where both are exact
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        Graph g = make_random_graph(2 + seed % 7, 0.5, seed * 3 + 5);
        int lo = 0;
        while (!exact_td_small(g, lo)) ++lo;
        TreeDecomposition h = heuristic_td(g, EliminationStrategy::MinFill);
        CHECK(width(h) >= lo);
    }
}
