#include "idsolve/test_cover.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

namespace idsolve {

void TestCoverInstance::validate() const {
    if (universe_size < 0) throw std::invalid_argument("universe size must be non-negative");
    for (const auto& t : tests) {
        int prev = -1;
        for (int item : t) {
            if (item < 0 || item >= universe_size)
                throw std::invalid_argument("item id " + std::to_string(item) + " out of range");
            if (item == prev) throw std::invalid_argument("duplicate item in test");
            if (item < prev) throw std::invalid_argument("test items must be sorted");
            prev = item;
        }
    }
}

bool is_test_cover(const TestCoverInstance& inst, const std::vector<int>& chosen) {
    const int n = inst.universe_size;
    const int words = (static_cast<int>(chosen.size()) + 63) / 64;
    // signature of an item = set of chosen tests containing it
    std::vector<std::vector<std::uint64_t>> sig(n, std::vector<std::uint64_t>(std::max(words, 1), 0));
    int pos = 0;
    for (int idx : chosen) {
        if (idx < 0 || idx >= inst.test_count())
            throw std::invalid_argument("test index out of range");
        for (int item : inst.tests[idx]) sig[item][pos / 64] |= std::uint64_t{1} << (pos % 64);
        ++pos;
    }
    std::sort(sig.begin(), sig.end());
    return std::adjacent_find(sig.begin(), sig.end()) == sig.end();
}

Graph aux_graph(const TestCoverInstance& inst) {
    inst.validate();
    const int t = inst.test_count();
    Graph g(t + inst.universe_size);
    std::vector<Role> roles(t + inst.universe_size, Role::Blue);
    for (int i = 0; i < t; ++i) roles[i] = Role::Red;
    for (int i = 0; i < t; ++i)
        for (int item : inst.tests[i]) g.add_edge(i, t + item);
    g.set_roles(std::move(roles));
    return g;
}

TestCoverInstance tc_from_aux(const Graph& g) {
    if (!g.has_roles()) throw std::invalid_argument("aux graph must carry red/blue roles");
    std::vector<int> red_ids, item_of(g.vertex_count(), -1);
    int items = 0;
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (g.role(v) == Role::Red)
            red_ids.push_back(v);
        else
            item_of[v] = items++;
    }
    TestCoverInstance inst;
    inst.universe_size = items;
    inst.tests.reserve(red_ids.size());
    for (int r : red_ids) {
        std::vector<int> t;
        for (int b : g.neighbors(r)) t.push_back(item_of[b]);
        std::sort(t.begin(), t.end());
        inst.tests.push_back(std::move(t));
    }
    return inst;
}

TestCoverInstance make_random_tc(int universe, int tests, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    TestCoverInstance inst;
    inst.universe_size = universe;
    for (int i = 0; i < tests; ++i) {
        std::vector<int> t;
        for (int item = 0; item < universe; ++item)
            if (unif(rng) < p) t.push_back(item);
        inst.tests.push_back(std::move(t));
    }
    return inst;
}

}  // namespace idsolve
