#include "idsolve/partition_solver.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace idsolve {

Partition Partition::single_block(int universe_size) {
    Partition p;
    if (universe_size > 0) {
        std::vector<int> all(universe_size);
        for (int i = 0; i < universe_size; ++i) all[i] = i;
        p.blocks.push_back(std::move(all));
    }
    return p;
}

Partition Partition::singletons(int universe_size) {
    Partition p;
    for (int i = 0; i < universe_size; ++i) p.blocks.push_back({i});
    return p;
}

void Partition::canonicalize() {
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    blocks.erase(std::remove_if(blocks.begin(), blocks.end(),
                                [](const auto& b) { return b.empty(); }),
                 blocks.end());
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

bool Partition::all_singletons() const {
    return std::all_of(blocks.begin(), blocks.end(), [](const auto& b) { return b.size() == 1; });
}

Partition refine(const Partition& p, const std::vector<int>& test) {
    std::set<int> in_test(test.begin(), test.end());
    Partition out;
    for (const auto& block : p.blocks) {
        std::vector<int> inside, outside;
        for (int item : block) (in_test.count(item) ? inside : outside).push_back(item);
        if (!inside.empty()) out.blocks.push_back(std::move(inside));
        if (!outside.empty()) out.blocks.push_back(std::move(outside));
    }
    out.canonicalize();
    return out;
}

namespace {

struct DpDriver {
    std::map<Partition, int> table;
    std::set<Partition> reached;

    void seed(Partition p, int cost) {
        reached.insert(p);
        auto it = table.find(p);
        if (it == table.end() || cost < it->second) table[std::move(p)] = cost;
    }

    void step(const std::vector<int>& test) {
        // skip keeps all current entries; take refines them
        std::vector<std::pair<Partition, int>> updates;
        for (const auto& [p, cost] : table) updates.emplace_back(refine(p, test), cost + 1);
        for (auto& [p, cost] : updates) seed(std::move(p), cost);
    }

    PartitionSolveResult finish(int universe_size, int budget) const {
        PartitionSolveResult res;
        res.reached_partitions = reached.size();
        auto it = table.find(Partition::singletons(universe_size));
        if (it == table.end()) {
            res.status = TcStatus::Infeasible;
            return res;
        }
        if (budget >= 0 && it->second > budget) {
            res.status = TcStatus::NoneWithinBudget;
            return res;
        }
        res.status = TcStatus::Found;
        res.optimum = it->second;
        return res;
    }
};

void check_cap(const TestCoverInstance& inst, int universe_cap) {
    inst.validate();
    if (inst.universe_size > universe_cap)
        throw CapExceeded("partition DP cap exceeded: " + std::to_string(inst.universe_size) +
                          " > " + std::to_string(universe_cap) + " items");
}

}  // namespace

PartitionSolveResult solve_tc_partition(const TestCoverInstance& inst, int budget, int universe_cap) {
    check_cap(inst, universe_cap);
    DpDriver dp;
    dp.seed(Partition::single_block(inst.universe_size), 0);
    for (const auto& test : inst.tests) dp.step(test);
    return dp.finish(inst.universe_size, budget);
}

PartitionSolveResult solve_tc_partition_literal(const TestCoverInstance& inst, int budget,
                                                int universe_cap) {
    check_cap(inst, universe_cap);
    PartitionSolveResult best;
    best.status = TcStatus::Infeasible;
    Partition target = Partition::singletons(inst.universe_size);
    if (Partition::single_block(inst.universe_size) == target) {
        // nothing to separate; the empty sub-family wins
        best.status = TcStatus::Found;
        best.optimum = 0;
        best.reached_partitions = 1;
        return best;
    }
    std::uint64_t reached = 0;
    for (int first = 0; first < inst.test_count(); ++first) {
        DpDriver dp;
        dp.seed(refine(Partition::single_block(inst.universe_size), inst.tests[first]), 1);
        for (int j = first + 1; j < inst.test_count(); ++j) dp.step(inst.tests[j]);
        PartitionSolveResult r = dp.finish(inst.universe_size, budget);
        reached = std::max(reached, r.reached_partitions);
        if (r.status == TcStatus::Found &&
            (best.status != TcStatus::Found || r.optimum < best.optimum))
            best = r;
        if (r.status == TcStatus::NoneWithinBudget && best.status == TcStatus::Infeasible)
            best.status = TcStatus::NoneWithinBudget;
    }
    best.reached_partitions = std::max(best.reached_partitions, reached);
    return best;
}

std::vector<std::uint64_t> bell_numbers(int n) {
    // Bell triangle
    std::vector<std::uint64_t> bell{1};
    std::vector<std::uint64_t> row{1};
    for (int i = 1; i <= n; ++i) {
        std::vector<std::uint64_t> next{row.back()};
        for (std::uint64_t x : row) next.push_back(next.back() + x);
        row = std::move(next);
        bell.push_back(row.front());
    }
    return bell;
}

}  // namespace idsolve
