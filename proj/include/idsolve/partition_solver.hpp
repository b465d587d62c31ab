#pragma once

#include <cstdint>
#include <vector>

#include "idsolve/oracles.hpp"
#include "idsolve/test_cover.hpp"

namespace idsolve {

// Canonical partition of the items 0..n-1: no empty blocks, block contents
// sorted, blocks ordered by their minimum element.
struct Partition {
    std::vector<std::vector<int>> blocks;

    static Partition single_block(int universe_size);
    static Partition singletons(int universe_size);
    void canonicalize();
    bool all_singletons() const;
    int block_count() const { return static_cast<int>(blocks.size()); }

    bool operator==(const Partition&) const = default;
    bool operator<(const Partition& o) const { return blocks < o.blocks; }
};

// Splits every block into (block & test, block \ test), drops empties and
// canonicalizes. refine(p, {}) == p; refine is idempotent per test and
// order-independent across tests.
Partition refine(const Partition& p, const std::vector<int>& test);

struct PartitionSolveResult {
    TcStatus status = TcStatus::Infeasible;
    int optimum = -1;              // valid when status == Found
    std::uint64_t reached_partitions = 0;  // distinct partitions seen
};

// Test Cover as a take/skip DP over the tests in input order, tracking the
// item partition each prefix of choices induces. The seeded start is
// ({{U}}, cost 0); budget < 0 means optimize. Universe capped by the Bell
// number growth (default 10).
PartitionSolveResult solve_tc_partition(const TestCoverInstance& inst, int budget = -1,
                                        int universe_cap = 10);

// The same recurrence driven the literal way: an outer loop over the choice
// of lowest-indexed solution test r1, seeded with (partition by r1, cost 1).
// Exposed for cross-checking; only meaningful when the optimum is >= 1.
PartitionSolveResult solve_tc_partition_literal(const TestCoverInstance& inst, int budget = -1,
                                                int universe_cap = 10);

// Bell numbers B(0..n), for the reached-partition bound.
std::vector<std::uint64_t> bell_numbers(int n);

}  // namespace idsolve
