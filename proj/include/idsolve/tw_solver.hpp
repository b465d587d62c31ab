#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "idsolve/graph.hpp"
#include "idsolve/oracles.hpp"
#include "idsolve/test_cover.hpp"
#include "idsolve/tree_decomposition.hpp"

namespace idsolve {

struct SolveTimeout : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One dynamic-programming state at a nice-tree-decomposition node.
//
// Bag-position masks (bit i = i-th vertex of the sorted bag):
//   ymask - solution vertices in the bag
//   wmask - bag vertices with a neighbor among forgotten solution vertices
//   plusmask - bag vertices whose current signature equals the frozen
//              signature of some forgotten vertex that is itself dominated by
//              a forgotten solution vertex (so the clash is not visible in a)
//   pairs - unordered bag pairs whose full signatures in G_t are equal
//
// a holds the signatures of forgotten non-solution vertices that lie entirely
// inside Y, encoded as masks over Y-ranks (Y sorted by vertex id). Signatures
// touching a forgotten solution vertex leave a; their clashes with bag
// vertices ride on plusmask. The derived tuple (Y, W, A, D, B) of the
// textbook formulation is recoverable: D is the multiset of bag signatures,
// which adjacency and ymask determine.
struct DpState {
    std::uint32_t ymask = 0;
    std::uint32_t wmask = 0;
    std::uint32_t plusmask = 0;
    std::uint64_t pairs_lo = 0;
    std::uint64_t pairs_hi = 0;
    std::vector<std::uint16_t> a;  // sorted, unique

    bool operator==(const DpState&) const = default;
};

struct DpStateHash {
    std::size_t operator()(const DpState& s) const;
};

struct DpEntry {
    int cost = 0;
    std::vector<int> chosen;  // filled only in witness mode, sorted
};

using StateMap = std::unordered_map<DpState, DpEntry, DpStateHash>;

struct TwOptions {
    int budget = -1;             // prune states above this cost when >= 0
    bool witness = false;
    bool check_invariants = false;
    double timeout_seconds = 0;  // 0 = no deadline
};

enum class TwStatus { Found, NoneWithinBudget, Infeasible };

struct TwOutcome {
    TwStatus status = TwStatus::NoneWithinBudget;
    int optimum = -1;            // valid when status == Found
    std::vector<int> witness;    // vertices (LDS) or test indices (TC)
    std::uint64_t states_total = 0;
    std::uint64_t states_peak = 0;  // max states held at one node
};

// Reachable-state dynamic program over a nice tree decomposition. The
// problem is described by two vertex classes: selectable vertices may enter
// the solution, locatable vertices need non-empty pairwise-distinct
// signatures (for Test Cover one empty signature is allowed).
class TwEngine {
public:
    TwEngine(const Graph& g, const NiceTreeDecomposition& ntd, std::vector<char> selectable,
             std::vector<char> locatable, bool allow_one_empty_signature);

    TwOutcome solve(const TwOptions& options = {});

    // Transition primitives, exposed for tests. Costs travel with the entry.
    StateMap leaf_states(int node) const;
    // parent states generated from one child state (up to two: take / skip)
    std::vector<std::pair<DpState, DpEntry>> introduce_states(int node, const DpState& s,
                                                              const DpEntry& e) const;
    std::optional<std::pair<DpState, DpEntry>> forget_state(int node, const DpState& s,
                                                            const DpEntry& e) const;
    std::optional<std::pair<DpState, DpEntry>> join_states(int node, const DpState& s1,
                                                           const DpEntry& e1, const DpState& s2,
                                                           const DpEntry& e2) const;

    const NiceTreeDecomposition& decomposition() const { return ntd_; }

private:
    struct NodeCtx {
        std::vector<int> bag;                 // sorted vertex ids
        std::vector<std::uint32_t> adj;       // within-bag adjacency masks
        std::uint32_t locatable_mask = 0;
        std::uint32_t selectable_mask = 0;
        int special_pos = -1;                 // introduced/forgotten position
    };

    void check_state(const NodeCtx& ctx, const DpState& s) const;

    const Graph& g_;
    const NiceTreeDecomposition& ntd_;
    std::vector<char> selectable_, locatable_;
    bool allow_one_empty_;
    std::vector<NodeCtx> ctx_;
};

// Minimum locating-dominating set via the treewidth DP; ntd must be a valid
// nice decomposition of g. Status is Found or NoneWithinBudget.
TwOutcome solve_lds_tw(const Graph& g, const NiceTreeDecomposition& ntd,
                       const TwOptions& options = {});

// Test Cover over a nice decomposition of aux_graph(inst); witness holds
// test indices. Twin items yield Infeasible.
TwOutcome solve_tc_tw(const TestCoverInstance& inst, const NiceTreeDecomposition& ntd,
                      const TwOptions& options = {});

}  // namespace idsolve
