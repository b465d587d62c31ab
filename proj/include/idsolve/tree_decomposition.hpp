#pragma once

#include <optional>
#include <string>
#include <vector>

#include "idsolve/graph.hpp"

namespace idsolve {

struct TreeDecomposition {
    std::vector<std::vector<int>> bags;        // each sorted ascending
    std::vector<std::pair<int, int>> edges;    // bag-id pairs forming a tree

    int bag_count() const { return static_cast<int>(bags.size()); }
};

// max |bag| - 1; requires at least one bag.
int width(const TreeDecomposition& td);

struct TdReport {
    enum class Kind { Ok, NotATree, VertexNotCovered, EdgeNotCovered, OccurrencesDisconnected };
    Kind kind = Kind::Ok;
    std::string message;
    bool ok() const { return kind == Kind::Ok; }
};

// Checks the three tree-decomposition conditions plus tree-ness of the bag
// graph. Reports the first violation found with a witness in the message.
TdReport validate_td(const Graph& g, const TreeDecomposition& td);

enum class NiceNodeType { Leaf, Introduce, Forget, Join };

struct NiceNode {
    NiceNodeType type = NiceNodeType::Leaf;
    int vertex = -1;               // introduced/forgotten vertex, if any
    std::vector<int> bag;          // sorted ascending
    int child0 = -1, child1 = -1;  // node ids; -1 when absent
};

// Rooted nice tree decomposition: root and leaf bags are empty, introduce and
// forget nodes change the bag by exactly one vertex, join children share the
// parent's bag.
struct NiceTreeDecomposition {
    std::vector<NiceNode> nodes;
    int root = -1;

    int node_count() const { return static_cast<int>(nodes.size()); }
    // Node ids in bottom-up (children before parents) order.
    std::vector<int> topological_order() const;
};

// Structural validation of the nice-form invariants plus the underlying
// tree-decomposition conditions against g.
TdReport validate_nice(const Graph& g, const NiceTreeDecomposition& ntd);

// Converts a valid tree decomposition into a nice one of the same width.
// Joins are binarized left-deep; the root is derived from bag 0 with forgets
// appended until the root bag is empty. Throws on invalid input.
NiceTreeDecomposition make_nice(const Graph& g, const TreeDecomposition& td);

enum class EliminationStrategy { MinDegree, MinFill };

// Elimination-order heuristic (no optimality claim). Ties break toward the
// lowest vertex id, so the result is deterministic.
TreeDecomposition heuristic_td(const Graph& g, EliminationStrategy strategy);

// Exact width check by search over elimination orders, memoized on the
// eliminated set. Only for graphs with at most `vertex_cap` vertices.
std::optional<TreeDecomposition> exact_td_small(const Graph& g, int max_width, int vertex_cap = 12);

}  // namespace idsolve
