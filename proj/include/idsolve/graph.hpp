#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace idsolve {

// Optional vertex role for the bipartite auxiliary form of a test-cover
// instance: red vertices are tests, blue vertices are items.
enum class Role : std::uint8_t { None = 0, Red = 1, Blue = 2 };

// Undirected simple graph over vertices 0..n-1. Immutable after
// construction; no self-loops, no duplicate edges.
class Graph {
public:
    Graph() = default;
    explicit Graph(int vertex_count);
    Graph(int vertex_count, const std::vector<std::pair<int, int>>& edges);

    // Throws std::invalid_argument on self-loops, duplicates or range errors.
    void add_edge(int u, int v);

    // Appends an isolated vertex and returns its id.
    int add_vertex();

    int vertex_count() const { return static_cast<int>(adj_.size()); }
    int edge_count() const { return edge_count_; }
    bool has_edge(int u, int v) const;
    const std::vector<int>& neighbors(int v) const { return adj_.at(v); }
    int degree(int v) const { return static_cast<int>(adj_.at(v).size()); }

    std::vector<std::pair<int, int>> edges() const;  // u < v, sorted

    bool has_roles() const { return !roles_.empty(); }
    Role role(int v) const { return roles_.empty() ? Role::None : roles_.at(v); }
    // Assigns roles for every vertex and checks the bipartite invariant:
    // every edge must join a red and a blue vertex.
    void set_roles(std::vector<Role> roles);

    bool operator==(const Graph& other) const;

private:
    void check_vertex(int v) const;

    std::vector<std::vector<int>> adj_;
    std::vector<Role> roles_;
    int edge_count_ = 0;
};

// True iff for every v not in s, N(v) & s is non-empty, and no two vertices
// outside s share the same neighborhood inside s. Vertices of s itself carry
// no constraint. Throws on out-of-range ids in s.
bool is_locating_dominating_set(const Graph& g, const std::vector<int>& s);

// All vertices adjacent to a degree-1 vertex. For an isolated edge both
// endpoints are mutually pendant; forcing both would lose optimality, so only
// the smaller endpoint is reported. Some optimal locating-dominating set
// contains every reported vertex.
std::vector<int> pendant_forced_vertices(const Graph& g);

// Small deterministic graph builders used across solvers and tests.
Graph make_path(int n);
Graph make_cycle(int n);
Graph make_star(int leaves);
Graph make_complete(int n);
// G(n,p) with edges drawn pair-by-pair in (u,v) order from a seeded mt19937_64.
Graph make_random_graph(int n, double p, std::uint64_t seed);
// Uniform random labelled tree (random attachment), deterministic per seed.
Graph make_random_tree(int n, std::uint64_t seed);

}  // namespace idsolve
