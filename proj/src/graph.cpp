#include "idsolve/graph.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace idsolve {

Graph::Graph(int vertex_count) {
    if (vertex_count < 0) throw std::invalid_argument("vertex count must be non-negative");
    adj_.resize(vertex_count);
}

Graph::Graph(int vertex_count, const std::vector<std::pair<int, int>>& edges) : Graph(vertex_count) {
    for (auto [u, v] : edges) add_edge(u, v);
}

void Graph::check_vertex(int v) const {
    if (v < 0 || v >= vertex_count())
        throw std::invalid_argument("vertex id " + std::to_string(v) + " out of range");
}

void Graph::add_edge(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
    if (has_edge(u, v))
        throw std::invalid_argument("duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    if (!roles_.empty() && roles_[u] == roles_[v])
        throw std::invalid_argument("edge violates red/blue bipartition");
    auto insert_sorted = [](std::vector<int>& vec, int x) {
        vec.insert(std::upper_bound(vec.begin(), vec.end(), x), x);
    };
    insert_sorted(adj_[u], v);
    insert_sorted(adj_[v], u);
    ++edge_count_;
}

int Graph::add_vertex() {
    if (!roles_.empty()) throw std::logic_error("cannot grow a graph after roles are set");
    adj_.emplace_back();
    return vertex_count() - 1;
}

bool Graph::has_edge(int u, int v) const {
    check_vertex(u);
    check_vertex(v);
    const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
    int t = adj_[u].size() <= adj_[v].size() ? v : u;
    return std::binary_search(a.begin(), a.end(), t);
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count_);
    for (int u = 0; u < vertex_count(); ++u)
        for (int v : adj_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

void Graph::set_roles(std::vector<Role> roles) {
    if (static_cast<int>(roles.size()) != vertex_count())
        throw std::invalid_argument("role vector size mismatch");
    for (Role r : roles)
        if (r == Role::None) throw std::invalid_argument("roles must partition vertices into red/blue");
    for (int u = 0; u < vertex_count(); ++u)
        for (int v : adj_[u])
            if (roles[u] == roles[v])
                throw std::invalid_argument("edge violates red/blue bipartition");
    roles_ = std::move(roles);
}

bool Graph::operator==(const Graph& other) const {
    return adj_ == other.adj_ && roles_ == other.roles_;
}

bool is_locating_dominating_set(const Graph& g, const std::vector<int>& s) {
    const int n = g.vertex_count();
    std::vector<char> in_s(n, 0);
    for (int v : s) {
        if (v < 0 || v >= n) throw std::invalid_argument("solution vertex out of range");
        in_s[v] = 1;
    }
    const int words = (n + 63) / 64;
    // signature of v = N(v) & s, as a bitset
    std::vector<std::vector<std::uint64_t>> sigs;
    sigs.reserve(n);
    for (int v = 0; v < n; ++v) {
        if (in_s[v]) continue;
        std::vector<std::uint64_t> sig(words, 0);
        bool dominated = false;
        for (int u : g.neighbors(v))
            if (in_s[u]) {
                sig[u / 64] |= std::uint64_t{1} << (u % 64);
                dominated = true;
            }
        if (!dominated) return false;
        sigs.push_back(std::move(sig));
    }
    std::sort(sigs.begin(), sigs.end());
    return std::adjacent_find(sigs.begin(), sigs.end()) == sigs.end();
}

std::vector<int> pendant_forced_vertices(const Graph& g) {
    std::vector<int> out;
    for (int v = 0; v < g.vertex_count(); ++v) {
        bool forced = false;
        for (int u : g.neighbors(v)) {
            if (g.degree(u) != 1) continue;
            // mutually pendant pair (isolated edge): keep only the smaller id
            if (g.degree(v) == 1 && v > u) continue;
            forced = true;
            break;
        }
        if (forced) out.push_back(v);
    }
    return out;
}

Graph make_path(int n) {
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

Graph make_cycle(int n) {
    Graph g = make_path(n);
    if (n >= 3) g.add_edge(n - 1, 0);
    return g;
}

Graph make_star(int leaves) {
    Graph g(leaves + 1);
    for (int i = 1; i <= leaves; ++i) g.add_edge(0, i);
    return g;
}

Graph make_complete(int n) {
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

Graph make_random_graph(int n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (unif(rng) < p) g.add_edge(u, v);
    return g;
}

Graph make_random_tree(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Graph g(n);
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> pick(0, v - 1);
        g.add_edge(pick(rng), v);
    }
    return g;
}

}  // namespace idsolve
