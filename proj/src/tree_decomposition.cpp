#include "idsolve/tree_decomposition.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

namespace idsolve {

int width(const TreeDecomposition& td) {
    if (td.bags.empty()) throw std::invalid_argument("tree decomposition needs at least one bag");
    int maxbag = 0;
    for (const auto& b : td.bags) maxbag = std::max(maxbag, static_cast<int>(b.size()));
    return maxbag - 1;
}

namespace {

bool is_tree(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n == 0) return false;
    if (static_cast<int>(edges.size()) != n - 1) return false;
    std::vector<std::vector<int>> adj(n);
    for (auto [a, b] : edges) {
        if (a < 0 || a >= n || b < 0 || b >= n || a == b) return false;
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int cnt = 1;
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        for (int y : adj[x])
            if (!seen[y]) {
                seen[y] = 1;
                ++cnt;
                q.push(y);
            }
    }
    return cnt == n;
}

}  // namespace

TdReport validate_td(const Graph& g, const TreeDecomposition& td) {
    if (!is_tree(td.bag_count(), td.edges))
        return {TdReport::Kind::NotATree, "bag edges do not form a tree"};

    std::vector<std::vector<int>> bags_of(g.vertex_count());
    for (int i = 0; i < td.bag_count(); ++i)
        for (int v : td.bags[i]) {
            if (v < 0 || v >= g.vertex_count())
                return {TdReport::Kind::VertexNotCovered,
                        "bag " + std::to_string(i) + " contains unknown vertex " + std::to_string(v)};
            bags_of[v].push_back(i);
        }
    for (int v = 0; v < g.vertex_count(); ++v)
        if (bags_of[v].empty())
            return {TdReport::Kind::VertexNotCovered, "vertex " + std::to_string(v) + " is in no bag"};

    for (auto [u, v] : g.edges()) {
        bool covered = false;
        const auto& smaller = bags_of[u].size() <= bags_of[v].size() ? bags_of[u] : bags_of[v];
        int other = bags_of[u].size() <= bags_of[v].size() ? v : u;
        for (int b : smaller)
            if (std::binary_search(td.bags[b].begin(), td.bags[b].end(), other)) {
                covered = true;
                break;
            }
        if (!covered)
            return {TdReport::Kind::EdgeNotCovered,
                    "edge " + std::to_string(u) + " " + std::to_string(v) + " not covered"};
    }

    std::vector<std::vector<int>> adj(td.bag_count());
    for (auto [a, b] : td.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (int v = 0; v < g.vertex_count(); ++v) {
        std::set<int> occ(bags_of[v].begin(), bags_of[v].end());
        std::queue<int> q;
        q.push(bags_of[v][0]);
        std::set<int> seen{bags_of[v][0]};
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            for (int y : adj[x])
                if (occ.count(y) && !seen.count(y)) {
                    seen.insert(y);
                    q.push(y);
                }
        }
        if (seen.size() != occ.size())
            return {TdReport::Kind::OccurrencesDisconnected,
                    "occurrences of vertex " + std::to_string(v) + " are disconnected"};
    }
    return {};
}

std::vector<int> NiceTreeDecomposition::topological_order() const {
    std::vector<int> order;
    order.reserve(nodes.size());
    std::function<void(int)> rec = [&](int id) {
        if (nodes[id].child0 >= 0) rec(nodes[id].child0);
        if (nodes[id].child1 >= 0) rec(nodes[id].child1);
        order.push_back(id);
    };
    rec(root);
    return order;
}

TdReport validate_nice(const Graph& g, const NiceTreeDecomposition& ntd) {
    auto fail = [](const std::string& msg) {
        return TdReport{TdReport::Kind::NotATree, msg};
    };
    if (ntd.root < 0 || ntd.root >= ntd.node_count()) return fail("missing root");
    if (!ntd.nodes[ntd.root].bag.empty()) return fail("root bag not empty");

    auto order = ntd.topological_order();
    if (static_cast<int>(order.size()) != ntd.node_count())
        return fail("nodes unreachable from the root");

    auto set_minus = [](const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<int> out;
        std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return out;
    };
    for (int id : order) {
        const NiceNode& nd = ntd.nodes[id];
        switch (nd.type) {
            case NiceNodeType::Leaf:
                if (nd.child0 >= 0 || nd.child1 >= 0) return fail("leaf with children");
                if (!nd.bag.empty()) return fail("leaf bag not empty");
                break;
            case NiceNodeType::Introduce: {
                if (nd.child0 < 0 || nd.child1 >= 0) return fail("introduce needs one child");
                auto added = set_minus(nd.bag, ntd.nodes[nd.child0].bag);
                auto removed = set_minus(ntd.nodes[nd.child0].bag, nd.bag);
                if (added.size() != 1 || !removed.empty() || added[0] != nd.vertex)
                    return fail("introduce node does not add exactly its vertex");
                break;
            }
            case NiceNodeType::Forget: {
                if (nd.child0 < 0 || nd.child1 >= 0) return fail("forget needs one child");
                auto removed = set_minus(ntd.nodes[nd.child0].bag, nd.bag);
                auto added = set_minus(nd.bag, ntd.nodes[nd.child0].bag);
                if (removed.size() != 1 || !added.empty() || removed[0] != nd.vertex)
                    return fail("forget node does not drop exactly its vertex");
                break;
            }
            case NiceNodeType::Join:
                if (nd.child0 < 0 || nd.child1 < 0) return fail("join needs two children");
                if (ntd.nodes[nd.child0].bag != nd.bag || ntd.nodes[nd.child1].bag != nd.bag)
                    return fail("join children bags differ from parent");
                break;
        }
    }

    // underlying decomposition conditions
    TreeDecomposition td;
    for (const auto& nd : ntd.nodes) td.bags.push_back(nd.bag);
    for (int id = 0; id < ntd.node_count(); ++id) {
        if (ntd.nodes[id].child0 >= 0) td.edges.push_back({id, ntd.nodes[id].child0});
        if (ntd.nodes[id].child1 >= 0) td.edges.push_back({id, ntd.nodes[id].child1});
    }
    return validate_td(g, td);
}

namespace {

struct NiceBuilder {
    NiceTreeDecomposition out;

    int add(NiceNodeType type, int vertex, std::vector<int> bag, int c0 = -1, int c1 = -1) {
        out.nodes.push_back({type, vertex, std::move(bag), c0, c1});
        return out.node_count() - 1;
    }

    // Appends forget/introduce chains turning `from`'s bag into `target`.
    int morph(int from, const std::vector<int>& target) {
        std::vector<int> cur = out.nodes[from].bag;
        std::vector<int> drop, add_v;
        std::set_difference(cur.begin(), cur.end(), target.begin(), target.end(),
                            std::back_inserter(drop));
        std::set_difference(target.begin(), target.end(), cur.begin(), cur.end(),
                            std::back_inserter(add_v));
        int node = from;
        for (int v : drop) {
            cur.erase(std::find(cur.begin(), cur.end(), v));
            node = add(NiceNodeType::Forget, v, cur, node);
        }
        for (int v : add_v) {
            cur.insert(std::upper_bound(cur.begin(), cur.end(), v), v);
            node = add(NiceNodeType::Introduce, v, cur, node);
        }
        return node;
    }

    int chain_from_leaf(const std::vector<int>& target) {
        int node = add(NiceNodeType::Leaf, -1, {});
        return morph(node, target);
    }
};

}  // namespace

NiceTreeDecomposition make_nice(const Graph& g, const TreeDecomposition& td) {
    TdReport rep = validate_td(g, td);
    if (!rep.ok()) throw std::invalid_argument("invalid tree decomposition: " + rep.message);

    std::vector<std::vector<int>> adj(td.bag_count());
    for (auto [a, b] : td.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());

    NiceBuilder nb;
    // returns the id of a nice node whose bag equals td.bags[t]
    std::function<int(int, int)> build = [&](int t, int parent) -> int {
        std::vector<int> children;
        for (int c : adj[t])
            if (c != parent) children.push_back(c);
        if (children.empty()) return nb.chain_from_leaf(td.bags[t]);
        std::vector<int> tops;
        for (int c : children) {
            int sub = build(c, t);
            tops.push_back(nb.morph(sub, td.bags[t]));
        }
        int cur = tops[0];
        for (size_t i = 1; i < tops.size(); ++i)
            cur = nb.add(NiceNodeType::Join, -1, td.bags[t], cur, tops[i]);
        return cur;
    };

    int top = build(0, -1);
    int root = nb.morph(top, {});
    if (nb.out.nodes[root].bag != std::vector<int>{})
        throw std::logic_error("nice root bag not empty");
    nb.out.root = root;
    return nb.out;
}

namespace {

// neighbors of v in the graph where `gone` vertices have been eliminated:
// u ~ v iff there is a u-v path whose interior lies in `gone`.
std::vector<int> eliminated_neighbors(const Graph& g, int v, const std::vector<char>& gone) {
    std::vector<char> seen(g.vertex_count(), 0);
    std::vector<int> stack{v}, out;
    seen[v] = 1;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : g.neighbors(x)) {
            if (seen[y]) continue;
            seen[y] = 1;
            if (gone[y])
                stack.push_back(y);
            else
                out.push_back(y);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

TreeDecomposition td_from_elimination_order(const Graph& g, const std::vector<int>& order) {
    const int n = g.vertex_count();
    TreeDecomposition td;
    if (n == 0) {
        td.bags.push_back({});
        return td;
    }
    std::vector<char> gone(n, 0);
    std::vector<int> position(n, 0);
    for (int i = 0; i < n; ++i) position[order[i]] = i;
    std::vector<std::vector<int>> nbrs(n);
    for (int i = 0; i < n; ++i) {
        int v = order[i];
        nbrs[i] = eliminated_neighbors(g, v, gone);
        std::vector<int> bag = nbrs[i];
        bag.insert(std::upper_bound(bag.begin(), bag.end(), v), v);
        td.bags.push_back(std::move(bag));
        gone[v] = 1;
    }
    for (int i = 0; i < n; ++i) {
        // attach to the bag of the first-eliminated remaining neighbor
        int best = -1;
        for (int u : nbrs[i]) {
            if (position[u] <= i) continue;
            if (best < 0 || position[u] < best) best = position[u];
        }
        if (best >= 0)
            td.edges.push_back({i, best});
        else if (i + 1 < n)
            td.edges.push_back({i, i + 1});  // isolated remainder, keep the tree connected
    }
    return td;
}

}  // namespace

TreeDecomposition heuristic_td(const Graph& g, EliminationStrategy strategy) {
    const int n = g.vertex_count();
    std::vector<std::set<int>> adj(n);
    for (int v = 0; v < n; ++v) adj[v] = {g.neighbors(v).begin(), g.neighbors(v).end()};

    std::vector<char> gone(n, 0);
    std::vector<int> order;
    for (int step = 0; step < n; ++step) {
        int best = -1;
        long long best_score = -1;
        for (int v = 0; v < n; ++v) {
            if (gone[v]) continue;
            long long score;
            if (strategy == EliminationStrategy::MinDegree) {
                score = static_cast<long long>(adj[v].size());
            } else {
                score = 0;
                for (auto it = adj[v].begin(); it != adj[v].end(); ++it)
                    for (auto jt = std::next(it); jt != adj[v].end(); ++jt)
                        if (!adj[*it].count(*jt)) ++score;
            }
            if (best < 0 || score < best_score) {
                best = v;
                best_score = score;
            }
        }
        order.push_back(best);
        for (int u : adj[best])
            for (int w : adj[best])
                if (u < w && !adj[u].count(w)) {
                    adj[u].insert(w);
                    adj[w].insert(u);
                }
        for (int u : adj[best]) adj[u].erase(best);
        adj[best].clear();
        gone[best] = 1;
    }
    return td_from_elimination_order(g, order);
}

std::optional<TreeDecomposition> exact_td_small(const Graph& g, int max_width, int vertex_cap) {
    const int n = g.vertex_count();
    if (n > vertex_cap)
        throw std::invalid_argument("exact_td_small cap exceeded: " + std::to_string(n) + " > " +
                                    std::to_string(vertex_cap) + " vertices");
    if (n == 0) {
        TreeDecomposition td;
        td.bags.push_back({});
        return td;
    }
    if (max_width < 0) return std::nullopt;

    // memo over eliminated sets: the filled graph depends only on the set
    std::map<std::uint32_t, bool> memo;
    std::function<bool(std::uint32_t)> feasible = [&](std::uint32_t gone_mask) -> bool {
        if (static_cast<int>(__builtin_popcount(gone_mask)) >= n) return true;
        auto it = memo.find(gone_mask);
        if (it != memo.end()) return it->second;
        std::vector<char> gone(n, 0);
        for (int v = 0; v < n; ++v)
            if (gone_mask & (1u << v)) gone[v] = 1;
        bool ok = false;
        for (int v = 0; v < n && !ok; ++v) {
            if (gone[v]) continue;
            if (static_cast<int>(eliminated_neighbors(g, v, gone).size()) <= max_width)
                ok = feasible(gone_mask | (1u << v));
        }
        memo[gone_mask] = ok;
        return ok;
    };
    if (!feasible(0)) return std::nullopt;

    // retrace one feasible order
    std::vector<int> order;
    std::uint32_t mask = 0;
    std::vector<char> gone(n, 0);
    while (static_cast<int>(order.size()) < n) {
        for (int v = 0; v < n; ++v) {
            if (gone[v]) continue;
            if (static_cast<int>(eliminated_neighbors(g, v, gone).size()) <= max_width &&
                feasible(mask | (1u << v))) {
                order.push_back(v);
                mask |= 1u << v;
                gone[v] = 1;
                break;
            }
        }
    }
    return td_from_elimination_order(g, order);
}

}  // namespace idsolve
