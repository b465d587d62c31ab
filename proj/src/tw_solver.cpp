#include "idsolve/tw_solver.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <stdexcept>

namespace idsolve {
namespace {

constexpr int kMaxBag = 16;

int pair_index(int i, int j) {  // i < j
    return j * (j - 1) / 2 + i;
}

bool pairs_test(const DpState& s, int i, int j) {
    if (i > j) std::swap(i, j);
    int idx = pair_index(i, j);
    return idx < 64 ? (s.pairs_lo >> idx) & 1 : (s.pairs_hi >> (idx - 64)) & 1;
}

void pairs_set(DpState& s, int i, int j) {
    if (i > j) std::swap(i, j);
    int idx = pair_index(i, j);
    if (idx < 64)
        s.pairs_lo |= std::uint64_t{1} << idx;
    else
        s.pairs_hi |= std::uint64_t{1} << (idx - 64);
}

// inserts a zero bit at `pos`, shifting higher bits up
std::uint32_t expand_mask(std::uint32_t m, int pos) {
    std::uint32_t low = m & ((std::uint32_t{1} << pos) - 1);
    return ((m >> pos) << (pos + 1)) | low;
}

// removes the bit at `pos`, shifting higher bits down
std::uint32_t contract_mask(std::uint32_t m, int pos) {
    std::uint32_t low = m & ((std::uint32_t{1} << pos) - 1);
    return ((m >> (pos + 1)) << pos) | low;
}

// applies a position permutation to the pair bitset; map[i] < 0 drops bit i
void remap_pairs(const DpState& in, DpState& out, int bag_size, const std::vector<int>& map) {
    for (int j = 1; j < bag_size; ++j)
        for (int i = 0; i < j; ++i)
            if (pairs_test(in, i, j) && map[i] >= 0 && map[j] >= 0)
                pairs_set(out, map[i], map[j]);
}

int yrank_of(int pos, std::uint32_t ymask) {
    return std::popcount(ymask & ((std::uint32_t{1} << pos) - 1));
}

// converts a bag-position mask (subset of ymask) into a Y-rank mask
std::uint16_t to_yrank(std::uint32_t bagmask, std::uint32_t ymask) {
    std::uint16_t out = 0;
    int rank = 0;
    while (ymask) {
        int pos = std::countr_zero(ymask);
        if (bagmask & (std::uint32_t{1} << pos)) out |= std::uint16_t(1) << rank;
        ymask &= ymask - 1;
        ++rank;
    }
    return out;
}

std::uint16_t expand_rank_mask(std::uint16_t m, int rank) {
    std::uint16_t low = m & ((std::uint16_t(1) << rank) - 1);
    return static_cast<std::uint16_t>(((m >> rank) << (rank + 1)) | low);
}

std::uint16_t contract_rank_mask(std::uint16_t m, int rank) {
    std::uint16_t low = m & ((std::uint16_t(1) << rank) - 1);
    return static_cast<std::uint16_t>(((m >> (rank + 1)) << rank) | low);
}

bool sorted_contains(const std::vector<std::uint16_t>& a, std::uint16_t x) {
    return std::binary_search(a.begin(), a.end(), x);
}

void sorted_insert(std::vector<std::uint16_t>& a, std::uint16_t x) {
    a.insert(std::upper_bound(a.begin(), a.end(), x), x);
}

// merged sorted union; false when the families intersect
bool merge_disjoint(const std::vector<std::uint16_t>& a, const std::vector<std::uint16_t>& b,
                    std::vector<std::uint16_t>& out) {
    out.clear();
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return false;
        out.push_back(a[i] < b[j] ? a[i++] : b[j++]);
    }
    out.insert(out.end(), a.begin() + i, a.end());
    out.insert(out.end(), b.begin() + j, b.end());
    return true;
}

std::vector<int> union_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

std::size_t DpStateHash::operator()(const DpState& s) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t x) {
        h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    mix(s.ymask);
    mix((std::uint64_t(s.wmask) << 32) | s.plusmask);
    mix(s.pairs_lo);
    mix(s.pairs_hi);
    for (std::uint16_t m : s.a) mix(m);
    return h;
}

TwEngine::TwEngine(const Graph& g, const NiceTreeDecomposition& ntd, std::vector<char> selectable,
                   std::vector<char> locatable, bool allow_one_empty_signature)
    : g_(g),
      ntd_(ntd),
      selectable_(std::move(selectable)),
      locatable_(std::move(locatable)),
      allow_one_empty_(allow_one_empty_signature) {
    TdReport rep = validate_nice(g, ntd);
    if (!rep.ok()) throw std::invalid_argument("invalid nice tree decomposition: " + rep.message);
    for (int v = 0; v < g.vertex_count(); ++v)
        if (!selectable_[v] && !locatable_[v])
            throw std::invalid_argument("vertex neither selectable nor locatable");

    ctx_.resize(ntd.node_count());
    for (int id = 0; id < ntd.node_count(); ++id) {
        const NiceNode& nd = ntd.nodes[id];
        NodeCtx& c = ctx_[id];
        c.bag = nd.bag;
        if (!std::is_sorted(c.bag.begin(), c.bag.end()))
            throw std::invalid_argument("nice decomposition bags must be sorted");
        if (static_cast<int>(c.bag.size()) > kMaxBag)
            throw std::invalid_argument("bag larger than " + std::to_string(kMaxBag) +
                                        " vertices is not supported");
        c.adj.assign(c.bag.size(), 0);
        for (size_t i = 0; i < c.bag.size(); ++i) {
            for (size_t j = 0; j < c.bag.size(); ++j)
                if (i != j && g.has_edge(c.bag[i], c.bag[j])) c.adj[i] |= std::uint32_t{1} << j;
            if (locatable_[c.bag[i]]) c.locatable_mask |= std::uint32_t{1} << i;
            if (selectable_[c.bag[i]]) c.selectable_mask |= std::uint32_t{1} << i;
        }
        if (nd.type == NiceNodeType::Introduce) {
            c.special_pos = static_cast<int>(
                std::lower_bound(c.bag.begin(), c.bag.end(), nd.vertex) - c.bag.begin());
        } else if (nd.type == NiceNodeType::Forget) {
            const auto& child_bag = ntd.nodes[nd.child0].bag;
            c.special_pos = static_cast<int>(
                std::lower_bound(child_bag.begin(), child_bag.end(), nd.vertex) - child_bag.begin());
        }
    }
}

void TwEngine::check_state(const NodeCtx& ctx, const DpState& s) const {
    auto fail = [](const char* what) { throw std::logic_error(std::string("state invariant: ") + what); };
    const int b = static_cast<int>(ctx.bag.size());
    std::uint32_t all = b == 32 ? ~0u : (std::uint32_t{1} << b) - 1;
    if (s.ymask & ~ctx.selectable_mask) fail("Y not selectable");
    if (s.wmask & (s.ymask | ~ctx.locatable_mask | ~all)) fail("W outside locatable bag minus Y");
    if (s.plusmask & ~s.wmask) fail("plus flag outside W");
    if (!std::is_sorted(s.a.begin(), s.a.end()) ||
        std::adjacent_find(s.a.begin(), s.a.end()) != s.a.end())
        fail("A not sorted/unique");
    int ysize = std::popcount(s.ymask);
    for (std::uint16_t m : s.a)
        if (m >> ysize) fail("A mask outside 2^Y");
    for (int j = 1; j < b; ++j)
        for (int i = 0; i < j; ++i) {
            if (!pairs_test(s, i, j)) continue;
            std::uint32_t bi = std::uint32_t{1} << i, bj = std::uint32_t{1} << j;
            if ((s.ymask & (bi | bj)) || !(ctx.locatable_mask & bi) || !(ctx.locatable_mask & bj))
                fail("pair outside locatable bag minus Y");
            if (((s.wmask & bi) != 0) != ((s.wmask & bj) != 0)) fail("pair across W boundary");
            if ((ctx.adj[i] & s.ymask) != (ctx.adj[j] & s.ymask)) fail("paired signatures differ");
        }
}

StateMap TwEngine::leaf_states(int node) const {
    if (ntd_.nodes[node].type != NiceNodeType::Leaf)
        throw std::invalid_argument("leaf_states on non-leaf node");
    StateMap map;
    map.emplace(DpState{}, DpEntry{0, {}});
    return map;
}

std::vector<std::pair<DpState, DpEntry>> TwEngine::introduce_states(int node, const DpState& s,
                                                                    const DpEntry& e) const {
    const NodeCtx& ctx = ctx_[node];
    const int pv = ctx.special_pos;
    const int b = static_cast<int>(ctx.bag.size());
    const int v = ctx.bag[pv];
    const std::uint32_t bit_v = std::uint32_t{1} << pv;

    // lift the child state into parent bag coordinates
    DpState base;
    base.ymask = expand_mask(s.ymask, pv);
    base.wmask = expand_mask(s.wmask, pv);
    base.plusmask = expand_mask(s.plusmask, pv);
    std::vector<int> map(b - 1);
    for (int i = 0; i < b - 1; ++i) map[i] = i < pv ? i : i + 1;
    remap_pairs(s, base, b - 1, map);
    base.a = s.a;

    std::vector<std::pair<DpState, DpEntry>> out;

    {  // v stays outside the solution
        DpState t = base;
        if (locatable_[v]) {
            std::uint32_t sig_v = ctx.adj[pv] & t.ymask;
            for (int x = 0; x < b; ++x) {
                if (x == pv) continue;
                std::uint32_t bx = std::uint32_t{1} << x;
                if (!(ctx.locatable_mask & bx) || (t.ymask & bx) || (t.wmask & bx)) continue;
                if ((ctx.adj[x] & t.ymask) == sig_v) pairs_set(t, x, pv);
            }
        }
        out.emplace_back(std::move(t), e);
    }

    if (selectable_[v]) {  // v joins the solution
        DpState t = base;
        t.ymask |= bit_v;
        int rank = yrank_of(pv, t.ymask);
        for (auto& m : t.a) m = expand_rank_mask(m, rank);
        // signatures of neighbors grow by v: frozen clashes break, unequal
        // pairs split
        t.plusmask &= ~ctx.adj[pv];
        for (int j = 1; j < b; ++j)
            for (int i = 0; i < j; ++i)
                if (pairs_test(t, i, j)) {
                    bool ai = (ctx.adj[pv] >> i) & 1, aj = (ctx.adj[pv] >> j) & 1;
                    if (ai != aj) {
                        int idx = pair_index(i, j);
                        if (idx < 64)
                            t.pairs_lo &= ~(std::uint64_t{1} << idx);
                        else
                            t.pairs_hi &= ~(std::uint64_t{1} << (idx - 64));
                    }
                }
        DpEntry ne = e;
        ne.cost += 1;
        ne.chosen.insert(std::upper_bound(ne.chosen.begin(), ne.chosen.end(), v), v);
        out.emplace_back(std::move(t), std::move(ne));
    }
    return out;
}

std::optional<std::pair<DpState, DpEntry>> TwEngine::forget_state(int node, const DpState& s,
                                                                  const DpEntry& e) const {
    const NiceNode& nd = ntd_.nodes[node];
    const NodeCtx& child = ctx_[nd.child0];
    const int pu = ctx_[node].special_pos;  // position in the child bag
    const int bc = static_cast<int>(child.bag.size());
    const int u = child.bag[pu];
    const std::uint32_t bit_u = std::uint32_t{1} << pu;

    DpState t = s;  // still in child coordinates until the final contraction

    if (s.ymask & bit_u) {
        // solution vertex leaves the bag
        int rank = yrank_of(pu, s.ymask);
        std::uint16_t rank_bit = std::uint16_t(1) << rank;
        for (int x = 0; x < bc; ++x) {
            std::uint32_t bx = std::uint32_t{1} << x;
            if (!(child.adj[pu] & bx) || (s.ymask & bx) || !(child.locatable_mask & bx)) continue;
            // a clean bag vertex matching a record that goes dark keeps its
            // clash via the plus flag
            if (!(s.wmask & bx)) {
                std::uint16_t sig_x = to_yrank(child.adj[x] & s.ymask, s.ymask);
                if (sorted_contains(s.a, sig_x)) t.plusmask |= bx;
            }
            t.wmask |= bx;
        }
        t.ymask &= ~bit_u;
        std::vector<std::uint16_t> na;
        na.reserve(s.a.size());
        for (std::uint16_t m : s.a)
            if (!(m & rank_bit)) na.push_back(contract_rank_mask(m, rank));
        t.a = std::move(na);
    } else if (locatable_[u]) {
        // locatable vertex leaves: its signature freezes now
        if (s.plusmask & bit_u) return std::nullopt;  // clashes with a frozen signature
        bool dirty = (s.wmask & bit_u) != 0;
        if (!dirty) {
            std::uint16_t sig_u = to_yrank(child.adj[pu] & s.ymask, s.ymask);
            if (sig_u == 0 && !allow_one_empty_) return std::nullopt;  // never dominated
            if (sorted_contains(s.a, sig_u)) return std::nullopt;      // duplicate frozen signature
            sorted_insert(t.a, sig_u);
        } else {
            for (int x = 0; x < bc; ++x)
                if (x != pu && pairs_test(s, x, pu)) t.plusmask |= std::uint32_t{1} << x;
        }
    }
    // non-locatable vertices outside Y leave without a trace

    DpState r;
    r.ymask = contract_mask(t.ymask, pu);
    r.wmask = contract_mask(t.wmask, pu);
    r.plusmask = contract_mask(t.plusmask, pu);
    r.a = std::move(t.a);
    std::vector<int> map(bc);
    for (int i = 0; i < bc; ++i) map[i] = i < pu ? i : (i == pu ? -1 : i - 1);
    remap_pairs(t, r, bc, map);
    return std::make_pair(std::move(r), e);
}

std::optional<std::pair<DpState, DpEntry>> TwEngine::join_states(int node, const DpState& s1,
                                                                 const DpEntry& e1, const DpState& s2,
                                                                 const DpEntry& e2) const {
    (void)node;
    if (s1.ymask != s2.ymask) return std::nullopt;
    DpState t;
    t.ymask = s1.ymask;
    if (!merge_disjoint(s1.a, s2.a, t.a)) return std::nullopt;
    t.wmask = s1.wmask | s2.wmask;
    t.plusmask = (s1.plusmask & ~s2.wmask) | (s2.plusmask & ~s1.wmask);
    t.pairs_lo = s1.pairs_lo & s2.pairs_lo;
    t.pairs_hi = s1.pairs_hi & s2.pairs_hi;
    DpEntry e;
    e.cost = e1.cost + e2.cost - std::popcount(s1.ymask);
    e.chosen = union_sorted(e1.chosen, e2.chosen);
    return std::make_pair(std::move(t), std::move(e));
}

TwOutcome TwEngine::solve(const TwOptions& options) {
    using Clock = std::chrono::steady_clock;
    const auto deadline = options.timeout_seconds > 0
                              ? Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                                   std::chrono::duration<double>(options.timeout_seconds))
                              : Clock::time_point::max();
    std::uint64_t tick = 0;
    auto check_time = [&]() {
        if ((++tick & 0x3fff) == 0 && Clock::now() > deadline)
            throw SolveTimeout("treewidth DP timed out");
    };

    TwOutcome out;
    std::vector<StateMap> maps(ntd_.node_count());
    auto upsert = [&](StateMap& map, DpState&& s, DpEntry&& e, const NodeCtx& ctx) {
        if (options.budget >= 0 && e.cost > options.budget) return;
        if (options.check_invariants) {
            check_state(ctx, s);
            if (e.cost < std::popcount(s.ymask)) throw std::logic_error("cost below |Y|");
        }
        if (!options.witness) e.chosen.clear();
        auto [it, inserted] = map.try_emplace(std::move(s), std::move(e));
        if (!inserted) {
            DpEntry& cur = it->second;
            if (e.cost < cur.cost || (e.cost == cur.cost && options.witness && e.chosen < cur.chosen))
                cur = std::move(e);
        }
    };

    for (int id : ntd_.topological_order()) {
        const NiceNode& nd = ntd_.nodes[id];
        const NodeCtx& ctx = ctx_[id];
        StateMap& map = maps[id];
        switch (nd.type) {
            case NiceNodeType::Leaf:
                map = leaf_states(id);
                break;
            case NiceNodeType::Introduce:
                for (auto& [s, e] : maps[nd.child0]) {
                    check_time();
                    for (auto& [ps, pe] : introduce_states(id, s, e))
                        upsert(map, std::move(ps), std::move(pe), ctx);
                }
                maps[nd.child0].clear();
                break;
            case NiceNodeType::Forget:
                for (auto& [s, e] : maps[nd.child0]) {
                    check_time();
                    if (auto r = forget_state(id, s, e))
                        upsert(map, std::move(r->first), std::move(r->second), ctx);
                }
                maps[nd.child0].clear();
                break;
            case NiceNodeType::Join: {
                std::unordered_map<std::uint32_t, std::vector<const std::pair<const DpState, DpEntry>*>>
                    by_y;
                for (const auto& kv : maps[nd.child0]) by_y[kv.first.ymask].push_back(&kv);
                for (const auto& kv2 : maps[nd.child1]) {
                    auto it = by_y.find(kv2.first.ymask);
                    if (it == by_y.end()) continue;
                    for (const auto* kv1 : it->second) {
                        check_time();
                        if (auto r = join_states(id, kv1->first, kv1->second, kv2.first, kv2.second))
                            upsert(map, std::move(r->first), std::move(r->second), ctx);
                    }
                }
                maps[nd.child0].clear();
                maps[nd.child1].clear();
                break;
            }
        }
        out.states_total += map.size();
        out.states_peak = std::max<std::uint64_t>(out.states_peak, map.size());
    }

    const StateMap& root = maps[ntd_.root];
    const DpEntry* best = nullptr;
    for (const auto& [s, e] : root)
        if (!best || e.cost < best->cost || (e.cost == best->cost && e.chosen < best->chosen))
            best = &e;
    if (!best) return out;  // status NoneWithinBudget
    out.status = TwStatus::Found;
    out.optimum = best->cost;
    out.witness = best->chosen;
    return out;
}

TwOutcome solve_lds_tw(const Graph& g, const NiceTreeDecomposition& ntd, const TwOptions& options) {
    std::vector<char> all(g.vertex_count(), 1);
    TwEngine engine(g, ntd, all, all, /*allow_one_empty=*/false);
    TwOutcome out = engine.solve(options);
    if (out.status == TwStatus::Found && options.budget >= 0 && out.optimum > options.budget)
        out.status = TwStatus::NoneWithinBudget;
    if (out.status != TwStatus::Found && options.budget < 0)
        throw std::logic_error("LDS DP found no solution although V(G) is always one");
    return out;
}

TwOutcome solve_tc_tw(const TestCoverInstance& inst, const NiceTreeDecomposition& ntd,
                      const TwOptions& options) {
    inst.validate();
    Graph aux = aux_graph(inst);
    {
        std::vector<int> all(inst.test_count());
        for (int i = 0; i < inst.test_count(); ++i) all[i] = i;
        if (!is_test_cover(inst, all)) {
            TwOutcome out;
            out.status = TwStatus::Infeasible;
            return out;
        }
    }
    std::vector<char> selectable(aux.vertex_count(), 0), locatable(aux.vertex_count(), 0);
    for (int v = 0; v < aux.vertex_count(); ++v)
        (aux.role(v) == Role::Red ? selectable[v] : locatable[v]) = 1;
    TwEngine engine(aux, ntd, selectable, locatable, /*allow_one_empty=*/true);
    TwOutcome out = engine.solve(options);
    if (out.status != TwStatus::Found && options.budget < 0)
        throw std::logic_error("TC DP found no solution although the full family separates");
    return out;
}

}  // namespace idsolve
