#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "infmax/graph.hpp"

namespace infmax {

using CommunityId = std::uint32_t;

struct CommunityPartition {
    std::vector<CommunityId> assignment;           // node id -> community id
    std::vector<std::vector<NodeId>> communities;  // members, ascending node id
    double modularity = 0.0;
};

/// Newman modularity Q = sum_c (e_c/m - (d_c/2m)^2) of an assignment.
inline double modularity(const Graph& g, const std::vector<CommunityId>& assignment) {
    if (assignment.size() != g.node_count()) throw std::invalid_argument("assignment size mismatch");
    const double m = static_cast<double>(g.edge_count());
    if (m == 0.0) return 0.0;
    CommunityId max_c = 0;
    for (CommunityId c : assignment) max_c = std::max(max_c, c);
    std::vector<double> intra(max_c + 1, 0.0);
    std::vector<double> total_degree(max_c + 1, 0.0);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        total_degree[assignment[u]] += static_cast<double>(g.degree(u));
        for (NodeId v : g.neighbors(u))
            if (u < v && assignment[u] == assignment[v]) intra[assignment[u]] += 1.0;
    }
    double q = 0.0;
    for (std::size_t c = 0; c < intra.size(); ++c) {
        const double dc = total_degree[c] / (2.0 * m);
        q += intra[c] / m - dc * dc;
    }
    return q;
}

namespace detail {

// Weighted graph for the aggregation levels. strength[i] counts self-loop
// weight twice, matching the modularity null model.
struct LevelGraph {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;  // no self entries
    std::vector<double> self_loop;
    std::vector<double> strength;
    double strength_total = 0.0;

    std::size_t size() const { return adj.size(); }
};

inline LevelGraph level_from_graph(const Graph& g) {
    LevelGraph lg;
    lg.adj.resize(g.node_count());
    lg.self_loop.assign(g.node_count(), 0.0);
    lg.strength.resize(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
        lg.adj[v].reserve(g.degree(v));
        for (NodeId w : g.neighbors(v)) lg.adj[v].emplace_back(w, 1.0);
        lg.strength[v] = static_cast<double>(g.degree(v));
        lg.strength_total += lg.strength[v];
    }
    return lg;
}

// One pass of Louvain local moving over ascending node ids, repeated until a
// full sweep makes no move. Gains compare w(i,c) - tot_c*k_i/S across the
// neighboring communities with the node temporarily removed from its own.
inline bool local_move(const LevelGraph& lg, std::vector<std::uint32_t>& comm) {
    const std::size_t n = lg.size();
    const double s = lg.strength_total;
    if (s <= 0.0) return false;
    std::vector<double> tot(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) tot[comm[v]] += lg.strength[v];

    std::vector<double> weight_to(n, 0.0);
    std::vector<std::uint32_t> touched;
    bool any_move = false;
    bool moved = true;
    while (moved) {
        moved = false;
        for (std::uint32_t v = 0; v < n; ++v) {
            const std::uint32_t old_c = comm[v];
            touched.clear();
            for (auto [w, wt] : lg.adj[v]) {
                const std::uint32_t c = comm[w];
                if (weight_to[c] == 0.0 && c != old_c) touched.push_back(c);
                weight_to[c] += wt;
            }
            tot[old_c] -= lg.strength[v];
            double best_gain = weight_to[old_c] - tot[old_c] * lg.strength[v] / s;
            std::uint32_t best_c = old_c;
            // Leave the current community only on a strict gain, so every
            // move raises Q and the sweep loop terminates; equal-gain
            // alternatives tie-break to the lowest community id.
            for (std::uint32_t c : touched) {
                const double gain = weight_to[c] - tot[c] * lg.strength[v] / s;
                if (gain > best_gain || (gain == best_gain && best_c != old_c && c < best_c)) {
                    best_gain = gain;
                    best_c = c;
                }
            }
            tot[best_c] += lg.strength[v];
            weight_to[old_c] = 0.0;
            for (std::uint32_t c : touched) weight_to[c] = 0.0;
            if (best_c != old_c) {
                comm[v] = best_c;
                moved = true;
                any_move = true;
            }
        }
    }
    return any_move;
}

// Renumber communities to 0..C-1 by first appearance over ascending ids.
inline std::uint32_t compress_labels(std::vector<std::uint32_t>& comm) {
    std::vector<std::uint32_t> remap(comm.size(), UINT32_MAX);
    std::uint32_t next = 0;
    for (auto& c : comm) {
        if (remap[c] == UINT32_MAX) remap[c] = next++;
        c = remap[c];
    }
    return next;
}

inline LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& comm,
                            std::uint32_t n_comm) {
    LevelGraph out;
    out.adj.resize(n_comm);
    out.self_loop.assign(n_comm, 0.0);
    out.strength.assign(n_comm, 0.0);
    out.strength_total = lg.strength_total;
    std::vector<double> row(n_comm, 0.0);
    std::vector<std::uint32_t> touched;
    for (std::uint32_t c = 0; c < n_comm; ++c) out.adj[c].clear();

    // Accumulate per source community; lg nodes grouped by community.
    std::vector<std::vector<std::uint32_t>> members(n_comm);
    for (std::uint32_t v = 0; v < lg.size(); ++v) members[comm[v]].push_back(v);
    for (std::uint32_t c = 0; c < n_comm; ++c) {
        touched.clear();
        double self = 0.0;
        for (std::uint32_t v : members[c]) {
            self += lg.self_loop[v];
            out.strength[c] += lg.strength[v];
            for (auto [w, wt] : lg.adj[v]) {
                const std::uint32_t cw = comm[w];
                if (cw == c) {
                    self += wt / 2.0;  // each intra edge visited from both ends
                } else {
                    if (row[cw] == 0.0) touched.push_back(cw);
                    row[cw] += wt;
                }
            }
        }
        out.self_loop[c] = self;
        std::sort(touched.begin(), touched.end());
        for (std::uint32_t cw : touched) {
            out.adj[c].emplace_back(cw, row[cw]);
            row[cw] = 0.0;
        }
    }
    return out;
}

}  // namespace detail

/// Two-phase Louvain with ascending-id visit order at every level, so runs
/// are fully deterministic. Stops when an aggregation level admits no
/// further local move.
inline CommunityPartition louvain(const Graph& g) {
    const std::size_t n = g.node_count();
    CommunityPartition part;
    part.assignment.resize(n);
    std::iota(part.assignment.begin(), part.assignment.end(), 0u);
    if (n == 0) return part;

    detail::LevelGraph level = detail::level_from_graph(g);
    std::vector<std::uint32_t> node_to_level(n);
    std::iota(node_to_level.begin(), node_to_level.end(), 0u);

    while (true) {
        std::vector<std::uint32_t> comm(level.size());
        std::iota(comm.begin(), comm.end(), 0u);
        const bool improved = detail::local_move(level, comm);
        if (!improved) break;
        const std::uint32_t n_comm = detail::compress_labels(comm);
        for (std::size_t v = 0; v < n; ++v) node_to_level[v] = comm[node_to_level[v]];
        if (n_comm == level.size()) break;
        level = detail::aggregate(level, comm, n_comm);
    }

    for (std::size_t v = 0; v < n; ++v) part.assignment[v] = node_to_level[v];
    const std::uint32_t n_comm = detail::compress_labels(part.assignment);
    part.communities.assign(n_comm, {});
    for (NodeId v = 0; v < n; ++v) part.communities[part.assignment[v]].push_back(v);
    part.modularity = modularity(g, part.assignment);
    return part;
}

/// Drop every edge whose endpoints live in different communities.
inline Graph prune_intercommunity_edges(const Graph& g, const CommunityPartition& p) {
    if (p.assignment.size() != g.node_count()) throw std::invalid_argument("partition does not cover graph");
    std::vector<std::string> labels;
    labels.reserve(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) labels.push_back(g.label(v));
    std::vector<std::pair<NodeId, NodeId>> kept;
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (NodeId v : g.neighbors(u))
            if (u < v && p.assignment[u] == p.assignment[v]) kept.emplace_back(u, v);
    return Graph(std::move(labels), kept);
}

/// Communities with at least `threshold` members, largest first (ties by
/// lower community id). Falls back to the single largest community when
/// none qualifies.
inline std::vector<CommunityId> select_significant(const CommunityPartition& p, std::size_t threshold) {
    if (threshold < 1) throw std::invalid_argument("significance threshold must be >= 1");
    std::vector<CommunityId> order(p.communities.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](CommunityId a, CommunityId b) {
        if (p.communities[a].size() != p.communities[b].size())
            return p.communities[a].size() > p.communities[b].size();
        return a < b;
    });
    std::vector<CommunityId> out;
    for (CommunityId c : order)
        if (p.communities[c].size() >= threshold) out.push_back(c);
    if (out.empty() && !order.empty()) out.push_back(order.front());
    return out;
}

/// Candidate pool and per-community seed budgets for the optimizer.
struct BudgetPlan {
    std::vector<CommunityId> significant;
    std::vector<std::size_t> budgets;  // aligned with significant, sums to k
    std::vector<NodeId> pool;          // ascending; degree > 1 in the pruned graph
    std::vector<std::size_t> pool_degree;
    std::vector<std::vector<std::size_t>> community_pool;  // aligned with significant: indices into pool
    std::size_t max_pool_degree = 0;
    std::size_t k = 0;

    std::size_t budget_for(CommunityId c) const {
        for (std::size_t i = 0; i < significant.size(); ++i)
            if (significant[i] == c) return budgets[i];
        return 0;
    }
};

/// Apportion k seeds over the significant communities proportionally to
/// their total degree (largest-remainder), then shift any budget a
/// community cannot fill with degree>1 candidates to the next largest one.
inline BudgetPlan allocate_budgets(const Graph& pruned, const CommunityPartition& p,
                                   const std::vector<CommunityId>& significant, std::size_t k) {
    if (k < 1) throw std::invalid_argument("seed budget k must be >= 1");
    if (significant.empty()) throw std::invalid_argument("need at least one significant community");

    BudgetPlan plan;
    plan.significant = significant;
    plan.k = k;
    const std::size_t nc = significant.size();

    std::vector<double> weight(nc, 0.0);
    std::vector<std::vector<NodeId>> candidates(nc);
    for (std::size_t i = 0; i < nc; ++i) {
        for (NodeId v : p.communities.at(significant[i])) {
            weight[i] += static_cast<double>(pruned.degree(v));
            if (pruned.degree(v) > 1) candidates[i].push_back(v);
        }
    }
    std::size_t pool_size = 0;
    for (const auto& c : candidates) pool_size += c.size();
    if (k > pool_size) {
        throw std::runtime_error("infeasible seed budget: k=" + std::to_string(k) +
                                 " exceeds candidate pool of " + std::to_string(pool_size));
    }

    // Largest-remainder apportionment; ties favor the larger community,
    // then the lower community id.
    const double total_weight = std::accumulate(weight.begin(), weight.end(), 0.0);
    std::vector<std::size_t> budget(nc, 0);
    std::vector<double> remainder(nc, 0.0);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < nc; ++i) {
        const double share =
            total_weight > 0.0 ? static_cast<double>(k) * weight[i] / total_weight : 0.0;
        budget[i] = static_cast<std::size_t>(std::floor(share));
        remainder[i] = share - static_cast<double>(budget[i]);
        assigned += budget[i];
    }
    std::vector<std::size_t> by_remainder(nc);
    std::iota(by_remainder.begin(), by_remainder.end(), 0u);
    auto larger_first = [&](std::size_t a, std::size_t b) {
        const auto sa = p.communities.at(significant[a]).size();
        const auto sb = p.communities.at(significant[b]).size();
        if (sa != sb) return sa > sb;
        return significant[a] < significant[b];
    };
    std::sort(by_remainder.begin(), by_remainder.end(), [&](std::size_t a, std::size_t b) {
        if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
        return larger_first(a, b);
    });
    for (std::size_t j = 0; assigned < k; ++j) {
        ++budget[by_remainder[j % nc]];
        ++assigned;
    }

    // Shift budget that exceeds a community's candidate count.
    std::size_t short_by = 0;
    for (std::size_t i = 0; i < nc; ++i) {
        if (budget[i] > candidates[i].size()) {
            short_by += budget[i] - candidates[i].size();
            budget[i] = candidates[i].size();
        }
    }
    std::vector<std::size_t> by_size(nc);
    std::iota(by_size.begin(), by_size.end(), 0u);
    std::sort(by_size.begin(), by_size.end(), larger_first);
    for (std::size_t j = 0; short_by > 0 && j < nc; ++j) {
        const std::size_t i = by_size[j];
        const std::size_t room = candidates[i].size() - budget[i];
        const std::size_t take = std::min(room, short_by);
        budget[i] += take;
        short_by -= take;
    }
    plan.budgets = std::move(budget);

    // Flatten the pool (ascending node id) and index it per community.
    std::vector<std::pair<NodeId, std::size_t>> tagged;  // (node, significant index)
    for (std::size_t i = 0; i < nc; ++i)
        for (NodeId v : candidates[i]) tagged.emplace_back(v, i);
    std::sort(tagged.begin(), tagged.end());
    plan.pool.reserve(tagged.size());
    plan.pool_degree.reserve(tagged.size());
    plan.community_pool.assign(nc, {});
    for (std::size_t idx = 0; idx < tagged.size(); ++idx) {
        auto [v, i] = tagged[idx];
        plan.pool.push_back(v);
        plan.pool_degree.push_back(pruned.degree(v));
        plan.community_pool[i].push_back(idx);
        plan.max_pool_degree = std::max(plan.max_pool_degree, pruned.degree(v));
    }
    return plan;
}

inline void write_partition_csv(const Graph& g, const CommunityPartition& p, std::ostream& out) {
    out << "node_label,community_id\n";
    for (NodeId v = 0; v < g.node_count(); ++v) out << g.label(v) << ',' << p.assignment[v] << '\n';
}

}  // namespace infmax
