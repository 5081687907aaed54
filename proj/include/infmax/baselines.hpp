#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "infmax/format.hpp"
#include "infmax/graph.hpp"
#include "infmax/seed_set.hpp"

namespace infmax {

/// Centrality scores plus the node order they induce (score descending,
/// ties toward the lower id).
struct NodeRanking {
    std::string method;
    std::vector<double> scores;  // aligned with node ids
    std::vector<NodeId> order;
};

inline NodeRanking make_ranking(std::string method, std::vector<double> scores) {
    NodeRanking r;
    r.method = std::move(method);
    r.scores = std::move(scores);
    r.order.resize(r.scores.size());
    std::iota(r.order.begin(), r.order.end(), 0u);
    std::sort(r.order.begin(), r.order.end(), [&](NodeId a, NodeId b) {
        if (r.scores[a] != r.scores[b]) return r.scores[a] > r.scores[b];
        return a < b;
    });
    return r;
}

/// Degree centrality.
inline NodeRanking degree_rank(const Graph& g) {
    std::vector<double> score(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) score[v] = static_cast<double>(g.degree(v));
    return make_ranking("degree", std::move(score));
}

struct PageRankParams {
    double damping = 0.85;
    double tol = 1e-8;  // L1 change between iterations
    std::size_t max_iter = 200;

    void validate() const {
        if (!(damping > 0.0) || damping >= 1.0) throw std::invalid_argument("damping must be in (0, 1)");
        if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
        if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    }
};

/// Power-iteration PageRank on the undirected graph (each edge walks both
/// ways). Mass of isolated nodes is spread uniformly. Scores sum to 1.
/// Throws if the L1 residual is still >= tol after max_iter sweeps.
inline NodeRanking pagerank(const Graph& g, const PageRankParams& params = {}) {
    params.validate();
    const std::size_t n = g.node_count();
    if (n == 0) return make_ranking("pagerank", {});
    const double uniform = 1.0 / static_cast<double>(n);
    std::vector<double> rank(n, uniform);
    std::vector<double> next(n, 0.0);
    double delta = 1.0;
    for (std::size_t iter = 0; iter < params.max_iter && delta >= params.tol; ++iter) {
        double dangling = 0.0;
        for (NodeId v = 0; v < n; ++v)
            if (g.degree(v) == 0) dangling += rank[v];
        const double base = (1.0 - params.damping + params.damping * dangling) * uniform;
        std::fill(next.begin(), next.end(), base);
        for (NodeId u = 0; u < n; ++u) {
            if (g.degree(u) == 0) continue;
            const double share = params.damping * rank[u] / static_cast<double>(g.degree(u));
            for (NodeId v : g.neighbors(u)) next[v] += share;
        }
        delta = 0.0;
        for (NodeId v = 0; v < n; ++v) delta += std::abs(next[v] - rank[v]);
        rank.swap(next);
    }
    if (delta >= params.tol) {
        throw std::runtime_error("pagerank did not converge: residual " + fmt_double(delta) +
                                 " after " + std::to_string(params.max_iter) + " iterations");
    }
    return make_ranking("pagerank", std::move(rank));
}

/// Hirsch index of the neighbor-degree sequence: the largest h such that v
/// has at least h neighbors of degree >= h.
inline NodeRanking h_index_rank(const Graph& g) {
    std::vector<double> score(g.node_count(), 0.0);
    std::vector<std::size_t> degs;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        degs.clear();
        for (NodeId u : g.neighbors(v)) degs.push_back(g.degree(u));
        std::sort(degs.begin(), degs.end(), std::greater<>());
        std::size_t h = 0;
        while (h < degs.size() && degs[h] >= h + 1) ++h;
        score[v] = static_cast<double>(h);
    }
    return make_ranking("hindex", std::move(score));
}

/// Core numbers by minimum-degree peeling (bucket implementation): a node's
/// shell index is its remaining degree at the moment it is peeled.
inline std::vector<std::size_t> kshell(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::size_t> deg(n);
    std::size_t max_deg = 0;
    for (NodeId v = 0; v < n; ++v) {
        deg[v] = g.degree(v);
        max_deg = std::max(max_deg, deg[v]);
    }
    std::vector<std::size_t> bin(max_deg + 1, 0);
    for (NodeId v = 0; v < n; ++v) ++bin[deg[v]];
    std::size_t start = 0;
    for (std::size_t d = 0; d <= max_deg; ++d) {
        const std::size_t count = bin[d];
        bin[d] = start;
        start += count;
    }
    std::vector<std::size_t> pos(n);
    std::vector<NodeId> vert(n);
    for (NodeId v = 0; v < n; ++v) {
        pos[v] = bin[deg[v]]++;
        vert[pos[v]] = v;
    }
    for (std::size_t d = max_deg; d >= 1; --d) bin[d] = bin[d - 1];
    bin[0] = 0;

    std::vector<std::size_t> core(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const NodeId v = vert[i];
        core[v] = deg[v];
        for (NodeId u : g.neighbors(v)) {
            if (deg[u] > deg[v]) {
                // Swap u to the front of its degree bucket, then shrink it.
                const std::size_t du = deg[u];
                const std::size_t pu = pos[u];
                const std::size_t pw = bin[du];
                const NodeId w = vert[pw];
                if (u != w) {
                    pos[u] = pw;
                    pos[w] = pu;
                    vert[pu] = w;
                    vert[pw] = u;
                }
                ++bin[du];
                --deg[u];
            }
        }
    }
    return core;
}

/// Neighborhood coreness: the sum of the neighbors' shell indices.
inline std::vector<double> neighborhood_coreness(const Graph& g) {
    const std::vector<std::size_t> core = kshell(g);
    std::vector<double> cnc(g.node_count(), 0.0);
    for (NodeId v = 0; v < g.node_count(); ++v)
        for (NodeId u : g.neighbors(v)) cnc[v] += static_cast<double>(core[u]);
    return cnc;
}

/// Extended neighborhood coreness: the sum of the neighbors' neighborhood
/// coreness, pulling in shell structure from two hops out.
inline NodeRanking enc_rank(const Graph& g) {
    const std::vector<double> cnc = neighborhood_coreness(g);
    std::vector<double> enc(g.node_count(), 0.0);
    for (NodeId v = 0; v < g.node_count(); ++v)
        for (NodeId u : g.neighbors(v)) enc[v] += cnc[u];
    return make_ranking("enc", std::move(enc));
}

/// First k nodes of the ranking order as a seed set.
inline SeedSet top_k(const NodeRanking& r, std::size_t k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (k > r.order.size()) throw std::invalid_argument("k exceeds node count");
    SeedSet s;
    s.method = r.method;
    s.nodes.assign(r.order.begin(), r.order.begin() + static_cast<std::ptrdiff_t>(k));
    return s;
}

inline const std::vector<std::string>& baseline_method_names() {
    static const std::vector<std::string> names = {"degree", "pagerank", "hindex", "enc"};
    return names;
}

/// Ranking for a named baseline; throws on unknown names.
inline NodeRanking baseline_ranking(const Graph& g, const std::string& method) {
    if (method == "degree") return degree_rank(g);
    if (method == "pagerank") return pagerank(g);
    if (method == "hindex") return h_index_rank(g);
    if (method == "enc") return enc_rank(g);
    throw std::invalid_argument("unknown baseline method: " + method);
}

inline void write_ranking_csv(const Graph& g, const NodeRanking& r, std::ostream& out) {
    if (r.scores.size() != g.node_count()) throw std::invalid_argument("ranking does not cover graph");
    out << "node_label,score,rank\n";
    for (std::size_t i = 0; i < r.order.size(); ++i) {
        const NodeId v = r.order[i];
        out << g.label(v) << ',' << fmt_double(r.scores[v]) << ',' << (i + 1) << '\n';
    }
}

}  // namespace infmax
