#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "infmax/graph.hpp"

namespace infmax {

/// Uniform activation probability shared by the estimators and the cascade
/// simulator.
struct EstimatorParams {
    double p = 0.1;

    void validate() const {
        if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("activation probability must be in (0,1]");
    }
};

namespace detail {

// Frontier classification shared by lie/edv. mark: 1 = seed, 2 = one-hop
// frontier, 3 = two-hop frontier.
struct TwoHopFrontier {
    std::vector<std::uint8_t> mark;
    std::vector<NodeId> one_hop;
    std::vector<std::size_t> seed_edges;  // per one_hop node: edges into the seed set
    std::vector<NodeId> two_hop;
};

inline TwoHopFrontier classify_two_hop(const Graph& g, std::span<const NodeId> seeds) {
    if (seeds.empty()) throw std::invalid_argument("seed set must be nonempty");
    TwoHopFrontier f;
    f.mark.assign(g.node_count(), 0);
    for (NodeId s : seeds) {
        if (s >= g.node_count()) throw std::out_of_range("seed node out of range");
        f.mark[s] = 1;
    }
    std::vector<std::size_t> count(g.node_count(), 0);
    for (NodeId s : seeds) {
        for (NodeId w : g.neighbors(s)) {
            if (f.mark[w] == 1) continue;
            if (f.mark[w] == 0) {
                f.mark[w] = 2;
                f.one_hop.push_back(w);
            }
            ++count[w];
        }
    }
    // Canonical frontier order makes the estimators exact set functions:
    // the same seeds in any order produce bit-identical sums.
    std::sort(f.one_hop.begin(), f.one_hop.end());
    f.seed_edges.reserve(f.one_hop.size());
    for (NodeId v : f.one_hop) f.seed_edges.push_back(count[v]);
    for (NodeId v : f.one_hop) {
        for (NodeId w : g.neighbors(v)) {
            if (f.mark[w] == 0) {
                f.mark[w] = 3;
                f.two_hop.push_back(w);
            }
        }
    }
    return f;
}

}  // namespace detail

/// Two-hop local influence estimate of a seed set.
///
/// With F1 the non-seed one-hop frontier and F2 the non-seed second ring,
///   lie(S) = k + (1 + p/|F1| * sum_{u in F2} d*(u)) * sigma1(S)
/// where sigma1(S) = sum_{i in F1} (1 - (1-p)^{edges from i into S}) and
/// d*(u) counts u's edges into F1 ∪ F2. Returns k when F1 is empty.
inline double lie(const Graph& g, std::span<const NodeId> seeds, EstimatorParams params) {
    params.validate();
    auto f = detail::classify_two_hop(g, seeds);
    const double k = static_cast<double>(seeds.size());
    if (f.one_hop.empty()) return k;

    double sigma1 = 0.0;
    for (std::size_t i = 0; i < f.one_hop.size(); ++i)
        sigma1 += 1.0 - std::pow(1.0 - params.p, static_cast<double>(f.seed_edges[i]));

    std::size_t frontier_edges = 0;
    for (NodeId u : f.two_hop) {
        for (NodeId w : g.neighbors(u))
            if (f.mark[w] >= 2) ++frontier_edges;
    }
    const double two_hop_term =
        params.p * static_cast<double>(frontier_edges) / static_cast<double>(f.one_hop.size());
    return k + (1.0 + two_hop_term) * sigma1;
}

/// One-hop expected diffusion value:
///   edv(S) = k + sum_{v in F1} (1 - (1-p)^{edges from v into S}).
inline double edv(const Graph& g, std::span<const NodeId> seeds, EstimatorParams params) {
    params.validate();
    auto f = detail::classify_two_hop(g, seeds);
    double value = static_cast<double>(seeds.size());
    for (std::size_t i = 0; i < f.one_hop.size(); ++i)
        value += 1.0 - std::pow(1.0 - params.p, static_cast<double>(f.seed_edges[i]));
    return value;
}

}  // namespace infmax
