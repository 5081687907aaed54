#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "infmax/graph.hpp"
#include "infmax/random.hpp"

namespace infmax {

struct DiffusionParams {
    double p = 0.1;          // per-edge activation probability
    std::size_t runs = 50;   // Monte-Carlo repetitions
    std::uint64_t seed = 0;  // master seed; run r draws from mix_seed(seed, r)

    void validate() const {
        if (!(p >= 0.0) || p > 1.0) throw std::invalid_argument("activation probability must be in [0, 1]");
        if (runs < 1) throw std::invalid_argument("need at least one simulation run");
    }
};

struct DiffusionResult {
    std::size_t runs = 0;
    double mean_infected = 0.0;  // average cascade size, seeds included
    double fis = 0.0;            // mean_infected / node_count
    double fis_std = 0.0;        // sample std-dev of per-run fraction infected
    std::vector<std::size_t> per_run_infected;
};

/// One independent-cascade run: every newly activated node gets a single
/// chance to activate each still-inactive neighbor with probability p, so
/// each edge flips at most one coin. Returns the activated set (seeds
/// included), in activation order.
template <class Engine>
std::vector<NodeId> ic_run(const Graph& g, const std::vector<NodeId>& seeds, double p,
                           Engine& engine) {
    if (seeds.empty()) throw std::invalid_argument("seed set must not be empty");
    if (!(p >= 0.0) || p > 1.0) throw std::invalid_argument("activation probability must be in [0, 1]");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<char> active(g.node_count(), 0);
    std::vector<NodeId> activated;
    activated.reserve(seeds.size());
    for (NodeId s : seeds) {
        g.check_node(s);
        if (!active[s]) {
            active[s] = 1;
            activated.push_back(s);
        }
    }
    // activated doubles as the BFS queue: scan never outruns the tail.
    for (std::size_t head = 0; head < activated.size(); ++head) {
        const NodeId u = activated[head];
        for (NodeId v : g.neighbors(u)) {
            if (active[v]) continue;
            if (unit(engine) < p) {
                active[v] = 1;
                activated.push_back(v);
            }
        }
    }
    return activated;
}

/// Monte-Carlo estimate of the final infected scale: mean cascade size over
/// `runs` repetitions, normalized by the node count. Run r uses its own
/// stream seeded from mix_seed(seed, r), so results do not depend on
/// evaluation order.
inline DiffusionResult fis(const Graph& g, const std::vector<NodeId>& seeds,
                           const DiffusionParams& params) {
    params.validate();
    if (g.node_count() == 0) throw std::invalid_argument("graph is empty");
    DiffusionResult result;
    result.runs = params.runs;
    result.per_run_infected.reserve(params.runs);
    const double n = static_cast<double>(g.node_count());
    std::size_t total = 0;
    for (std::size_t r = 0; r < params.runs; ++r) {
        auto engine = make_engine(mix_seed(params.seed, r));
        const std::size_t infected = ic_run(g, seeds, params.p, engine).size();
        result.per_run_infected.push_back(infected);
        total += infected;
    }
    const double runs = static_cast<double>(params.runs);
    result.mean_infected = static_cast<double>(total) / runs;
    result.fis = result.mean_infected / n;
    if (params.runs > 1) {
        // Two-pass variance: exact zero when every run infects the same count.
        double ss = 0.0;
        for (const std::size_t infected : result.per_run_infected) {
            const double d = static_cast<double>(infected) - result.mean_infected;
            ss += d * d;
        }
        result.fis_std = std::sqrt(ss / (runs - 1.0)) / n;
    }
    return result;
}

}  // namespace infmax
