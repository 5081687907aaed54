#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "infmax/community.hpp"
#include "infmax/format.hpp"
#include "infmax/graph.hpp"
#include "infmax/influence.hpp"
#include "infmax/random.hpp"
#include "infmax/seed_set.hpp"

namespace infmax {

struct HHOConfig {
    std::size_t k = 1;                // seed budget, must match the plan
    std::size_t population = 20;      // hawks
    std::size_t iterations = 50;
    std::size_t scout_threshold = 0;  // L: scout only seeds with more than L neighbors
    double beta = 1.5;                // Levy exponent
    double lower = 0.0;               // position bounds
    double upper = 1.0;
    std::uint64_t seed = 0;

    void validate() const {
        if (k < 1) throw std::invalid_argument("seed budget k must be >= 1");
        if (population < 2) throw std::invalid_argument("population must be >= 2");
        if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
        if (!(beta > 1.0) || beta > 2.0) throw std::invalid_argument("beta must be in (1, 2]");
        if (!(lower >= 0.0) || !(lower < upper)) throw std::invalid_argument("need 0 <= lower < upper");
    }
};

struct Hawk {
    std::vector<double> position;  // one entry per candidate-pool node
    SeedSet seeds;
    double fitness = 0.0;
};

namespace detail {

inline void clamp_position(std::vector<double>& x, const HHOConfig& cfg) {
    for (double& v : x) v = std::clamp(v, cfg.lower, cfg.upper);
}

}  // namespace detail

/// Map a position vector to a seed set: within each significant community,
/// its budget's worth of top-position candidates; ties go to the higher
/// degree, then the lower node id. Result is sorted ascending.
inline SeedSet decode(const std::vector<double>& position, const BudgetPlan& plan) {
    if (position.size() != plan.pool.size()) throw std::invalid_argument("position length != pool size");
    SeedSet s;
    s.method = "dhho";
    s.nodes.reserve(plan.k);
    std::vector<std::size_t> idx;
    for (std::size_t c = 0; c < plan.significant.size(); ++c) {
        const std::size_t budget = plan.budgets[c];
        if (budget == 0) continue;
        idx = plan.community_pool[c];
        std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(budget), idx.end(),
                          [&](std::size_t a, std::size_t b) {
                              if (position[a] != position[b]) return position[a] > position[b];
                              if (plan.pool_degree[a] != plan.pool_degree[b])
                                  return plan.pool_degree[a] > plan.pool_degree[b];
                              return plan.pool[a] < plan.pool[b];
                          });
        for (std::size_t j = 0; j < budget; ++j) s.nodes.push_back(plan.pool[idx[j]]);
    }
    std::sort(s.nodes.begin(), s.nodes.end());
    return s;
}

/// LIE fitness of a decoded seed set on the optimization graph.
class LieEvaluator {
public:
    LieEvaluator(const Graph& g, EstimatorParams params) : g_(&g), params_(params) {
        params_.validate();
    }
    double operator()(const std::vector<NodeId>& nodes) const { return lie(*g_, nodes, params_); }
    const Graph& graph() const { return *g_; }

private:
    const Graph* g_;
    EstimatorParams params_;
};

/// Random initial population: entry j is r/max_d with r an integer uniform
/// in 1..degree(j), biasing start positions toward high-degree candidates.
template <class Engine>
std::vector<Hawk> init_population(const BudgetPlan& plan, const HHOConfig& cfg,
                                  const LieEvaluator& evaluate, Engine& rng) {
    cfg.validate();
    if (plan.pool.empty()) throw std::invalid_argument("candidate pool is empty");
    if (plan.k != cfg.k) throw std::invalid_argument("plan budget does not match config k");
    if (plan.k > plan.pool.size())
        throw std::runtime_error("infeasible seed budget: k exceeds candidate pool");
    const double max_d = static_cast<double>(plan.max_pool_degree);
    std::vector<Hawk> hawks(cfg.population);
    for (Hawk& h : hawks) {
        h.position.resize(plan.pool.size());
        for (std::size_t j = 0; j < plan.pool.size(); ++j) {
            std::uniform_int_distribution<std::size_t> r(1, plan.pool_degree[j]);
            h.position[j] = static_cast<double>(r(rng)) / max_d;
        }
        detail::clamp_position(h.position, cfg);
        h.seeds = decode(h.position, plan);
        h.fitness = evaluate(h.seeds.nodes);
    }
    return hawks;
}

/// Prey escaping energy, decaying linearly over the run.
inline double escaping_energy(double e0, std::size_t t, std::size_t iterations) {
    if (t >= iterations) throw std::invalid_argument("iteration index out of range");
    return 2.0 * e0 * (1.0 - static_cast<double>(t) / static_cast<double>(iterations));
}

/// Prey jump strength J = 2(1 - rand), in (0, 2].
template <class Engine>
double jump_strength(Engine& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return 2.0 * (1.0 - unit(rng));
}

/// Exploration move: perch on a random hawk (q >= 0.5) or on a point
/// between the prey and the population mean (q < 0.5).
inline std::vector<double> explore_update(const std::vector<double>& x,
                                          const std::vector<double>& x_rand,
                                          const std::vector<double>& x_rabbit,
                                          const std::vector<double>& x_mean, double q, double r1,
                                          double r2, double r3, double r4, const HHOConfig& cfg) {
    std::vector<double> y(x.size());
    if (q >= 0.5) {
        for (std::size_t j = 0; j < x.size(); ++j)
            y[j] = x_rand[j] - r1 * std::abs(x_rand[j] - 2.0 * r2 * x[j]);
    } else {
        const double offset = r3 * (cfg.lower + r4 * (cfg.upper - cfg.lower));
        for (std::size_t j = 0; j < x.size(); ++j) y[j] = (x_rabbit[j] - x_mean[j]) - offset;
    }
    detail::clamp_position(y, cfg);
    return y;
}

/// Soft besiege: circle the prey, offset by the jump-scaled distance.
inline std::vector<double> soft_besiege(const std::vector<double>& x,
                                        const std::vector<double>& x_rabbit, double e, double j,
                                        const HHOConfig& cfg) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double delta = x_rabbit[i] - x[i];
        y[i] = delta - e * std::abs(j * x_rabbit[i] - x[i]);
    }
    detail::clamp_position(y, cfg);
    return y;
}

/// Hard besiege: pounce straight at the prey.
inline std::vector<double> hard_besiege(const std::vector<double>& x,
                                        const std::vector<double>& x_rabbit, double e,
                                        const HHOConfig& cfg) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = x_rabbit[i] - e * std::abs(x_rabbit[i] - x[i]);
    detail::clamp_position(y, cfg);
    return y;
}

/// Mantegna scale factor for Levy steps.
inline double levy_sigma(double beta) {
    if (!(beta > 1.0) || beta > 2.0) throw std::invalid_argument("beta must be in (1, 2]");
    const double num = std::tgamma(1.0 + beta) * std::sin(std::numbers::pi * beta / 2.0);
    const double den =
        std::tgamma((1.0 + beta) / 2.0) * beta * std::pow(2.0, (beta - 1.0) / 2.0);
    return std::pow(num / den, 1.0 / beta);
}

/// Heavy-tailed Levy step vector, 0.01 * u * sigma / |v|^(1/beta) with u, v
/// standard normal.
template <class Engine>
std::vector<double> levy_flight(std::size_t dim, double beta, Engine& rng) {
    const double sigma = levy_sigma(beta);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> step(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const double u = normal(rng);
        const double v = normal(rng);
        step[i] = 0.01 * u * sigma / std::pow(std::abs(v), 1.0 / beta);
    }
    return step;
}

enum class DiveMode { soft, hard };

/// Rapid progressive dive: feint Y toward the prey (from the hawk in soft
/// mode, from the population mean in hard mode), then a Levy-perturbed
/// strike Z. Keeps whichever strictly improves the hawk's fitness,
/// preferring Z on a double improvement with f(Z) >= f(Y); otherwise the
/// hawk stays put.
template <class FitnessFn, class Engine>
std::vector<double> rapid_dive_update(const std::vector<double>& x, double fx,
                                      const std::vector<double>& x_rabbit,
                                      const std::vector<double>& x_mean, double e, double j,
                                      DiveMode mode, FitnessFn&& fitness, const HHOConfig& cfg,
                                      Engine& rng) {
    const std::vector<double>& anchor = (mode == DiveMode::soft) ? x : x_mean;
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = x_rabbit[i] - e * std::abs(j * x_rabbit[i] - anchor[i]);
    detail::clamp_position(y, cfg);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<double> lf = levy_flight(x.size(), cfg.beta, rng);
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = y[i] + unit(rng) * lf[i];
    detail::clamp_position(z, cfg);

    const double fy = fitness(y);
    const double fz = fitness(z);
    if (fz > fx && (fz >= fy || !(fy > fx))) return z;
    if (fy > fx) return y;
    return x;
}

/// Local search over the hawk's seed set: visit seeds in ascending degree
/// order and try swapping each for a one-hop neighbor (gated per neighbor
/// by a coin flip and the |N1| > L threshold). A swap sticks only when the
/// neighbor is an unused pool candidate and strictly raises the fitness;
/// the two position entries are exchanged so the moved-in node inherits the
/// moved-out node's selection weight.
template <class Engine>
Hawk neighbor_scout(const Hawk& hawk, const Graph& g, std::size_t scout_threshold,
                    const BudgetPlan& plan, const LieEvaluator& evaluate, Engine& rng) {
    Hawk h = hawk;
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<NodeId> visit = h.seeds.nodes;
    std::sort(visit.begin(), visit.end(), [&](NodeId a, NodeId b) {
        if (g.degree(a) != g.degree(b)) return g.degree(a) < g.degree(b);
        return a < b;
    });

    auto pool_index = [&](NodeId v) -> std::size_t {
        const auto it = std::lower_bound(plan.pool.begin(), plan.pool.end(), v);
        if (it == plan.pool.end() || *it != v) return plan.pool.size();
        return static_cast<std::size_t>(it - plan.pool.begin());
    };
    auto in_seeds = [&](NodeId v) {
        return std::binary_search(h.seeds.nodes.begin(), h.seeds.nodes.end(), v);
    };

    std::vector<NodeId> trial;
    for (NodeId seed : visit) {
        const std::size_t neighborhood = g.degree(seed);
        bool replaced = false;
        for (NodeId nb : g.neighbors(seed)) {
            const double coin = unit(rng);  // drawn per neighbor regardless of the gate
            if (replaced || coin <= 0.5 || neighborhood <= scout_threshold) continue;
            const std::size_t nb_idx = pool_index(nb);
            if (nb_idx == plan.pool.size() || in_seeds(nb)) continue;
            trial = h.seeds.nodes;
            *std::find(trial.begin(), trial.end(), seed) = nb;
            std::sort(trial.begin(), trial.end());
            const double f = evaluate(trial);
            if (f > h.fitness) {
                std::swap(h.position[pool_index(seed)], h.position[nb_idx]);
                h.seeds.nodes = trial;
                h.fitness = f;
                replaced = true;
            }
        }
    }
    return h;
}

struct IterationStat {
    std::size_t iteration = 0;  // 0 = after initialization
    double best_fitness = 0.0;
    double wall_ms = 0.0;  // elapsed since optimization start
};

struct OptimizeResult {
    SeedSet best;
    double fitness = 0.0;
    std::vector<IterationStat> trace;
};

/// Full optimizer run. Each iteration freezes the prey position (global
/// best), the population mean, and the per-hawk positions, then updates
/// every hawk except the current best: exploration while |E| >= 1, else one
/// of the four besiege variants picked by (r, |E|); the update is followed
/// by the neighbor scout. The global best advances only on strict fitness
/// improvement, so the reported trace is monotone.
inline OptimizeResult optimize(const Graph& g_pruned, const BudgetPlan& plan, const HHOConfig& cfg,
                               const EstimatorParams& estimator) {
    cfg.validate();
    const LieEvaluator evaluate(g_pruned, estimator);
    auto engine = make_engine(cfg.seed);
    const auto started = std::chrono::steady_clock::now();
    auto elapsed_ms = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();
    };

    std::vector<Hawk> hawks = init_population(plan, cfg, evaluate, engine);
    std::size_t best_idx = 0;
    for (std::size_t i = 1; i < hawks.size(); ++i)
        if (hawks[i].fitness > hawks[best_idx].fitness) best_idx = i;
    Hawk global_best = hawks[best_idx];

    OptimizeResult result;
    result.trace.push_back({0, global_best.fitness, elapsed_ms()});

    const auto fitness_of = [&](const std::vector<double>& pos) {
        return evaluate(decode(pos, plan).nodes);
    };
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);

    const std::size_t dim = plan.pool.size();
    for (std::size_t t = 0; t < cfg.iterations; ++t) {
        // Frozen snapshots: prey, population mean, and everyone's position.
        const std::vector<double> rabbit = global_best.position;
        std::vector<double> mean(dim, 0.0);
        std::vector<std::vector<double>> snapshot(hawks.size());
        for (std::size_t i = 0; i < hawks.size(); ++i) {
            snapshot[i] = hawks[i].position;
            for (std::size_t d = 0; d < dim; ++d) mean[d] += snapshot[i][d];
        }
        for (double& m : mean) m /= static_cast<double>(hawks.size());

        std::size_t iter_best = best_idx;
        for (std::size_t i = 0; i < hawks.size(); ++i) {
            if (i == best_idx) continue;
            Hawk& h = hawks[i];
            const double e0 = sym(engine);
            const double e = escaping_energy(e0, t, cfg.iterations);
            const double j = jump_strength(engine);

            if (std::abs(e) >= 1.0) {
                const double q = unit(engine);
                const double r1 = unit(engine);
                const double r2 = unit(engine);
                const double r3 = unit(engine);
                const double r4 = unit(engine);
                std::uniform_int_distribution<std::size_t> pick(0, hawks.size() - 2);
                std::size_t other = pick(engine);
                if (other >= i) ++other;
                h.position =
                    explore_update(snapshot[i], snapshot[other], rabbit, mean, q, r1, r2, r3, r4, cfg);
            } else {
                const double r = unit(engine);
                if (r >= 0.5 && std::abs(e) >= 0.5) {
                    h.position = soft_besiege(snapshot[i], rabbit, e, j, cfg);
                } else if (r >= 0.5) {
                    h.position = hard_besiege(snapshot[i], rabbit, e, cfg);
                } else {
                    const DiveMode mode = std::abs(e) >= 0.5 ? DiveMode::soft : DiveMode::hard;
                    h.position = rapid_dive_update(snapshot[i], h.fitness, rabbit, mean, e, j, mode,
                                                   fitness_of, cfg, engine);
                }
            }
            h.seeds = decode(h.position, plan);
            h.fitness = evaluate(h.seeds.nodes);
            h = neighbor_scout(h, g_pruned, cfg.scout_threshold, plan, evaluate, engine);
            if (hawks[i].fitness > hawks[iter_best].fitness) iter_best = i;
        }

        best_idx = iter_best;
        if (hawks[best_idx].fitness > global_best.fitness) global_best = hawks[best_idx];
        result.trace.push_back({t + 1, global_best.fitness, elapsed_ms()});
    }

    result.best = global_best.seeds;
    result.best.method = "dhho";
    result.fitness = global_best.fitness;
    return result;
}

inline void write_trace_csv(const std::vector<IterationStat>& trace, std::ostream& out) {
    out << "iteration,best_fitness,wall_ms\n";
    for (const IterationStat& s : trace)
        out << s.iteration << ',' << fmt_double(s.best_fitness) << ',' << fmt_fixed(s.wall_ms, 3)
            << '\n';
}

}  // namespace infmax
