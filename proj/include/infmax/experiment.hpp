#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <exception>
#include <filesystem>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "infmax/baselines.hpp"
#include "infmax/community.hpp"
#include "infmax/diffusion.hpp"
#include "infmax/format.hpp"
#include "infmax/graph.hpp"
#include "infmax/hho.hpp"
#include "infmax/influence.hpp"
#include "infmax/random.hpp"
#include "infmax/seed_set.hpp"
#include "infmax/stats.hpp"

namespace infmax {

struct ExperimentConfig {
    std::vector<std::string> graphs;  // edge-list paths
    std::vector<std::string> methods = {"dhho", "degree", "pagerank", "hindex", "enc"};
    std::vector<double> fractions;          // empty: pick per dataset size
    std::vector<double> probabilities = {0.1};
    std::size_t runs = 50;
    std::size_t population = 20;
    std::size_t iterations = 50;
    std::size_t scout_threshold = 0;  // 0: ceil(mean degree of the pruned graph)
    double beta = 1.5;
    std::size_t sig_threshold = 0;  // 0: max(k, ceil(0.01 n))
    std::uint64_t seed = 1;
    std::size_t jobs = 0;  // 0: hardware concurrency

    void validate() const {
        if (graphs.empty()) throw std::invalid_argument("no input graphs");
        if (methods.empty()) throw std::invalid_argument("no methods selected");
        for (double f : fractions)
            if (!(f > 0.0) || f >= 1.0) throw std::invalid_argument("fractions must be in (0, 1)");
        for (double p : probabilities)
            if (!(p > 0.0) || p > 1.0)
                throw std::invalid_argument("probabilities must be in (0, 1]");
        if (runs < 1) throw std::invalid_argument("runs must be >= 1");
        if (population < 2) throw std::invalid_argument("population must be >= 2");
        if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
        if (!(beta > 1.0) || beta > 2.0) throw std::invalid_argument("beta must be in (1, 2]");
    }
};

/// One output row of a sweep; fis columns are NaN in the sweeps that skip
/// the simulation.
struct ExperimentRecord {
    std::string dataset;
    std::string method;
    double fraction = 0.0;
    double p = 0.0;
    std::size_t k = 0;
    double fis_mean = std::numeric_limits<double>::quiet_NaN();
    double fis_std = std::numeric_limits<double>::quiet_NaN();
    double lie_value = 0.0;
    double log_lie = 0.0;
    double wall_ms = 0.0;  // seed-selection time only
    std::uint64_t seed = 0;
};

inline std::size_t fraction_to_k(double fraction, std::size_t n) {
    const long k = std::lround(fraction * static_cast<double>(n));
    return static_cast<std::size_t>(std::max(1L, k));
}

/// Paper defaults: coarse set for small graphs, finer set above 2000 nodes.
inline std::vector<double> default_fractions(std::size_t n) {
    if (n > 2000) return {0.005, 0.01, 0.015, 0.02, 0.025, 0.03, 0.035, 0.04};
    return {0.02, 0.03, 0.04, 0.05, 0.06};
}

inline std::vector<double> default_probability_sweep() {
    return {0.05, 0.075, 0.1, 0.125, 0.15, 0.175, 0.2, 0.225, 0.25};
}

/// Everything derivable from a dataset alone, shared read-only by all of
/// its experiment cells.
struct DatasetContext {
    std::string name;
    Graph graph;
    CommunityPartition partition;
    Graph pruned;

    static DatasetContext load(const std::string& path) {
        DatasetContext ctx;
        ctx.name = std::filesystem::path(path).stem().string();
        ctx.graph = load_edge_list_file(path);
        ctx.partition = louvain(ctx.graph);
        ctx.pruned = prune_intercommunity_edges(ctx.graph, ctx.partition);
        return ctx;
    }
};

namespace detail {

/// Per-cell seed: a deterministic function of the master seed and the cell
/// key, so multi-threaded sweeps reproduce byte-identical tables.
inline std::uint64_t cell_seed(const ExperimentConfig& cfg, const std::string& dataset,
                               const std::string& method, double fraction, double p) {
    std::uint64_t s = mix_seed(cfg.seed, hash_string(dataset));
    s = mix_seed(s, hash_string(method));
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(fraction));
    std::memcpy(&bits, &fraction, sizeof(bits));
    s = mix_seed(s, bits);
    std::memcpy(&bits, &p, sizeof(bits));
    return mix_seed(s, bits);
}

/// Seed selection for one cell: DHHO builds its community budget plan and
/// optimizes on the pruned graph; baselines rank the original graph.
/// Returns the chosen seeds and fills the selection wall time.
inline SeedSet select_seeds(const DatasetContext& ctx, const ExperimentConfig& cfg,
                            const std::string& method, std::size_t k, double p,
                            std::uint64_t seed, double& wall_ms) {
    const auto started = std::chrono::steady_clock::now();
    SeedSet seeds;
    if (method == "dhho") {
        const std::size_t threshold =
            cfg.sig_threshold > 0
                ? cfg.sig_threshold
                : std::max(k, static_cast<std::size_t>(
                                  std::ceil(0.01 * static_cast<double>(ctx.graph.node_count()))));
        const std::vector<CommunityId> significant = select_significant(ctx.partition, threshold);
        const BudgetPlan plan = allocate_budgets(ctx.pruned, ctx.partition, significant, k);
        HHOConfig hho;
        hho.k = k;
        hho.population = cfg.population;
        hho.iterations = cfg.iterations;
        hho.scout_threshold =
            cfg.scout_threshold > 0
                ? cfg.scout_threshold
                : static_cast<std::size_t>(std::ceil(ctx.pruned.mean_degree()));
        hho.beta = cfg.beta;
        hho.seed = seed;
        seeds = optimize(ctx.pruned, plan, hho, EstimatorParams{p}).best;
    } else {
        seeds = top_k(baseline_ranking(ctx.graph, method), k);
    }
    wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return seeds;
}

inline ExperimentRecord run_cell(const DatasetContext& ctx, const ExperimentConfig& cfg,
                                 const std::string& method, double fraction, double p,
                                 bool simulate) {
    ExperimentRecord rec;
    rec.dataset = ctx.name;
    rec.method = method;
    rec.fraction = fraction;
    rec.p = p;
    rec.k = fraction_to_k(fraction, ctx.graph.node_count());
    rec.seed = cell_seed(cfg, ctx.name, method, fraction, p);

    const SeedSet seeds =
        select_seeds(ctx, cfg, method, rec.k, p, mix_seed(rec.seed, 1), rec.wall_ms);
    rec.lie_value = lie(ctx.graph, seeds.nodes, EstimatorParams{p});
    rec.log_lie = std::log(rec.lie_value);
    if (simulate) {
        DiffusionParams dp;
        dp.p = p;
        dp.runs = cfg.runs;
        dp.seed = mix_seed(rec.seed, 2);
        const DiffusionResult d = fis(ctx.graph, seeds.nodes, dp);
        rec.fis_mean = d.fis;
        rec.fis_std = d.fis_std;
    }
    return rec;
}

template <class Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, count);
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

struct CellKey {
    std::size_t dataset;
    std::string method;
    double fraction;
    double p;
};

/// Shared sweep driver: cross product of datasets x methods x fractions x
/// probabilities, executed by a worker pool, output sorted by key.
inline std::vector<ExperimentRecord> run_sweep(const ExperimentConfig& cfg,
                                               const std::vector<double>& fractions_override,
                                               const std::vector<double>& probabilities,
                                               bool simulate) {
    cfg.validate();
    std::vector<DatasetContext> contexts;
    contexts.reserve(cfg.graphs.size());
    for (const std::string& path : cfg.graphs) contexts.push_back(DatasetContext::load(path));

    std::vector<CellKey> cells;
    for (std::size_t d = 0; d < contexts.size(); ++d) {
        const std::vector<double> fractions =
            fractions_override.empty() ? default_fractions(contexts[d].graph.node_count())
                                       : fractions_override;
        for (const std::string& method : cfg.methods)
            for (double f : fractions)
                for (double p : probabilities) cells.push_back({d, method, f, p});
    }

    std::vector<ExperimentRecord> records(cells.size());
    parallel_for(cells.size(), cfg.jobs, [&](std::size_t i) {
        const CellKey& c = cells[i];
        records[i] = run_cell(contexts[c.dataset], cfg, c.method, c.fraction, c.p, simulate);
    });
    std::sort(records.begin(), records.end(),
              [](const ExperimentRecord& a, const ExperimentRecord& b) {
                  if (a.dataset != b.dataset) return a.dataset < b.dataset;
                  if (a.method != b.method) return a.method < b.method;
                  if (a.fraction != b.fraction) return a.fraction < b.fraction;
                  return a.p < b.p;
              });
    return records;
}

}  // namespace detail

/// FIS vs spreader fraction at fixed p (first configured probability).
inline std::vector<ExperimentRecord> run_fis_sweep(const ExperimentConfig& cfg) {
    const double p = cfg.probabilities.empty() ? 0.1 : cfg.probabilities.front();
    return detail::run_sweep(cfg, cfg.fractions, {p}, true);
}

/// LIE and log(LIE) vs spreader fraction; no simulation.
inline std::vector<ExperimentRecord> run_lie_sweep(const ExperimentConfig& cfg) {
    const double p = cfg.probabilities.empty() ? 0.1 : cfg.probabilities.front();
    return detail::run_sweep(cfg, cfg.fractions, {p}, false);
}

/// FIS vs activation probability at spreader fraction 0.10.
inline std::vector<ExperimentRecord> run_prob_sweep(const ExperimentConfig& cfg) {
    const std::vector<double> probs =
        cfg.probabilities.size() > 1 ? cfg.probabilities : default_probability_sweep();
    return detail::run_sweep(cfg, {0.10}, probs, true);
}

/// Selection wall time vs spreader fraction; no simulation.
inline std::vector<ExperimentRecord> run_timing(const ExperimentConfig& cfg) {
    const double p = cfg.probabilities.empty() ? 0.1 : cfg.probabilities.front();
    return detail::run_sweep(cfg, cfg.fractions, {p}, false);
}

inline void write_records_csv(const std::vector<ExperimentRecord>& records, std::ostream& out) {
    out << "dataset,method,fraction,p,k,fis_mean,fis_std,lie,log_lie,wall_ms,seed\n";
    for (const ExperimentRecord& r : records) {
        out << r.dataset << ',' << r.method << ',' << fmt_double(r.fraction) << ','
            << fmt_double(r.p) << ',' << r.k << ',' << fmt_double(r.fis_mean) << ','
            << fmt_double(r.fis_std) << ',' << fmt_double(r.lie_value) << ','
            << fmt_double(r.log_lie) << ',' << fmt_fixed(r.wall_ms, 3) << ',' << r.seed << '\n';
    }
}

inline std::vector<ExperimentRecord> read_records_csv(std::istream& in) {
    std::vector<ExperimentRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line.rfind("dataset,", 0) != 0)
                throw std::runtime_error("unexpected records header: " + line);
            continue;
        }
        std::stringstream fields(line);
        std::string cell;
        std::vector<std::string> tokens;
        while (std::getline(fields, cell, ',')) tokens.push_back(cell);
        if (tokens.size() != 11)
            throw std::runtime_error("records line " + std::to_string(line_no) +
                                     ": expected 11 fields, got " + std::to_string(tokens.size()));
        try {
            ExperimentRecord r;
            r.dataset = tokens[0];
            r.method = tokens[1];
            r.fraction = std::stod(tokens[2]);
            r.p = std::stod(tokens[3]);
            r.k = static_cast<std::size_t>(std::stoull(tokens[4]));
            r.fis_mean = std::stod(tokens[5]);
            r.fis_std = std::stod(tokens[6]);
            r.lie_value = std::stod(tokens[7]);
            r.log_lie = std::stod(tokens[8]);
            r.wall_ms = std::stod(tokens[9]);
            r.seed = std::stoull(tokens[10]);
            records.push_back(std::move(r));
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("records line " + std::to_string(line_no) + ": bad number");
        }
    }
    if (records.empty()) throw std::runtime_error("no records found");
    return records;
}

/// Pivot records into a problem x method matrix of mean FIS values. Rows
/// are (dataset, fraction, p) triples; every method must cover every row.
inline ResultMatrix records_to_matrix(const std::vector<ExperimentRecord>& records) {
    ResultMatrix m;
    m.higher_is_better = true;
    std::vector<std::string> row_keys;
    for (const ExperimentRecord& r : records) {
        const std::string key =
            r.dataset + ":f" + fmt_double(r.fraction) + ":p" + fmt_double(r.p);
        if (std::find(row_keys.begin(), row_keys.end(), key) == row_keys.end())
            row_keys.push_back(key);
        if (std::find(m.methods.begin(), m.methods.end(), r.method) == m.methods.end())
            m.methods.push_back(r.method);
    }
    m.problems = row_keys;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    m.values.assign(m.problems.size(), std::vector<double>(m.methods.size(), nan));
    for (const ExperimentRecord& r : records) {
        const std::string key =
            r.dataset + ":f" + fmt_double(r.fraction) + ":p" + fmt_double(r.p);
        const auto row = std::find(m.problems.begin(), m.problems.end(), key) - m.problems.begin();
        const auto col = std::find(m.methods.begin(), m.methods.end(), r.method) - m.methods.begin();
        m.values[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] = r.fis_mean;
    }
    for (const auto& row : m.values)
        for (double v : row)
            if (std::isnan(v))
                throw std::runtime_error("result matrix has missing or NaN cells; "
                                         "compare needs a completed FIS sweep");
    return m;
}

/// Friedman/Iman-Davenport/Holm comparison over a completed FIS sweep.
inline ComparisonReport compare_records(const std::vector<ExperimentRecord>& records) {
    return compare_methods(records_to_matrix(records));
}

}  // namespace infmax
