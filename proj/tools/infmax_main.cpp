// Command-line front end: runs the experiment sweeps, the community
// summary and the nonparametric method comparison, writing CSV artifacts
// into an output directory.
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "infmax/experiment.hpp"

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void write_records(const std::vector<infmax::ExperimentRecord>& records,
                   const std::filesystem::path& path) {
    auto out = open_output(path);
    infmax::write_records_csv(records, out);
    std::cout << "wrote " << records.size() << " rows to " << path.string() << "\n";
}

void write_report(const infmax::ComparisonReport& report, const std::filesystem::path& path) {
    auto out = open_output(path);
    infmax::write_report_csv(report, out);
    std::cout << "control method: " << report.control
              << "  friedman p=" << infmax::fmt_double(report.friedman_p, 4)
              << "  iman-davenport p=" << infmax::fmt_double(report.iman_davenport_p, 4) << "\n";
    std::cout << "wrote report to " << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"community-restricted influence maximization benchmark"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value file; command-line flags take precedence");

    infmax::ExperimentConfig cfg;
    std::string out_dir = "results";
    std::string records_path;

    app.add_option("--graph", cfg.graphs, "edge-list file (repeatable or comma separated)")
        ->delimiter(',');
    app.add_option("--methods", cfg.methods,
                   "selection methods: dhho, degree, pagerank, hindex, enc")
        ->delimiter(',');
    app.add_option("--fractions", cfg.fractions, "spreader fractions (default: by dataset size)")
        ->delimiter(',');
    app.add_option("--p", cfg.probabilities, "activation probability, single value or list")
        ->delimiter(',');
    app.add_option("--runs", cfg.runs, "Monte-Carlo repetitions per cell");
    app.add_option("--pop", cfg.population, "optimizer population size");
    app.add_option("--iters", cfg.iterations, "optimizer iterations");
    app.add_option("--scout-threshold", cfg.scout_threshold,
                   "neighbor-scout degree gate (0 = ceil of pruned mean degree)");
    app.add_option("--sig-threshold", cfg.sig_threshold,
                   "significant-community size cutoff (0 = max(k, 1% of nodes))");
    app.add_option("--seed", cfg.seed, "master random seed");
    app.add_option("--jobs", cfg.jobs, "worker threads (0 = hardware concurrency)");
    app.add_option("--out", out_dir, "output directory for CSV artifacts");

    // The shared flags above live on the parent app; fallthrough lets them
    // appear after the subcommand name, which is the natural call shape.
    auto* fis_cmd = app.add_subcommand("fis-sweep", "simulated influence vs spreader fraction");
    auto* lie_cmd = app.add_subcommand("lie-sweep", "two-hop estimate vs spreader fraction");
    auto* prob_cmd =
        app.add_subcommand("prob-sweep", "simulated influence vs activation probability");
    auto* timing_cmd = app.add_subcommand("timing", "seed-selection wall time vs fraction");
    auto* compare_cmd =
        app.add_subcommand("compare", "Friedman / Iman-Davenport / Holm method comparison");
    auto* communities_cmd =
        app.add_subcommand("communities", "community detection summary and partition dump");
    for (CLI::App* sub : {fis_cmd, lie_cmd, prob_cmd, timing_cmd, compare_cmd, communities_cmd})
        sub->fallthrough();
    compare_cmd
        ->add_option("--records", records_path,
                     "existing fis-sweep CSV to compare (default: run the sweep now)")
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        const std::filesystem::path out(out_dir);
        std::filesystem::create_directories(out);

        if (communities_cmd->parsed()) {
            if (cfg.graphs.empty()) throw std::invalid_argument("no input graphs");
            std::cout << "dataset,nodes,edges,communities,modularity\n";
            for (const std::string& path : cfg.graphs) {
                const auto ctx = infmax::DatasetContext::load(path);
                std::cout << ctx.name << ',' << ctx.graph.node_count() << ','
                          << ctx.graph.edge_count() << ',' << ctx.partition.communities.size()
                          << ',' << infmax::fmt_double(ctx.partition.modularity, 6) << "\n";
                auto csv = open_output(out / (ctx.name + "_communities.csv"));
                infmax::write_partition_csv(ctx.graph, ctx.partition, csv);
            }
            return 0;
        }

        if (fis_cmd->parsed()) {
            write_records(infmax::run_fis_sweep(cfg), out / "fis_sweep.csv");
        } else if (lie_cmd->parsed()) {
            write_records(infmax::run_lie_sweep(cfg), out / "lie_sweep.csv");
        } else if (prob_cmd->parsed()) {
            write_records(infmax::run_prob_sweep(cfg), out / "prob_sweep.csv");
        } else if (timing_cmd->parsed()) {
            write_records(infmax::run_timing(cfg), out / "timing.csv");
        } else if (compare_cmd->parsed()) {
            std::vector<infmax::ExperimentRecord> records;
            if (!records_path.empty()) {
                std::ifstream in(records_path);
                if (!in) throw std::runtime_error("cannot read " + records_path);
                records = infmax::read_records_csv(in);
            } else {
                records = infmax::run_fis_sweep(cfg);
                write_records(records, out / "fis_sweep.csv");
            }
            write_report(infmax::compare_records(records), out / "report.csv");
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
