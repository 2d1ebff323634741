#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "farmsched/config.hpp"
#include "farmsched/csv.hpp"
#include "farmsched/engine.hpp"
#include "farmsched/sweep.hpp"

namespace {

using namespace farmsched;

struct CommonOpts {
    std::string config_path;
    std::vector<std::uint32_t> seed;
    double d = -1.0;
    double error_rate = -1.0;
    long ticks = -1;
    bool quiet = false;
};

RunConfig load_with_overrides(const CommonOpts& o) {
    RunConfig cfg;
    if (!o.config_path.empty()) cfg = load_config_file(o.config_path);
    if (o.seed.size() == 2) {
        cfg.engine.seed_z = o.seed[0];
        cfg.engine.seed_w = o.seed[1];
    }
    if (o.d >= 0.0) cfg.engine.scheduler.d = o.d;
    if (o.error_rate >= 0.0) cfg.engine.error_rate = o.error_rate;
    if (o.ticks >= 0) cfg.engine.ticks = o.ticks;
    cfg.engine.validate();
    cfg.sweep.validate();
    return cfg;
}

void report_warnings(const EngineConfig& cfg) {
    for (const auto& w : config_warnings(cfg))
        std::cerr << "warning: " << w << '\n';
}

int cmd_run(const CommonOpts& opts, const std::string& trace_path) {
    RunConfig cfg = load_with_overrides(opts);
    report_warnings(cfg.engine);

    RunMetrics metrics;
    if (!trace_path.empty()) {
        std::ofstream trace_file(trace_path);
        if (!trace_file)
            throw std::runtime_error("cannot open trace file: " + trace_path);
        CsvTraceSink sink(trace_file);
        metrics = run(cfg.engine, &sink);
    } else {
        metrics = run(cfg.engine);
    }
    if (!opts.quiet) print_metrics(metrics, std::cout);
    return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::string& out_dir,
              int parallel) {
    RunConfig cfg = load_with_overrides(opts);
    report_warnings(cfg.engine);

    SweepResult result = run_sweep(cfg.sweep, cfg.engine, parallel);

    std::filesystem::create_directories(out_dir);
    const auto cells_path = std::filesystem::path(out_dir) / "sweep_cells.csv";
    const auto opt_path = std::filesystem::path(out_dir) / "sweep_optimum.csv";
    std::ofstream cells_file(cells_path);
    std::ofstream opt_file(opt_path);
    if (!cells_file || !opt_file)
        throw std::runtime_error("cannot open output files under " + out_dir);
    std::size_t bytes = emit_sweep_csv(result, cells_file, opt_file);

    if (!opts.quiet) {
        std::cout << result.cells.size() << " cells, " << bytes
                  << " bytes -> " << cells_path.string() << ", "
                  << opt_path.string() << '\n';
        for (const auto& row : result.optimum)
            std::cout << "e = " << format_real(row.error_rate)
                      << "  d* = " << format_real(row.d_star)
                      << "  throughput = " << format_real(row.throughput)
                      << '\n';
    }
    return 0;
}

int cmd_check(const std::string& config_path, bool quiet) {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_config_file(config_path);
    cfg.engine.validate();
    cfg.sweep.validate();
    report_warnings(cfg.engine);
    if (!quiet) std::cout << "config OK\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"farmsched — self-organizing fault-mitigation scheduling "
                 "simulator for a DSP farm"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string trace_path;
    std::string out_dir = "sweep_out";
    int parallel = 1;

    auto add_common = [&](CLI::App* cmd, bool with_overrides) {
        cmd->add_option("--config", opts.config_path,
                        "Config file (sections [engine], [scheduler], "
                        "[model], [sweep])");
        cmd->add_flag("--quiet", opts.quiet,
                      "Suppress the human-readable summary");
        cmd->add_option("--seed", opts.seed,
                        "Generator seed as two unsigned integers Z W")
            ->expected(2);
        cmd->add_option("--ticks", opts.ticks, "Simulated ticks per run");
        if (with_overrides) {
            cmd->add_option("--d", opts.d, "Sigmoid steepness override");
            cmd->add_option("--error-rate", opts.error_rate,
                            "Per-DSP per-tick fault probability override");
        }
    };

    CLI::App* run_cmd =
        app.add_subcommand("run", "Single simulation run; prints the metrics");
    add_common(run_cmd, true);
    run_cmd->add_option("--trace", trace_path,
                        "Write a per-tick per-DSP CSV trace to this path");

    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "Full (error_rate x d) grid; writes sweep_cells.csv and "
                 "sweep_optimum.csv");
    add_common(sweep_cmd, false);
    sweep_cmd->add_option("--out", out_dir, "Output directory");
    sweep_cmd->add_option("--parallel", parallel,
                          "Worker threads for sweep cells");

    CLI::App* check_cmd =
        app.add_subcommand("check", "Validate a config without running");
    check_cmd->add_option("--config", opts.config_path, "Config file");
    check_cmd->add_flag("--quiet", opts.quiet,
                        "Suppress the human-readable summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (app.got_subcommand(run_cmd)) return cmd_run(opts, trace_path);
        if (app.got_subcommand(sweep_cmd))
            return cmd_sweep(opts, out_dir, parallel);
        return cmd_check(opts.config_path, opts.quiet);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
