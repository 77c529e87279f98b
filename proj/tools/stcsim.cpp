// Command-line front end: run single scenarios, paired comparisons, and
// one-knob parameter sweeps over JSON scenario files.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stc/stc.hpp"

namespace {

struct CommonOpts {
    std::optional<std::uint64_t> seed;
    std::optional<long> steps;
    std::string out;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, const char* out_help) {
    cmd->add_option("--seed", opts.seed, "Override the scenario seed");
    cmd->add_option("--steps", opts.steps, "Override the run length");
    cmd->add_option("--out", opts.out, out_help);
    cmd->add_flag("--quiet", opts.quiet, "Suppress the console report");
}

void apply_overrides(stc::ScenarioConfig& cfg, const CommonOpts& opts) {
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.steps) {
        if (*opts.steps < stc::kMinScenarioFileSteps)
            throw stc::ConfigError("steps must be at least "
                                   + std::to_string(stc::kMinScenarioFileSteps));
        cfg.steps = *opts.steps;
    }
    cfg.validate();
}

std::string default_csv_path(const std::string& config_path) {
    return std::filesystem::path(config_path).replace_extension(".csv").string();
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void print_metrics_block(const std::string& label, const stc::MetricsReport& m) {
    std::cout << label << ": sse=" << fmt(m.sse) << "  u_var=" << fmt(m.u_var)
              << "  settle_time=" << m.settle_time << "  ise=" << fmt(m.ise)
              << "  window=[" << m.window.begin << "," << m.window.end << ")\n";
}

// Metrics are a courtesy printout for run/sweep; a window that does not fit
// the run (e.g. disturbance near the end) is reported, not fatal.
std::optional<stc::MetricsReport> try_metrics(const stc::ScenarioConfig& cfg,
                                              const std::vector<stc::StepRecord>& records) {
    try {
        return stc::compute_metrics(records, stc::default_window(cfg),
                                     stc::settle_origin(cfg), cfg.settle_band);
    } catch (const stc::ConfigError&) {
        return std::nullopt;
    }
}

int do_run(const std::string& config_path, const CommonOpts& opts) {
    stc::ScenarioConfig cfg = stc::load_scenario_file(config_path);
    apply_overrides(cfg, opts);

    stc::RunDiagnostics diag;
    const auto records = stc::run_scenario(cfg, &diag);

    std::string csv_path = !opts.out.empty() ? opts.out
                         : !cfg.output_path.empty() ? cfg.output_path
                         : default_csv_path(config_path);
    stc::export_csv(records, csv_path);

    if (!opts.quiet) {
        std::cout << "ran " << cfg.steps << " steps, wrote " << csv_path << "\n";
        if (const auto m = try_metrics(cfg, records)) print_metrics_block("metrics", *m);
        else std::cout << "metrics window does not fit the run; skipped\n";
        if (diag.controller_faults > 0)
            std::cout << "note: " << diag.controller_faults
                      << " singular-denominator holds during the run\n";
    }
    return 0;
}

int do_compare(const std::string& path_a, const std::string& path_b, const CommonOpts& opts) {
    stc::ScenarioConfig a = stc::load_scenario_file(path_a);
    stc::ScenarioConfig b = stc::load_scenario_file(path_b);
    apply_overrides(a, opts);
    apply_overrides(b, opts);
    stc::validate_comparable(a, b);

    if (!a.output_path.empty() && a.output_path == b.output_path)
        throw stc::ConfigError("both scenarios write to '" + a.output_path + "'");

    const auto ra = stc::run_scenario(a);
    const auto rb = stc::run_scenario(b);
    const auto rep = stc::make_comparison(a, b, ra, rb);

    const std::string prefix = opts.out.empty() ? std::string("compare") : opts.out;
    const std::string csv_a = !a.output_path.empty() ? a.output_path : prefix + ".1.csv";
    const std::string csv_b = !b.output_path.empty() ? b.output_path : prefix + ".2.csv";
    stc::export_csv(ra, csv_a);
    stc::export_csv(rb, csv_b);

    if (!opts.quiet) {
        print_metrics_block("first  (" + path_a + ")", rep.first);
        print_metrics_block("second (" + path_b + ")", rep.second);
        std::cout << "command variance ratio (second/first): "
                  << (rep.variance_ratio ? fmt(*rep.variance_ratio) : std::string("undefined"))
                  << "\n";
        std::cout << "wrote " << csv_a << " and " << csv_b << "\n";
    }
    return 0;
}

void apply_sweep_value(stc::ScenarioConfig& cfg, const std::string& param, double value) {
    if (param == "r") cfg.controller.r = value;
    else if (param == "lambda") cfg.estimator.lambda = value;
    else if (param == "p0_scale") cfg.estimator.p0_scale = value;
    else if (param == "sigma2") cfg.plant.sigma2 = value;
    else if (param == "magnitude") cfg.disturbance.magnitude = value;
    else if (param == "seed") cfg.seed = static_cast<std::uint64_t>(value);
    else throw stc::ConfigError("unknown sweep parameter '" + param
                                + "' (expected r, lambda, p0_scale, sigma2, magnitude or seed)");
}

int do_sweep(const std::string& config_path, const std::string& param,
             const std::vector<double>& values, const CommonOpts& opts) {
    if (values.empty()) throw stc::ConfigError("sweep needs at least one value");
    const stc::ScenarioConfig base = [&] {
        stc::ScenarioConfig cfg = stc::load_scenario_file(config_path);
        apply_overrides(cfg, opts);
        return cfg;
    }();

    std::string table = "param,value,sse,u_var,settle_time,ise\n";
    for (double v : values) {
        stc::ScenarioConfig cfg = base;
        apply_sweep_value(cfg, param, v);
        cfg.validate();
        const auto records = stc::run_scenario(cfg);
        const auto m = try_metrics(cfg, records);
        char line[256];
        if (m) {
            std::snprintf(line, sizeof line, "%s,%.12g,%.12g,%.12g,%ld,%.12g\n",
                          param.c_str(), v, m->sse, m->u_var, m->settle_time, m->ise);
        } else {
            std::snprintf(line, sizeof line, "%s,%.12g,,,,\n", param.c_str(), v);
        }
        table += line;
    }

    if (!opts.out.empty()) {
        std::ofstream out(opts.out, std::ios::binary);
        if (!out) throw stc::ConfigError("cannot open '" + opts.out + "' for writing");
        out << table;
        if (!out) throw stc::ConfigError("failed while writing '" + opts.out + "'");
    }
    if (!opts.quiet) std::cout << table;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-tuning controller simulation toolkit"};
    app.require_subcommand(1);

    std::string run_config;
    CommonOpts run_opts;
    CLI::App* run_cmd = app.add_subcommand("run", "Run one scenario and export its CSV");
    run_cmd->add_option("config", run_config, "Scenario JSON file")->required();
    add_common(run_cmd, run_opts, "CSV output path (overrides output_path)");

    std::string cmp_a, cmp_b;
    CommonOpts cmp_opts;
    CLI::App* cmp_cmd = app.add_subcommand(
        "compare", "Run two scenarios differing only in control variant");
    cmp_cmd->add_option("first", cmp_a, "First scenario JSON file")->required();
    cmp_cmd->add_option("second", cmp_b, "Second scenario JSON file")->required();
    add_common(cmp_cmd, cmp_opts, "CSV output prefix for the pair");

    std::string sweep_config, sweep_param;
    std::vector<double> sweep_values;
    CommonOpts sweep_opts;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Sweep one parameter across values");
    sweep_cmd->add_option("config", sweep_config, "Scenario JSON file")->required();
    sweep_cmd->add_option("--param", sweep_param,
                          "Parameter: r, lambda, p0_scale, sigma2, magnitude, seed")->required();
    sweep_cmd->add_option("--values", sweep_values, "Values to sweep")
        ->required()->delimiter(',');
    add_common(sweep_cmd, sweep_opts, "Write the sweep table to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run_cmd->parsed()) return do_run(run_config, run_opts);
        if (cmp_cmd->parsed()) return do_compare(cmp_a, cmp_b, cmp_opts);
        if (sweep_cmd->parsed()) return do_sweep(sweep_config, sweep_param, sweep_values, sweep_opts);
    } catch (const stc::SimulationFault& e) {
        std::cerr << "simulation fault: " << e.what() << "\n";
        return 2;
    } catch (const stc::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
