// shockspec: spectral stability of piecewise-linear viscous shocks.
//
// Subcommands:
//   analyze       stability report for a model file
//   scan          sweep a scenario family over s or eps, CSV output
//   oracle-check  smoothing-oracle convergence fit of the jump relation
//   scenario      emit scenario/model fixture files
//
// Exit codes: 0 stable/pass, 2 unstable, 3 marginal or out-of-band fit,
// 64 bad input, 65 overlapping mollifier layers.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "shockspec/cli.hpp"

using namespace shockspec;

int main(int argc, char** argv) {
    CLI::App app{"spectral stability of piecewise-linear viscous shocks"};
    app.require_subcommand(1);

    RunConfig cfg;

    CLI::App* analyze = app.add_subcommand("analyze", "stability report for a model file");
    analyze->add_option("--model", cfg.model_path, "model JSON file")->required();
    analyze->add_option("--delta", cfg.delta, "left edge of the search window (default 1e-4)");
    double radius_opt = 0;
    CLI::Option* radius_flag =
        analyze->add_option("--radius", radius_opt, "search radius (default: adaptive)");
    analyze->add_option("--out", cfg.out_path, "report JSON path")->required();

    CLI::App* scan = app.add_subcommand("scan", "sweep a scenario family");
    scan->add_option("--scenario", cfg.scenario, "builtin name or scenario JSON path")->required();
    scan->add_option("--var", cfg.var, "scan variable: s | eps")->required();
    scan->add_option("--grid", cfg.grid, "start:stop:steps[:log]")->required();
    scan->add_option("--delta", cfg.delta, "left edge of the search window");
    CLI::Option* scan_radius = scan->add_option("--radius", radius_opt, "search radius");
    scan->add_option("--seed", cfg.seed, "seed stamped into the report hash");
    scan->add_option("--out", cfg.out_path, "CSV output path")->required();

    CLI::App* oracle = app.add_subcommand("oracle-check", "jump-relation convergence fit");
    oracle->add_option("--model", cfg.model_path, "model JSON file")->required();
    oracle->add_option("--crossing", cfg.crossing, "crossing index (default 0)");
    oracle->add_option("--mu", cfg.mu_grid, "mollifier widths (default 1e-2 1e-3 1e-4)");
    oracle->add_option("--out", cfg.out_path, "report JSON path")->required();

    CLI::App* scenario = app.add_subcommand("scenario", "emit fixture files");
    scenario->add_option("--name", cfg.scenario, "builtin scenario name")->required();
    scenario->add_option("--out", cfg.out_path, "scenario JSON path")->required();
    scenario->add_option("--model-out", cfg.model_out, "also write the instance model file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    try {
        if (*radius_flag || *scan_radius) cfg.radius = radius_opt;
        if (analyze->parsed()) {
            cfg.command = "analyze";
            return run_analyze(cfg);
        }
        if (scan->parsed()) {
            cfg.command = "scan";
            return run_scan(cfg);
        }
        if (oracle->parsed()) {
            cfg.command = "oracle-check";
            return run_oracle_check(cfg);
        }
        cfg.command = "scenario";
        return run_scenario(cfg);
    } catch (const LayerOverlapError& e) {
        std::fprintf(stderr, "shockspec: %s\n", e.what());
        return 65;
    } catch (const Error& e) {
        std::fprintf(stderr, "shockspec: %s\n", e.what());
        return 64;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "shockspec: internal error: %s\n", e.what());
        return 70;
    }
}
