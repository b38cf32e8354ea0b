// harvestctl: figure presets, scenario runs, parameter sweeps and the
// acceptance suite for the detector-measurement harvesting simulator.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "harvestlab/acceptance.hpp"
#include "harvestlab/elements.hpp"
#include "harvestlab/negativity.hpp"
#include "harvestlab/protocol.hpp"
#include "harvestlab/states.hpp"
#include "harvestlab/sweep.hpp"

using namespace harvestlab;

namespace {

void write_or_print(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entanglement-harvesting measurement simulator"};
    app.require_subcommand(1);

    std::string out_path;
    double rel_tol = 1e-9;
    double lambda = -1.0;
    int jobs = 1;
    app.add_option("--out", out_path, "output file (default: stdout)");
    app.add_option("--rel-tol", rel_tol, "quadrature relative tolerance");
    app.add_option("--lambda", lambda, "override coupling strength");
    app.add_option("--jobs", jobs, "worker threads for sweeps");

    std::string fig_name;
    double preset_gap = -1.0;
    auto* cmd_preset = app.add_subcommand("preset", "emit a figure preset as a sweep spec");
    cmd_preset->add_option("figure", fig_name, "Fig2|Fig3|Fig5|Fig6like|Fig7|Fig8|Fig9")
        ->required();
    cmd_preset->add_option("--gap", preset_gap, "override the detector gap");

    std::string scenario_path;
    auto* cmd_run = app.add_subcommand("run", "evaluate one scenario file");
    cmd_run->add_option("scenario", scenario_path, "scenario JSON file")->required();

    std::string spec_path;
    auto* cmd_sweep = app.add_subcommand("sweep", "run a sweep spec, emit CSV");
    cmd_sweep->add_option("spec", spec_path, "sweep spec JSON file")->required();

    std::string suite;
    auto* cmd_accept = app.add_subcommand("accept", "run the acceptance criteria");
    cmd_accept->add_option("suite", suite, "criterion id or suite name (default: all)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_preset) {
            auto spec = sweep::preset(sweep::figure_from_string(fig_name));
            if (preset_gap > 0.0)
                spec.scenario.detA.gap = spec.scenario.detB.gap = spec.scenario.detC.gap =
                    preset_gap;
            if (lambda > 0.0) spec.scenario.coupling = lambda;
            spec.output_path = out_path;
            write_or_print(sweep::spec_to_json(spec) + "\n", out_path);
            return 0;
        }
        if (*cmd_run) {
            auto cfg = protocol::load_scenario_file(scenario_path);
            if (lambda > 0.0) cfg.coupling = lambda;
            const auto errs = protocol::validate_scenario(cfg);
            if (!errs.empty()) {
                for (const auto& e : errs) std::cerr << "invalid scenario: " << e << "\n";
                return 2;
            }
            const auto regime = protocol::scenario_regime(cfg);
            const auto rec = sweep::run_scenario(cfg, {protocol::Regime::Baseline, regime},
                                                 {}, rel_tol);
            std::string text = "regime: " + protocol::to_string(regime) + "\n";
            for (const auto& [k, v] : rec.negativities) {
                char buf[128];
                std::snprintf(buf, sizeof buf, "%s: %.11e\n", k.c_str(), v.value);
                text += buf;
            }
            char buf[64];
            std::snprintf(buf, sizeof buf, "prob_outcome: %.11e\n", rec.prob_outcome);
            text += buf;
            write_or_print(text, out_path);
            return 0;
        }
        if (*cmd_sweep) {
            auto spec = sweep::load_spec_file(spec_path);
            if (lambda > 0.0) spec.scenario.coupling = lambda;
            if (!out_path.empty()) spec.output_path = out_path;
            const auto result = sweep::run_sweep(spec, jobs, rel_tol);
            write_or_print(sweep::to_csv(result), spec.output_path);
            return result.any_failed ? 3 : 0;
        }
        if (*cmd_accept) {
            const auto results = acceptance::run_criteria(suite);
            if (results.empty()) {
                std::cerr << "no criterion matches '" << suite << "'\n";
                return 2;
            }
            bool all = true;
            std::string text;
            for (const auto& r : results) {
                text += acceptance::format_result(r);
                all = all && r.pass;
            }
            text += all ? "acceptance: PASS\n" : "acceptance: FAIL\n";
            write_or_print(text, out_path);
            return all ? 0 : 1;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
