#include "harvestlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "harvestlab/elements.hpp"
#include "harvestlab/states.hpp"

namespace harvestlab::sweep {

using protocol::MeasurementKind;
using protocol::Regime;
using protocol::ScenarioConfig;

std::string to_string(FigureId f) {
    switch (f) {
        case FigureId::Fig2: return "Fig2";
        case FigureId::Fig3: return "Fig3";
        case FigureId::Fig5: return "Fig5";
        case FigureId::Fig6like: return "Fig6like";
        case FigureId::Fig7: return "Fig7";
        case FigureId::Fig8: return "Fig8";
        case FigureId::Fig9: return "Fig9";
    }
    return "?";
}

std::string to_string(Axis a) {
    switch (a) {
        case Axis::Delta_AC: return "Delta_AC";
        case Axis::Delta_CA: return "Delta_CA";
        case Axis::Omega: return "Omega";
        case Axis::Xi: return "xi";
        case Axis::Epsilon: return "epsilon";
    }
    return "?";
}

FigureId figure_from_string(const std::string& s) {
    for (auto f : {FigureId::Fig2, FigureId::Fig3, FigureId::Fig5, FigureId::Fig6like,
                   FigureId::Fig7, FigureId::Fig8, FigureId::Fig9})
        if (to_string(f) == s) return f;
    throw std::runtime_error("unknown figure id: " + s);
}

Axis axis_from_string(const std::string& s) {
    for (auto a : {Axis::Delta_AC, Axis::Delta_CA, Axis::Omega, Axis::Xi, Axis::Epsilon})
        if (to_string(a) == s) return a;
    throw std::runtime_error("unknown axis: " + s);
}

namespace {

std::vector<double> arange(double lo, double hi, double step) {
    std::vector<double> g;
    for (int i = 0;; ++i) {
        const double v = lo + i * step;
        if (v > hi + 1e-9) break;
        g.push_back(v);
    }
    return g;
}

ScenarioConfig base_scenario(double gap, double lambda) {
    ScenarioConfig cfg;
    cfg.detA.gap = cfg.detB.gap = cfg.detC.gap = gap;
    cfg.coupling = lambda;
    return cfg;
}

}  // namespace

SweepSpec preset(FigureId fig) {
    constexpr double lambda = 0.01;
    SweepSpec s;
    switch (fig) {
        case FigureId::Fig2:
        case FigureId::Fig7: {
            const double gap = 2.5;
            s.scenario = base_scenario(gap, lambda);
            s.scenario.detB.position = {5.0, 0.0, 0.0};
            s.scenario.detC.position = {2.5, 0.0, 0.0};
            s.axis = Axis::Delta_AC;
            if (fig == FigureId::Fig2) {
                s.grid = arange(0.0, 20.0, 0.25);
                s.gap_list = {2.25, 2.5, 2.75, 3.0};
                s.scenario.measurement = {MeasurementKind::Selective, 0.0, 0.0, 5.0};
                s.regimes = {Regime::Baseline, Regime::Orthogonal};
            } else {
                s.grid = arange(0.25, 20.0, 0.25);
                s.gap_list = {gap};
                s.scenario.measurement = {MeasurementKind::Selective, lambda, 0.0, 5.0};
                s.regimes = {Regime::Baseline, Regime::Transition};
                s.xi_values = {0.0, M_PI / 2.0, M_PI, 1.5 * M_PI};
            }
            break;
        }
        case FigureId::Fig3: {
            s.scenario = base_scenario(5.0, lambda);
            s.scenario.detB.position = {10.0, 0.0, 0.0};
            s.scenario.detC.position = {5.0, 0.0, 0.0};
            s.axis = Axis::Delta_AC;
            // the far geometry decouples only algebraically; the sweep runs to
            // 40T so the asymptotic recovery is inside the window
            s.grid = arange(0.0, 40.0, 0.25);
            s.gap_list = {5.0, 5.25, 5.5, 5.75};
            s.scenario.measurement = {MeasurementKind::Selective, 0.0, 0.0, 5.0};
            s.regimes = {Regime::Baseline, Regime::Orthogonal};
            break;
        }
        case FigureId::Fig5: {
            s.scenario = base_scenario(2.5, lambda);
            s.scenario.detB.switch_peak = 5.0;  // Delta_BA = 5T
            s.axis = Axis::Delta_AC;
            s.grid = arange(0.25, 20.0, 0.25);
            s.gap_list = {2.0, 2.25, 2.5, 3.0};
            s.scenario.measurement = {MeasurementKind::Selective, 0.0, 0.0, 5.0};
            s.regimes = {Regime::Baseline, Regime::Orthogonal};
            break;
        }
        case FigureId::Fig6like: {
            s.scenario = base_scenario(2.5, lambda);
            s.scenario.detB.switch_peak = 5.0;
            s.axis = Axis::Delta_CA;
            s.grid = arange(0.25, 4.75, 0.25);
            s.gap_list = {1.5, 2.5};
            s.scenario.measurement = {MeasurementKind::Selective, 0.0, 0.0, 5.0};
            s.regimes = {Regime::Baseline, Regime::Orthogonal};
            break;
        }
        case FigureId::Fig8:
        case FigureId::Fig9: {
            s.scenario = base_scenario(2.5, lambda);
            s.scenario.detB.switch_peak = 5.0;
            s.axis = (fig == FigureId::Fig8) ? Axis::Delta_AC : Axis::Delta_CA;
            s.grid = (fig == FigureId::Fig8) ? arange(0.25, 20.0, 0.25)
                                             : arange(0.25, 4.75, 0.25);
            s.gap_list = {2.5};
            s.scenario.measurement = {MeasurementKind::Selective, lambda, 0.0, 5.0};
            s.regimes = {Regime::Baseline, Regime::Transition};
            s.xi_values = {0.0, M_PI / 2.0, M_PI, 1.5 * M_PI};
            break;
        }
    }
    return s;
}

ScenarioConfig apply_axis(const ScenarioConfig& base, Axis axis, double value) {
    ScenarioConfig cfg = base;
    switch (axis) {
        case Axis::Delta_AC:
            cfg.detC.switch_peak = cfg.detA.switch_peak - value;
            break;
        case Axis::Delta_CA:
            cfg.detC.switch_peak = cfg.detA.switch_peak + value;
            break;
        case Axis::Omega:
            cfg.detA.gap = cfg.detB.gap = cfg.detC.gap = value;
            break;
        case Axis::Xi:
            cfg.measurement.xi = value;
            break;
        case Axis::Epsilon:
            cfg.measurement.epsilon = value;
            break;
    }
    cfg.measurement.measurement_time = cfg.detC.switch_peak + 5.0;
    return cfg;
}

namespace {

std::string regime_key(Regime r, std::optional<double> xi) {
    std::string key = protocol::to_string(r);
    if (xi) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "_xi%.6g", *xi);
        key += buf;
    }
    return key;
}

std::string method_name(negativity::Method m) {
    switch (m) {
        case negativity::Method::ExactEigen: return "ExactEigen";
        case negativity::Method::PerturbativeGeneric: return "PerturbativeGeneric";
        case negativity::Method::PerturbativeBaseline: return "PerturbativeBaseline";
        case negativity::Method::PerturbativeTransition: return "PerturbativeTransition";
    }
    return "?";
}

RegimeValue evaluate_regime(const ScenarioConfig& cfg, const elements::MatrixElementSet& E,
                            Regime regime, std::optional<double> xi) {
    ScenarioConfig local = cfg;
    local.regime_override = regime;
    if (xi) local.measurement.xi = *xi;
    switch (regime) {
        case Regime::Baseline:
        case Regime::NonSelective:
            return {negativity::negativity_baseline(E), negativity::Method::PerturbativeBaseline};
        case Regime::Orthogonal: {
            const auto t = states::tilde_elements(E);
            return {negativity::negativity_orthogonal(t), negativity::Method::PerturbativeGeneric};
        }
        case Regime::Transition: {
            const auto state = states::assemble_state(local, E);
            const auto res = negativity::negativity_transition(
                state, E, local.measurement.epsilon, local.measurement.xi);
            return {res.value, negativity::Method::ExactEigen};
        }
        case Regime::NonOrthogonal: {
            const auto state = states::assemble_state(local, E);
            return {negativity::negativity_exact(state).value, negativity::Method::ExactEigen};
        }
    }
    throw std::logic_error("evaluate_regime: unreachable");
}

}  // namespace

SweepRecord run_scenario(const ScenarioConfig& cfg, const std::vector<Regime>& regimes,
                         const std::vector<double>& xi_values, double rel_tol) {
    SweepRecord rec;
    const auto errs = protocol::validate_scenario(cfg);
    if (!errs.empty()) {
        std::string msg = "invalid scenario:";
        for (const auto& e : errs) msg += " " + e + ";";
        throw std::invalid_argument(msg);
    }
    elements::EvalOptions opts;
    opts.rel_tol = rel_tol;
    const auto E = elements::element_set(cfg, opts);
    for (Regime r : regimes) {
        const bool per_xi = (r == Regime::Transition || r == Regime::NonOrthogonal) &&
                            !xi_values.empty();
        if (per_xi) {
            for (double xi : xi_values)
                rec.negativities[regime_key(r, xi)] = evaluate_regime(cfg, E, r, xi);
        } else {
            rec.negativities[regime_key(r, std::nullopt)] = evaluate_regime(cfg, E, r, std::nullopt);
        }
    }
    rec.prob_outcome = (cfg.measurement.kind == MeasurementKind::Selective)
                           ? states::outcome_probability(E, cfg.measurement.epsilon)
                           : 1.0;
    return rec;
}

SweepResult run_sweep(const SweepSpec& spec, int jobs, double rel_tol) {
    if (spec.grid.empty()) throw std::invalid_argument("run_sweep: empty grid");
    for (size_t i = 1; i < spec.grid.size(); ++i)
        if (!(spec.grid[i] > spec.grid[i - 1]))
            throw std::invalid_argument("run_sweep: grid must be strictly increasing");

    SweepResult out;
    out.records.resize(spec.grid.size());

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= spec.grid.size()) return;
            SweepRecord& rec = out.records[i];
            rec.axis_value = spec.grid[i];
            try {
                const auto cfg = apply_axis(spec.scenario, spec.axis, spec.grid[i]);
                auto r = run_scenario(cfg, spec.regimes, spec.xi_values, rel_tol);
                r.axis_value = spec.grid[i];
                rec = std::move(r);
            } catch (const std::exception& ex) {
                rec.error = ex.what();
            }
        }
    };
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(spec.grid.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(n));
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // fixed column order from the first successful record
    for (const auto& rec : out.records) {
        if (rec.error.empty()) {
            for (const auto& [k, v] : rec.negativities) out.columns.push_back(k);
            break;
        }
    }
    for (const auto& rec : out.records)
        if (!rec.error.empty()) out.any_failed = true;
    return out;
}

namespace {

std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", x);
    return buf;
}

}  // namespace

std::string to_csv(const SweepResult& result) {
    std::string out = "axis_value";
    for (const auto& c : result.columns) out += "," + c + "_value," + c + "_method";
    out += ",prob_outcome,error\n";
    for (const auto& rec : result.records) {
        out += fmt12(rec.axis_value);
        for (const auto& c : result.columns) {
            auto it = rec.negativities.find(c);
            if (it == rec.negativities.end()) {
                out += ",,";
            } else {
                out += "," + fmt12(it->second.value) + "," + method_name(it->second.method);
            }
        }
        out += "," + fmt12(rec.prob_outcome) + "," + rec.error + "\n";
    }
    return out;
}

SweepSpec spec_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    SweepSpec s;
    s.scenario = protocol::scenario_from_json(j.at("scenario").dump());
    s.axis = axis_from_string(j.at("axis").get<std::string>());
    s.grid = j.at("grid").get<std::vector<double>>();
    for (const auto& r : j.at("regimes"))
        s.regimes.push_back([&] {
            const std::string name = r.get<std::string>();
            for (auto reg : {Regime::NonOrthogonal, Regime::Orthogonal, Regime::Transition,
                             Regime::Baseline, Regime::NonSelective})
                if (protocol::to_string(reg) == name) return reg;
            throw std::runtime_error("unknown regime: " + name);
        }());
    if (j.contains("xi_values")) s.xi_values = j.at("xi_values").get<std::vector<double>>();
    if (j.contains("gap_list")) s.gap_list = j.at("gap_list").get<std::vector<double>>();
    s.output_path = j.value("output_path", std::string{});
    return s;
}

std::string spec_to_json(const SweepSpec& s) {
    nlohmann::json j;
    j["scenario"] = nlohmann::json::parse(protocol::scenario_to_json(s.scenario));
    j["axis"] = to_string(s.axis);
    j["grid"] = s.grid;
    std::vector<std::string> regs;
    for (auto r : s.regimes) regs.push_back(protocol::to_string(r));
    j["regimes"] = regs;
    j["xi_values"] = s.xi_values;
    j["gap_list"] = s.gap_list;
    j["output_path"] = s.output_path;
    return j.dump(2);
}

SweepSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sweep spec: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return spec_from_json(ss.str());
}

}  // namespace harvestlab::sweep
