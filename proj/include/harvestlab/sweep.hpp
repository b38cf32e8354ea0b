#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "harvestlab/negativity.hpp"
#include "harvestlab/protocol.hpp"

namespace harvestlab::sweep {

enum class FigureId { Fig2, Fig3, Fig5, Fig6like, Fig7, Fig8, Fig9 };

enum class Axis { Delta_AC, Delta_CA, Omega, Xi, Epsilon };

std::string to_string(FigureId f);
std::string to_string(Axis a);
FigureId figure_from_string(const std::string& s);
Axis axis_from_string(const std::string& s);

struct SweepSpec {
    protocol::ScenarioConfig scenario;
    Axis axis = Axis::Delta_AC;
    std::vector<double> grid;                  // strictly increasing, non-empty
    std::vector<protocol::Regime> regimes;     // evaluated at every grid point
    std::vector<double> xi_values;             // extra series for Transition figures
    std::vector<double> gap_list;              // figure's documented gap choices (metadata)
    std::string output_path;
};

struct RegimeValue {
    double value = 0.0;
    negativity::Method method = negativity::Method::ExactEigen;
};

struct SweepRecord {
    double axis_value = 0.0;
    // key: regime name, possibly suffixed "_xi<value>" for per-xi series
    std::map<std::string, RegimeValue> negativities;
    double prob_outcome = 1.0;
    std::string error;  // empty on success
};

/// Figure presets: geometry, gaps, regime, measurement, default grid.
SweepSpec preset(FigureId fig);

/// Applies one axis value to a scenario (and keeps measurement_time at
/// t_C + 5 when the axis moves detector C).
protocol::ScenarioConfig apply_axis(const protocol::ScenarioConfig& base, Axis axis,
                                    double value);

/// Evaluates one scenario under the requested regimes; elements are computed
/// once and shared.
SweepRecord run_scenario(const protocol::ScenarioConfig& cfg,
                         const std::vector<protocol::Regime>& regimes,
                         const std::vector<double>& xi_values = {},
                         double rel_tol = 1e-9);

struct SweepResult {
    std::vector<SweepRecord> records;
    std::vector<std::string> columns;  // negativity column keys, fixed order
    bool any_failed = false;
};

/// Runs the sweep over the grid with a bounded worker pool; record order and
/// CSV bytes are independent of the schedule.
SweepResult run_sweep(const SweepSpec& spec, int jobs = 1, double rel_tol = 1e-9);

/// Fixed-format CSV (12 significant digits, scientific); byte-stable.
std::string to_csv(const SweepResult& result);

SweepSpec spec_from_json(const std::string& text);
std::string spec_to_json(const SweepSpec& spec);
SweepSpec load_spec_file(const std::string& path);

}  // namespace harvestlab::sweep
