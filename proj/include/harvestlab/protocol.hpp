#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace harvestlab::protocol {

// All quantities are expressed in natural units with the switching width
// T = 1: gaps in 1/T, positions and times in T, coupling dimensionless.

struct DetectorParams {
    double gap = 0.0;                       // Omega
    std::array<double, 3> position{};       // x
    double switch_peak = 0.0;               // t_I
};

enum class MeasurementKind { None, Selective, NonSelective };

struct MeasurementSpec {
    MeasurementKind kind = MeasurementKind::None;
    double epsilon = 0.0;       // |<s|g_C>|, meaningful for Selective
    double xi = 0.0;            // phase of the excited component, in [0, 2pi)
    double measurement_time = 0.0;  // t0, must be >= t_C + 5
};

enum class Regime { NonOrthogonal, Orthogonal, Transition, Baseline, NonSelective };

std::string to_string(Regime r);
std::string to_string(MeasurementKind k);

struct ScenarioConfig {
    DetectorParams detA, detB, detC;
    double coupling = 0.01;     // lambda
    MeasurementSpec measurement;
    std::optional<Regime> regime_override;
};

/// Point-wise regime dispatch: NonOrthogonal for eps >= sqrt(lambda),
/// Orthogonal for eps <= lambda^(3/2), Transition in between. Boundary
/// points belong to the adjacent non-transition regime.
Regime classify_regime(double epsilon, double lambda);

/// Regime of a full scenario: Baseline / NonSelective for the corresponding
/// measurement kinds, classify_regime(eps, lambda) otherwise, unless
/// regime_override is set.
Regime scenario_regime(const ScenarioConfig& cfg);

/// Returns the complete list of invariant violations; empty means valid.
std::vector<std::string> validate_scenario(const ScenarioConfig& cfg);

/// JSON scenario files mirror ScenarioConfig field for field.
ScenarioConfig scenario_from_json(const std::string& text);
std::string scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig load_scenario_file(const std::string& path);

double distance(const DetectorParams& a, const DetectorParams& b);

}  // namespace harvestlab::protocol
