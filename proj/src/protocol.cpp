#include "harvestlab/protocol.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace harvestlab::protocol {

using nlohmann::json;

std::string to_string(Regime r) {
    switch (r) {
        case Regime::NonOrthogonal: return "NonOrthogonal";
        case Regime::Orthogonal: return "Orthogonal";
        case Regime::Transition: return "Transition";
        case Regime::Baseline: return "Baseline";
        case Regime::NonSelective: return "NonSelective";
    }
    return "?";
}

std::string to_string(MeasurementKind k) {
    switch (k) {
        case MeasurementKind::None: return "None";
        case MeasurementKind::Selective: return "Selective";
        case MeasurementKind::NonSelective: return "NonSelective";
    }
    return "?";
}

Regime classify_regime(double epsilon, double lambda) {
    if (!(lambda > 0.0) || lambda >= 1.0)
        throw std::domain_error("classify_regime: lambda must lie in (0,1)");
    if (!(epsilon >= 0.0) || epsilon > 1.0)
        throw std::domain_error("classify_regime: epsilon must lie in [0,1]");
    if (epsilon >= std::sqrt(lambda)) return Regime::NonOrthogonal;
    if (epsilon <= std::pow(lambda, 1.5)) return Regime::Orthogonal;
    return Regime::Transition;
}

Regime scenario_regime(const ScenarioConfig& cfg) {
    if (cfg.regime_override) return *cfg.regime_override;
    switch (cfg.measurement.kind) {
        case MeasurementKind::None: return Regime::Baseline;
        case MeasurementKind::NonSelective: return Regime::NonSelective;
        case MeasurementKind::Selective:
            return classify_regime(cfg.measurement.epsilon, cfg.coupling);
    }
    return Regime::Baseline;
}

namespace {

bool finite(double x) { return std::isfinite(x); }

void check_detector(const DetectorParams& d, const char* name,
                    std::vector<std::string>& errs) {
    if (!finite(d.gap) || !finite(d.switch_peak) || !finite(d.position[0]) ||
        !finite(d.position[1]) || !finite(d.position[2]))
        errs.push_back(std::string(name) + ": all fields must be finite");
    if (d.gap < 0.0) errs.push_back(std::string(name) + ": gap must be >= 0");
}

}  // namespace

std::vector<std::string> validate_scenario(const ScenarioConfig& cfg) {
    std::vector<std::string> errs;
    check_detector(cfg.detA, "detA", errs);
    check_detector(cfg.detB, "detB", errs);
    check_detector(cfg.detC, "detC", errs);
    if (!(cfg.coupling > 0.0))
        errs.push_back("coupling must be positive");
    else if (cfg.coupling > 0.3)
        errs.push_back("coupling must be <= 0.3");
    const auto& m = cfg.measurement;
    if (m.kind == MeasurementKind::Selective) {
        if (!(m.epsilon >= 0.0 && m.epsilon <= 1.0))
            errs.push_back("measurement.epsilon must lie in [0,1]");
        if (!(m.xi >= 0.0 && m.xi < 2.0 * M_PI))
            errs.push_back("measurement.xi must lie in [0, 2pi)");
    }
    if (m.kind != MeasurementKind::None) {
        if (m.measurement_time < cfg.detC.switch_peak + 5.0)
            errs.push_back(
                "measurement_time must be >= detC.switch_peak + 5 (detector C is only "
                "effectively decoupled 5T after its switching peak)");
    }
    return errs;
}

double distance(const DetectorParams& a, const DetectorParams& b) {
    const double dx = a.position[0] - b.position[0];
    const double dy = a.position[1] - b.position[1];
    const double dz = a.position[2] - b.position[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

namespace {

MeasurementKind kind_from_string(const std::string& s) {
    if (s == "None") return MeasurementKind::None;
    if (s == "Selective") return MeasurementKind::Selective;
    if (s == "NonSelective") return MeasurementKind::NonSelective;
    throw std::runtime_error("unknown measurement kind: " + s);
}

Regime regime_from_string(const std::string& s) {
    if (s == "NonOrthogonal") return Regime::NonOrthogonal;
    if (s == "Orthogonal") return Regime::Orthogonal;
    if (s == "Transition") return Regime::Transition;
    if (s == "Baseline") return Regime::Baseline;
    if (s == "NonSelective") return Regime::NonSelective;
    throw std::runtime_error("unknown regime: " + s);
}

json det_to_json(const DetectorParams& d) {
    return json{{"gap", d.gap},
                {"position", {d.position[0], d.position[1], d.position[2]}},
                {"switch_peak", d.switch_peak}};
}

DetectorParams det_from_json(const json& j) {
    DetectorParams d;
    d.gap = j.at("gap").get<double>();
    const auto& p = j.at("position");
    d.position = {p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()};
    d.switch_peak = j.at("switch_peak").get<double>();
    return d;
}

}  // namespace

ScenarioConfig scenario_from_json(const std::string& text) {
    const json j = json::parse(text);
    ScenarioConfig cfg;
    cfg.detA = det_from_json(j.at("detA"));
    cfg.detB = det_from_json(j.at("detB"));
    cfg.detC = det_from_json(j.at("detC"));
    cfg.coupling = j.at("coupling").get<double>();
    const auto& m = j.at("measurement");
    cfg.measurement.kind = kind_from_string(m.at("kind").get<std::string>());
    cfg.measurement.epsilon = m.value("epsilon", 0.0);
    cfg.measurement.xi = m.value("xi", 0.0);
    cfg.measurement.measurement_time = m.value("measurement_time", 0.0);
    if (j.contains("regime_override") && !j.at("regime_override").is_null())
        cfg.regime_override = regime_from_string(j.at("regime_override").get<std::string>());
    return cfg;
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
    json j;
    j["detA"] = det_to_json(cfg.detA);
    j["detB"] = det_to_json(cfg.detB);
    j["detC"] = det_to_json(cfg.detC);
    j["coupling"] = cfg.coupling;
    j["measurement"] = json{{"kind", to_string(cfg.measurement.kind)},
                            {"epsilon", cfg.measurement.epsilon},
                            {"xi", cfg.measurement.xi},
                            {"measurement_time", cfg.measurement.measurement_time}};
    if (cfg.regime_override)
        j["regime_override"] = to_string(*cfg.regime_override);
    else
        j["regime_override"] = nullptr;
    return j.dump(2);
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return scenario_from_json(ss.str());
}

}  // namespace harvestlab::protocol
