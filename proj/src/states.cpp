#include "harvestlab/states.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace harvestlab::states {

using elements::MatrixElementSet;
using protocol::Regime;

Matrix4c rho2_block(const MatrixElementSet& E) {
    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = -E.L_AA - E.L_BB;
    m(1, 1) = E.L_BB;
    m(2, 2) = E.L_AA;
    m(2, 1) = E.L_AB;
    m(1, 2) = std::conj(E.L_AB);
    m(3, 0) = E.M_AB;
    m(0, 3) = std::conj(E.M_AB);
    return m;
}

Matrix4c gamma_block(const MatrixElementSet& E, double epsilon, double xi) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::domain_error("gamma_block: epsilon must lie in [0,1]");
    Matrix4c m = Matrix4c::Zero();
    const double pref = epsilon * std::sqrt(std::max(0.0, 1.0 - epsilon * epsilon));
    const cplx ep = std::exp(cplx(0.0, xi));
    const cplx em = std::exp(cplx(0.0, -xi));
    m(2, 0) = pref * (ep * E.L_AC + em * E.M_AC);
    m(1, 0) = pref * (ep * E.L_BC + em * E.M_BC);
    m(0, 2) = std::conj(m(2, 0));
    m(0, 1) = std::conj(m(1, 0));
    return m;
}

Matrix4c nu_block(const MatrixElementSet& E) {
    if (!(E.L_CC > 0.0)) throw std::domain_error("nu_block: L_CC must be > 0");
    const TildeElements t = tilde_elements(E);
    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = -t.Lt_AA - t.Lt_BB;
    m(1, 1) = t.Lt_BB;
    m(2, 2) = t.Lt_AA;
    m(2, 1) = t.Lt_AB;
    m(1, 2) = std::conj(t.Lt_AB);
    m(3, 0) = t.Mt_AB;
    m(0, 3) = std::conj(t.Mt_AB);
    return E.L_CC * m;
}

TildeElements tilde_elements(const MatrixElementSet& E) {
    if (!(E.L_CC > 0.0)) throw std::domain_error("tilde_elements: L_CC must be > 0");
    TildeElements t;
    t.Lt_AA = E.L_AA + (std::norm(E.L_AC) + std::norm(E.M_AC)) / E.L_CC;
    t.Lt_BB = E.L_BB + (std::norm(E.L_BC) + std::norm(E.M_BC)) / E.L_CC;
    t.Lt_AB = E.L_AB + (E.L_AC * std::conj(E.L_BC) + E.M_AC * std::conj(E.M_BC)) / E.L_CC;
    t.Mt_AB = E.M_AB + (E.L_AC * E.M_BC + E.L_BC * E.M_AC) / E.L_CC;
    return t;
}

PrimedElements primed_elements(const MatrixElementSet& E, double epsilon, double xi) {
    const double den = epsilon * epsilon + E.L_CC;
    if (!(den > 0.0)) throw std::domain_error("primed_elements: eps^2 + L_CC must be > 0");
    PrimedElements p;
    const cplx ep = std::exp(cplx(0.0, xi));
    const cplx em = std::exp(cplx(0.0, -xi));
    p.Lp_A = epsilon / den * (em * std::conj(E.M_AC) + ep * std::conj(E.L_AC));
    p.Lp_B = epsilon / den * (em * std::conj(E.M_BC) + ep * std::conj(E.L_BC));
    p.Lp_AA = E.L_AA + (std::norm(E.L_AC) + std::norm(E.M_AC)) / den;
    p.Lp_BB = E.L_BB + (std::norm(E.L_BC) + std::norm(E.M_BC)) / den;
    p.Lp_AB = E.L_AB + (E.L_AC * std::conj(E.L_BC) + E.M_AC * std::conj(E.M_BC)) / den;
    p.Mp_AB = E.M_AB + (E.L_AC * E.M_BC + E.L_BC * E.M_AC) / den;
    return p;
}

namespace {

Matrix4c rho0() {
    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = 1.0;
    return m;
}

void repair_trace(Matrix4c& m) {
    m(0, 0) = 1.0 - (m(1, 1) + m(2, 2) + m(3, 3)).real();
}

}  // namespace

TwoQubitState assemble_state(const protocol::ScenarioConfig& cfg,
                             const MatrixElementSet& E) {
    const Regime regime = protocol::scenario_regime(cfg);
    const double eps = cfg.measurement.epsilon;
    const double xi = cfg.measurement.xi;

    // sanity: an override may force any formula, but without one the
    // parameters must actually sit in the requested regime
    if (!cfg.regime_override && cfg.measurement.kind == protocol::MeasurementKind::Selective) {
        const Regime natural = protocol::classify_regime(eps, cfg.coupling);
        if (natural != regime)
            throw std::logic_error("assemble_state: inconsistent regime dispatch");
    }

    Matrix4c m;
    switch (regime) {
        case Regime::Baseline:
        case Regime::NonSelective:
            m = rho0() + rho2_block(E);
            break;
        case Regime::NonOrthogonal: {
            if (!(eps > 0.0))
                throw std::domain_error("assemble_state: non-orthogonal regime needs eps > 0");
            const Matrix4c g = gamma_block(E, eps, xi);
            const double e2 = eps * eps;
            m = rho0() + rho2_block(E) + g / e2 - (E.L_CC / (e2 * e2)) * g;
            break;
        }
        case Regime::Orthogonal: {
            if (!(E.L_CC > 0.0))
                throw std::domain_error("assemble_state: orthogonal regime needs L_CC > 0");
            m = rho0() + (gamma_block(E, eps, xi) + nu_block(E)) / E.L_CC;
            break;
        }
        case Regime::Transition: {
            const double den = eps * eps + E.L_CC;
            if (!(den > 0.0))
                throw std::domain_error("assemble_state: transition regime needs eps^2 + L_CC > 0");
            m = rho0() +
                (gamma_block(E, eps, xi) + nu_block(E) + eps * eps * rho2_block(E)) / den;
            break;
        }
    }
    repair_trace(m);
    return {m, regime};
}

double outcome_probability(const MatrixElementSet& E, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::domain_error("outcome_probability: epsilon must lie in [0,1]");
    const double p = epsilon * epsilon + E.L_CC * (1.0 - 2.0 * epsilon * epsilon);
    return std::min(1.0, std::max(0.0, p));
}

std::string dump_state(const Matrix4c& m) {
    std::string out;
    char buf[64];
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", m(i, j).real(), m(i, j).imag());
            out += buf;
            out += (j == 3) ? '\n' : ' ';
        }
    }
    return out;
}

}  // namespace harvestlab::states
