#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

#include "harvestlab/elements.hpp"
#include "harvestlab/protocol.hpp"

namespace harvestlab::states {

using cplx = std::complex<double>;
using Matrix4c = Eigen::Matrix4cd;

// Basis order everywhere: {|g_A g_B>, |g_A e_B>, |e_A g_B>, |e_A e_B>};
// row/column 1 (index 0) is the double ground state, row 2 (index 1) has B
// excited, row 3 (index 2) has A excited.

struct TwoQubitState {
    Matrix4c matrix = Matrix4c::Zero();
    protocol::Regime regime = protocol::Regime::Baseline;
};

/// Measurement-dressed kernels entering the orthogonal-regime state.
struct TildeElements {
    double Lt_AA = 0.0, Lt_BB = 0.0;
    cplx Lt_AB, Mt_AB;
};

/// Kernels entering the transition-regime state (denominator eps^2 + L_CC).
struct PrimedElements {
    cplx Lp_A, Lp_B;          // first-order entries, Theta(lambda)
    double Lp_AA = 0.0, Lp_BB = 0.0;
    cplx Lp_AB, Mp_AB;
};

/// Second-order two-detector block: diagonal (-L_AA-L_BB, L_BB, L_AA, 0),
/// L_AB at (3,2), M_AB at (4,1), Hermitian completion. Traceless.
Matrix4c rho2_block(const elements::MatrixElementSet& E);

/// Measurement cross block. The (A,C) terms sit in the A-excited slot
/// (3,1) with value eps sqrt(1-eps^2) (e^{+i xi} L_AC + e^{-i xi} M_AC),
/// the (B,C) terms in (2,1) analogously, plus the Hermitian conjugate.
/// Derived from the second-order cross terms; note the printed variants of
/// this block disagree among themselves on slot and phase pairing.
Matrix4c gamma_block(const elements::MatrixElementSet& E, double epsilon, double xi);

/// L_CC times the rho2-shaped block built from the tilde elements.
Matrix4c nu_block(const elements::MatrixElementSet& E);

TildeElements tilde_elements(const elements::MatrixElementSet& E);
PrimedElements primed_elements(const elements::MatrixElementSet& E, double epsilon,
                               double xi);

/// Assembles the post-measurement reduced state for the scenario's regime
/// (or regime_override). The (1,1) entry is repaired to 1 - sum of the other
/// diagonal entries so the trace is exactly 1.
TwoQubitState assemble_state(const protocol::ScenarioConfig& cfg,
                             const elements::MatrixElementSet& E);

/// Leading-order outcome probability eps^2 + L_CC (1 - 2 eps^2), clamped to [0,1].
double outcome_probability(const elements::MatrixElementSet& E, double epsilon);

/// Row-major "re,im" dump for cross-language comparison.
std::string dump_state(const Matrix4c& m);

}  // namespace harvestlab::states
