#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "harvestlab/protocol.hpp"
#include "harvestlab/specfun.hpp"

namespace harvestlab::elements {

using cplx = std::complex<double>;

struct GeometryPair {
    double separation = 0.0;  // L = |x_I - x_J|
    double delay = 0.0;       // Delta = t_I - t_J
};

/// The nine second-order kernels for one scenario. All values carry the
/// lambda^2 prefactor; `scaled()` accessors divide it back out for
/// full-relative-precision downstream algebra.
struct MatrixElementSet {
    double lambda = 0.0;
    double L_AA = 0.0, L_BB = 0.0, L_CC = 0.0;
    cplx L_AB, L_AC, L_BC;
    cplx M_AB, M_AC, M_BC;

    double s_LAA() const { return L_AA / (lambda * lambda); }
    double s_LBB() const { return L_BB / (lambda * lambda); }
    double s_LCC() const { return L_CC / (lambda * lambda); }
    cplx s_LAB() const { return L_AB / (lambda * lambda); }
    cplx s_LAC() const { return L_AC / (lambda * lambda); }
    cplx s_LBC() const { return L_BC / (lambda * lambda); }
    cplx s_MAB() const { return M_AB / (lambda * lambda); }
    cplx s_MAC() const { return M_AC / (lambda * lambda); }
    cplx s_MBC() const { return M_BC / (lambda * lambda); }
};

/// Local excitation kernel, closed form:
///   lambda^2 (exp(-Omega^2) - sqrt(pi) Omega erfc(Omega)) / (8 pi^2).
double local_L(double gap, double lambda);

/// Same quantity through the defining momentum integral (cross-check path).
double local_L_quadrature(double gap, double lambda, double rel_tol = 1e-9);

/// Non-local L kernel via adaptive quadrature of
///   (lambda^2/(2 pi^2)) int_0^inf dk (k/2) e^{-(Omega+k)^2 + i(Omega+k)Delta} sinc(kL).
/// Authoritative evaluation; requires a common gap.
cplx nonlocal_L(double gapI, double gapJ, const GeometryPair& geom, double lambda,
                double rel_tol = 1e-9);

/// Closed form of the same kernel (dimensionally repaired), valid for L > 0:
///   -i lambda^2/(16 pi^{3/2} L) e^{-Omega^2 + i Omega Delta}
///       [ w((L+Delta)/2 + i Omega) - w((Delta-L)/2 + i Omega) ].
/// Cross-check only; L = 0 callers belong with nonlocal_L.
cplx nonlocal_L_closed(double gap, const GeometryPair& geom, double lambda);

/// Two-detector M kernel. Momentum-integral form with the phases written as
/// exp(+-ik Delta) (the exp(+-i Omega Delta) variant does not reproduce the
/// defining double time integral and diverges on the light cone L = |Delta|):
///   -(lambda^2/(8 pi^2)) e^{i Omega (tI+tJ)} int_0^inf dk k sinc(kL)
///     e^{-(Omega^2+k^2)} { e^{+ik Delta} erfc(Delta/2 + ik)
///                        + e^{-ik Delta} erfc(-Delta/2 + ik) }.
/// Evaluated as panels on [0, K] plus an analytic algebraic tail; at L = 0 the
/// integral only exists as a Hadamard finite part (the non-decaying constant
/// is subtracted), which is the documented definition there.
cplx M_element(double gap, double tI, double tJ, const GeometryPair& geom,
               double lambda, double rel_tol = 1e-9);

struct EvalOptions {
    double rel_tol = 1e-9;
};

/// Computes all nine kernels for a validated equal-gap scenario. Results are
/// cached keyed on rounded (kind, gap, geometry) at lambda = 1; safe for
/// concurrent use. Set HARVESTLAB_CACHE_DIR to persist the cache across runs.
MatrixElementSet element_set(const protocol::ScenarioConfig& cfg,
                             const EvalOptions& opts = {});

/// Clears the in-process cache (test hook).
void clear_element_cache();

}  // namespace harvestlab::elements
