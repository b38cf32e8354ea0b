#pragma once

#include <complex>
#include <functional>
#include <stdexcept>

namespace harvestlab::specfun {

using cplx = std::complex<double>;

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
///
/// Weideman rational approximation (N=64) for |z| < 6, Laplace continued
/// fraction for |z| >= 6, reflection w(z) = 2 exp(-z^2) - w(-z) for the lower
/// half plane. Relative error <= ~1e-13 for |z| <= 30 on the closed upper
/// half plane; on the lower half plane the value grows like exp(|z|^2) and
/// overflows past Im(z)^2 - Re(z)^2 > ~709.
cplx faddeeva(cplx z);

/// erf of a complex argument, via erf(z) = 1 - exp(-z^2) w(iz) with the odd
/// reflection applied first so the Faddeeva argument stays in the upper half
/// plane.
cplx erf_complex(cplx z);

/// erfi(z) = -i erf(iz).
cplx erfi_complex(cplx z);

/// Real erfc (thin wrapper, keeps the module the single entry point for the
/// error-function family).
double erfc_real(double x);

struct QuadratureResult {
    cplx value{};
    double abs_error_estimate = 0.0;
    long evaluations = 0;
};

/// Thrown when adaptive subdivision exhausts its panel budget; carries the
/// best estimate so callers can decide whether it is still usable.
struct QuadratureError : std::runtime_error {
    QuadratureResult best;
    explicit QuadratureError(const QuadratureResult& r)
        : std::runtime_error("quadrature did not converge"), best(r) {}
};

struct QuadOptions {
    double rel_tol = 1e-9;
    double k_cut = 0.0;              // upper end of the finite panel range, > 0
    double tail_bound = 0.0;         // analytic bound on the dropped tail, added to the error
    double max_panel_width = 0.0;    // 0 = no cap; use pi/(2L) style caps for oscillatory factors
    int max_panels = 4000;
};

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [0, k_cut].
///
/// The tail beyond k_cut is the caller's responsibility: pass an analytic
/// bound through opts.tail_bound (it is added to abs_error_estimate).
/// Deterministic: subdivision order depends only on the integrand values.
QuadratureResult integrate_semi_infinite(const std::function<cplx(double)>& f,
                                         const QuadOptions& opts);

}  // namespace harvestlab::specfun
