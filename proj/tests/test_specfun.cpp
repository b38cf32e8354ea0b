#include <doctest.h>

#include <cmath>
#include <complex>

#include "harvestlab/specfun.hpp"

using namespace harvestlab::specfun;
using namespace std::complex_literals;

namespace {

// deterministic point stream for property checks
struct SplitMix64 {
    uint64_t s;
    explicit SplitMix64(uint64_t seed) : s(seed) {}
    double uniform(double lo, double hi) {
        s += 0x9E3779B97F4A7C15ull;
        uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z ^= z >> 31;
        return lo + (hi - lo) * double(z >> 11) * (1.0 / 9007199254740992.0);
    }
};

}  // namespace

TEST_CASE("faddeeva basics") {
    CHECK(std::abs(faddeeva(0.0 + 0.0i) - 1.0) < 1e-14);
    // purely imaginary argument gives a real value exp(y^2) erfc(y)
    for (double y : {0.25, 1.0, 3.0, 7.5}) {
        const auto w = faddeeva(cplx(0.0, y));
        CHECK(std::abs(w.imag()) < 1e-13 * std::abs(w.real()));
        const double ref = std::exp(y * y) * std::erfc(y);
        CHECK(std::abs(w.real() - ref) < 1e-10 * ref);
    }
    CHECK_THROWS_AS(faddeeva(cplx(std::nan(""), 0.0)), std::domain_error);
}

TEST_CASE("faddeeva reflection identity") {
    SplitMix64 rng(42);
    for (int i = 0; i < 1000; ++i) {
        const double r = 10.0 * std::sqrt(rng.uniform(0.0, 1.0));
        const double th = rng.uniform(0.0, 2.0 * M_PI);
        const cplx z = r * std::exp(cplx(0.0, th));
        const cplx lhs = faddeeva(z) + faddeeva(-z);
        const cplx rhs = 2.0 * std::exp(-z * z);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("erf basics and symmetries") {
    CHECK(std::abs(erf_complex(0.0 + 0.0i)) < 1e-15);
    CHECK(std::abs(erf_complex(1.0 + 0.0i).real() - 0.84270079294971489) < 1e-9);
    CHECK(std::abs(erf_complex(1.0 + 0.0i).imag()) < 1e-15);
    SplitMix64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const cplx z(rng.uniform(-6.0, 6.0), rng.uniform(-6.0, 6.0));
        // oddness and conjugation symmetry
        CHECK(std::abs(erf_complex(-z) + erf_complex(z)) <=
              1e-9 * std::max(1.0, std::abs(erf_complex(z))));
        const cplx a = erf_complex(std::conj(z));
        const cplx b = std::conj(erf_complex(z));
        CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)));
    }
}

TEST_CASE("erfi consistency with erf") {
    CHECK(std::abs(erfi_complex(0.0 + 0.0i)) < 1e-15);
    // real on the real axis
    CHECK(std::abs(erfi_complex(1.75 + 0.0i).imag()) < 1e-12 * erfi_complex(1.75 + 0.0i).real());
    SplitMix64 rng(13);
    for (int i = 0; i < 500; ++i) {
        const cplx z(rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0));
        const cplx lhs = erfi_complex(z);
        const cplx iz(-z.imag(), z.real());
        const cplx e = erf_complex(iz);
        const cplx rhs(e.imag(), -e.real());
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
    }
    // erf(ix) = i erfi(x) for real x
    for (double x : {0.3, 1.2, 2.5}) {
        const cplx lhs = erf_complex(cplx(0.0, x));
        const cplx rhs = cplx(0.0, 1.0) * erfi_complex(cplx(x, 0.0));
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::abs(rhs));
    }
}

TEST_CASE("erfc_real identities") {
    CHECK(erfc_real(0.0) == 1.0);
    for (double x : {0.1, 0.7, 1.9, 3.3}) CHECK(std::abs(erfc_real(-x) - (2.0 - erfc_real(x))) < 1e-14);
    CHECK(std::abs(erfc_real(2.5) - 0.00040695201744495892) < 1e-12 * 4e-4);
}

TEST_CASE("quadrature: known integrals") {
    QuadOptions opts;
    opts.k_cut = 10.0;
    opts.rel_tol = 1e-10;
    // int_0^inf k exp(-k^2) = 1/2, tail beyond 10 is ~e^-100
    auto r1 = integrate_semi_infinite(
        [](double k) { return cplx(k * std::exp(-k * k), 0.0); }, opts);
    CHECK(std::abs(r1.value.real() - 0.5) < 1e-10);
    CHECK(std::abs(r1.value.imag()) <= r1.abs_error_estimate);
    CHECK(r1.evaluations >= 1);

    // sinc factor at L = 0 is 1: int exp(-k^2) = sqrt(pi)/2
    auto r2 = integrate_semi_infinite(
        [](double k) { return cplx(std::exp(-k * k), 0.0); }, opts);
    CHECK(std::abs(r2.value.real() - std::sqrt(M_PI) / 2.0) < 1e-10);
}

TEST_CASE("quadrature: linearity") {
    QuadOptions opts;
    opts.k_cut = 8.0;
    auto f = [](double k) { return cplx(std::exp(-k * k), 0.0); };
    auto g = [](double k) { return cplx(k * std::exp(-2.0 * k * k), std::sin(k) * std::exp(-k * k)); };
    auto rf = integrate_semi_infinite(f, opts);
    auto rg = integrate_semi_infinite(g, opts);
    auto rc = integrate_semi_infinite(
        [&](double k) { return 2.0 * f(k) - 3.0 * g(k); }, opts);
    const cplx expect = 2.0 * rf.value - 3.0 * rg.value;
    CHECK(std::abs(rc.value - expect) <=
          rc.abs_error_estimate + 2.0 * rf.abs_error_estimate + 3.0 * rg.abs_error_estimate + 1e-14);
}

TEST_CASE("quadrature: oscillation cap and error contract") {
    // sin(kL)/ (kL) envelopeexp(-k^2) with large L resolved by the panel cap
    const double L = 40.0;
    QuadOptions opts;
    opts.k_cut = 8.0;
    opts.max_panel_width = M_PI / (2.0 * L);
    auto r = integrate_semi_infinite(
        [L](double k) {
            const double x = k * L;
            const double sinc = x < 1e-8 ? 1.0 : std::sin(x) / x;
            return cplx(k * std::exp(-k * k) * sinc, 0.0);
        },
        opts);
    CHECK(r.abs_error_estimate < 1e-9);

    // panel budget exhaustion raises with the best estimate attached
    QuadOptions tight;
    tight.k_cut = 1.0;
    tight.rel_tol = 1e-13;
    tight.max_panels = 4;
    bool threw = false;
    try {
        integrate_semi_infinite([](double k) { return cplx(std::sqrt(std::abs(std::sin(200.0 * k))), 0.0); }, tight);
    } catch (const QuadratureError& e) {
        threw = true;
        CHECK(e.best.evaluations > 0);
        CHECK(e.best.abs_error_estimate > 0.0);
    }
    CHECK(threw);
}

TEST_CASE("quadrature: invalid options") {
    QuadOptions opts;
    opts.k_cut = 0.0;
    CHECK_THROWS_AS(integrate_semi_infinite([](double) { return cplx(0.0, 0.0); }, opts),
                    std::domain_error);
    opts.k_cut = 1.0;
    opts.rel_tol = 0.5;
    CHECK_THROWS_AS(integrate_semi_infinite([](double) { return cplx(0.0, 0.0); }, opts),
                    std::domain_error);
}
