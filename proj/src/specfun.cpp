#include "harvestlab/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace harvestlab::specfun {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

// Weideman rational approximation coefficients, computed once from the
// shifted DFT of exp(-t^2)(L^2+t^2) on the tan(theta/2) grid.
struct WeidemanTable {
    static constexpr int N = 64;
    double L = 0.0;
    std::array<double, N> b{};  // b[n] multiplies Z^n

    WeidemanTable() {
        const int M = 2 * N;       // 128
        const int M2 = 2 * M;      // 256
        L = std::sqrt(N / std::sqrt(2.0));
        std::vector<double> f(M2, 0.0);
        // f[0] = 0 (theta = -pi); f[j] for k = -M+1..M-1
        for (int j = 1; j < M2; ++j) {
            const int k = j - M;  // -M+1 .. M-1
            const double theta = k * M_PI / M;
            const double t = L * std::tan(0.5 * theta);
            f[j] = std::exp(-t * t) * (L * L + t * t);
        }
        // fftshift for even length: swap halves
        std::vector<double> x(M2);
        for (int j = 0; j < M2; ++j) x[j] = f[(j + M) % M2];
        // direct DFT, real part of bins 1..N
        for (int n = 1; n <= N; ++n) {
            double acc = 0.0;
            for (int m = 0; m < M2; ++m)
                acc += x[m] * std::cos(2.0 * M_PI * n * m / M2);
            b[n - 1] = acc / M2;
        }
    }
};

const WeidemanTable& weideman() {
    static const WeidemanTable table;
    return table;
}

// valid on the closed upper half plane
cplx faddeeva_upper(cplx z) {
    const double az2 = std::norm(z);
    if (az2 >= 36.0) {
        // Laplace continued fraction, evaluated bottom-up
        cplx r(0.0, 0.0);
        for (int n = 32; n >= 1; --n) r = (0.5 * n) / (z - r);
        return cplx(0.0, 1.0) / (kSqrtPi * (z - r));
    }
    const auto& w = weideman();
    const cplx iz(-z.imag(), z.real());
    const cplx d = w.L - iz;
    const cplx Z = (w.L + iz) / d;
    cplx p(0.0, 0.0);
    for (int n = WeidemanTable::N - 1; n >= 0; --n) p = p * Z + w.b[n];
    return 2.0 * p / (d * d) + cplx(1.0 / kSqrtPi, 0.0) / d;
}

}  // namespace

cplx faddeeva(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::domain_error("faddeeva: non-finite argument");
    if (z.imag() >= 0.0) return faddeeva_upper(z);
    return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
}

cplx erf_complex(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::domain_error("erf_complex: non-finite argument");
    if (z.real() < 0.0) return -erf_complex(-z);
    // Re z >= 0: w(iz) has Im(iz) = Re(z) >= 0
    const cplx iz(-z.imag(), z.real());
    return 1.0 - std::exp(-z * z) * faddeeva_upper(iz);
}

cplx erfi_complex(cplx z) {
    const cplx iz(-z.imag(), z.real());
    const cplx e = erf_complex(iz);
    return cplx(e.imag(), -e.real());  // -i * erf(iz)
}

double erfc_real(double x) {
    if (!std::isfinite(x)) throw std::domain_error("erfc_real: non-finite argument");
    return std::erfc(x);
}

namespace {

// 15-point Kronrod nodes on [-1,1] (positive half) and weights; the embedded
// 7-point Gauss rule uses the odd-index nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    cplx value;
    double err;
    long id;
};

void gk15(const std::function<cplx(double)>& f, double a, double b,
          cplx& value, double& err, long& evals) {
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    cplx resk(0.0, 0.0), resg(0.0, 0.0);
    for (int j = 0; j < 8; ++j) {
        const double dx = h * kXgk[j];
        cplx fsum;
        if (j == 7) {
            fsum = f(c);
            evals += 1;
        } else {
            fsum = f(c - dx) + f(c + dx);
            evals += 2;
        }
        resk += kWgk[j] * fsum;
        if (j == 1 || j == 3 || j == 5) resg += kWg[j / 2] * fsum;
        else if (j == 7) resg += kWg[3] * fsum;
    }
    value = resk * h;
    err = std::abs((resk - resg) * h);
}

}  // namespace

QuadratureResult integrate_semi_infinite(const std::function<cplx(double)>& f,
                                         const QuadOptions& opts) {
    if (!(opts.k_cut > 0.0)) throw std::domain_error("integrate_semi_infinite: k_cut must be > 0");
    if (!(opts.rel_tol > 1e-14 && opts.rel_tol < 1e-2))
        throw std::domain_error("integrate_semi_infinite: rel_tol out of range");

    double width = opts.k_cut;
    int n0 = 1;
    if (opts.max_panel_width > 0.0)
        n0 = std::max(1, static_cast<int>(std::ceil(opts.k_cut / opts.max_panel_width)));
    n0 = std::min(n0, opts.max_panels);
    width = opts.k_cut / n0;

    auto cmp = [](const Panel& p, const Panel& q) {
        if (p.err != q.err) return p.err < q.err;
        return p.id > q.id;
    };
    std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);

    long evals = 0;
    long next_id = 0;
    cplx total(0.0, 0.0);
    double toterr = 0.0;
    for (int i = 0; i < n0; ++i) {
        Panel p{i * width, (i + 1) * width, {}, 0.0, next_id++};
        if (i == n0 - 1) p.b = opts.k_cut;
        gk15(f, p.a, p.b, p.value, p.err, evals);
        total += p.value;
        toterr += p.err;
        heap.push(p);
    }

    int panels = n0;
    while (toterr + opts.tail_bound >
               opts.rel_tol * std::max(std::abs(total), 1e-300) &&
           toterr > 1e-300) {
        if (panels >= opts.max_panels) {
            QuadratureResult best{total, toterr + opts.tail_bound, std::max(evals, 1L)};
            throw QuadratureError(best);
        }
        Panel p = heap.top();
        heap.pop();
        const double mid = 0.5 * (p.a + p.b);
        Panel l{p.a, mid, {}, 0.0, next_id++};
        Panel r{mid, p.b, {}, 0.0, next_id++};
        gk15(f, l.a, l.b, l.value, l.err, evals);
        gk15(f, r.a, r.b, r.value, r.err, evals);
        total += l.value + r.value - p.value;
        toterr += l.err + r.err - p.err;
        heap.push(l);
        heap.push(r);
        ++panels;
    }

    // re-sum panel contributions in interval order for a deterministic,
    // well-conditioned final value
    std::vector<Panel> all;
    all.reserve(static_cast<size_t>(panels));
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& p, const Panel& q) { return p.a < q.a; });
    cplx sum(0.0, 0.0);
    double errsum = 0.0;
    for (const auto& p : all) {
        sum += p.value;
        errsum += p.err;
    }
    return {sum, errsum + opts.tail_bound, std::max(evals, 1L)};
}

}  // namespace harvestlab::specfun
