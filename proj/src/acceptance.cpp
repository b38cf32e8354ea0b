#include "harvestlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdarg>
#include <functional>
#include <vector>

#include "harvestlab/elements.hpp"
#include "harvestlab/negativity.hpp"
#include "harvestlab/protocol.hpp"
#include "harvestlab/states.hpp"
#include "harvestlab/sweep.hpp"

namespace harvestlab::acceptance {

using cplx = std::complex<double>;
using elements::GeometryPair;
using elements::MatrixElementSet;
using protocol::MeasurementKind;
using protocol::Regime;
using protocol::ScenarioConfig;
using sweep::Axis;
using sweep::FigureId;

namespace {

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

struct Ctx {
    CriterionResult* r = nullptr;
    void check(bool ok, const std::string& text) {
        r->lines.push_back({text, ok});
        if (!ok) r->pass = false;
    }
    void info(const std::string& text) { r->lines.push_back({"(info) " + text, true}); }
};

MatrixElementSet elements_at(const sweep::SweepSpec& spec, double gap, double axis_value,
                             double epsilon = -1.0) {
    ScenarioConfig cfg = sweep::apply_axis(spec.scenario, spec.axis, axis_value);
    cfg.detA.gap = cfg.detB.gap = cfg.detC.gap = gap;
    if (epsilon >= 0.0) cfg.measurement.epsilon = epsilon;
    return elements::element_set(cfg);
}

// splitmix64, the seeded generator for the random element suites
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * double(next() >> 11) * (1.0 / 9007199254740992.0);
    }
};

// ---------------------------------------------------------------- AC1
void ac1(Ctx& c) {
    for (double gap : {0.0, 0.1, 1.0, 2.5, 5.0}) {
        const double closed = elements::local_L(gap, 1.0);
        const double quad = elements::local_L_quadrature(gap, 1.0);
        const double rel = std::abs(closed - quad) / std::abs(quad);
        c.check(rel <= 1e-8, fmt("local_L gap=%.1f: closed vs quadrature rel=%.2e (<=1e-8)",
                                 gap, rel));
    }
}

// ---------------------------------------------------------------- AC2
void ac2(Ctx& c) {
    double worst = 0.0;
    for (double gap : {1.0, 2.5, 5.0})
        for (double L : {1.0, 2.5, 5.0, 10.0})
            for (double D : {0.0, 2.5, 5.0, 10.0}) {
                const GeometryPair g{L, D};
                const cplx q = elements::nonlocal_L(gap, gap, g, 1.0);
                const cplx cl = elements::nonlocal_L_closed(gap, g, 1.0);
                worst = std::max(worst, std::abs(q - cl) / std::abs(q));
            }
    c.check(worst <= 1e-7,
            fmt("nonlocal_L closed form vs quadrature on 48-point grid: max rel=%.2e (<=1e-7)",
                worst));
}

// ---------------------------------------------------------------- AC3
void ac3(Ctx& c) {
    for (auto fig : {FigureId::Fig2, FigureId::Fig3, FigureId::Fig5, FigureId::Fig6like,
                     FigureId::Fig7, FigureId::Fig8, FigureId::Fig9}) {
        auto spec = sweep::preset(fig);
        const double mid = spec.grid[spec.grid.size() / 2];
        ScenarioConfig cfg = sweep::apply_axis(spec.scenario, spec.axis, mid);
        const auto E = elements::element_set(cfg);
        ScenarioConfig ns = cfg;
        ns.measurement.kind = MeasurementKind::NonSelective;
        ScenarioConfig none = cfg;
        none.measurement.kind = MeasurementKind::None;
        const auto s1 = states::assemble_state(ns, E);
        const auto s2 = states::assemble_state(none, E);
        const double dmax = (s1.matrix - s2.matrix).cwiseAbs().maxCoeff();
        const double n1 = negativity::negativity_exact(s1).value;
        const double n2 = negativity::negativity_exact(s2).value;
        c.check(dmax <= 1e-15 && n1 == n2,
                fmt("%s: non-selective vs baseline state max|diff|=%.1e (<=1e-15), dN=%.1e",
                    sweep::to_string(fig).c_str(), dmax, std::abs(n1 - n2)));
    }
}

// ---------------------------------------------------------------- AC4
void ac4(Ctx& c) {
    auto spec = sweep::preset(FigureId::Fig2);
    for (double eps : {0.3, 0.5, 0.9}) {
        double resid_big = 0.0, resid_small = 0.0;
        for (double lam : {0.01, 0.005}) {
            ScenarioConfig cfg = sweep::apply_axis(spec.scenario, spec.axis, 10.0);
            cfg.coupling = lam;
            cfg.measurement.epsilon = eps;
            cfg.measurement.kind = MeasurementKind::Selective;
            const auto E = elements::element_set(cfg);
            ScenarioConfig base = cfg;
            base.measurement.kind = MeasurementKind::None;
            const double nwm = negativity::negativity_exact(states::assemble_state(base, E)).value;
            cfg.regime_override = Regime::NonOrthogonal;
            const double ns = negativity::negativity_exact(states::assemble_state(cfg, E)).value;
            const double resid = std::abs(ns - nwm);
            const double bound = negativity::kResidualC * lam * lam * lam;
            c.check(resid <= bound,
                    fmt("eps=%.1f lambda=%.3f: |Ns-Nwm|=%.3e <= C*l^3=%.3e", eps, lam, resid,
                        bound));
            (lam == 0.01 ? resid_big : resid_small) = resid;
        }
        const double ratio = resid_big / std::max(resid_small, 1e-300);
        c.check(ratio >= 6.0,
                fmt("eps=%.1f: residual drop on halving lambda = %.1fx (>=6, cubic-or-better; "
                    "measured order is quartic)",
                    eps, ratio));
    }
}

// --------------------------------------------------- AC5/AC6/AC7 shared
struct OrthCurve {
    std::vector<double> ns, nwm;  // lambda^2-scaled
};

OrthCurve orth_curve(const sweep::SweepSpec& spec, double gap) {
    OrthCurve out;
    for (double v : spec.grid) {
        const auto E = elements_at(spec, gap, v);
        out.ns.push_back(negativity::negativity_orthogonal_scaled(E));
        out.nwm.push_back(negativity::negativity_baseline_scaled(E));
    }
    return out;
}

void orth_checks(Ctx& c, const sweep::SweepSpec& spec, double gap, const OrthCurve& cur,
                 bool check_zero_small, bool check_mono, bool check_ratio) {
    const auto& g = spec.grid;
    const double l2 = spec.scenario.coupling * spec.scenario.coupling;
    // (a) never above the baseline
    double worst_excess = 0.0;
    for (size_t i = 0; i < g.size(); ++i)
        worst_excess = std::max(worst_excess, (cur.ns[i] - cur.nwm[i]) * l2);
    c.check(worst_excess <= 1e-12,
            fmt("gap=%.2f (a): max(Ns-Nwm)=%.2e (<=1e-12)", gap, worst_excess));
    // (b) destroyed at small delay
    if (check_zero_small) {
        double z = 0.0;
        for (size_t i = 0; i < g.size(); ++i)
            if (g[i] <= 1.0) z = std::max(z, cur.ns[i]);
        c.check(z <= 1e-12, fmt("gap=%.2f (b): max Ns/l^2 for delay<=1T = %.2e (<=1e-12)", gap, z));
    }
    const bool harvesting = cur.nwm.back() > 0.0;
    // (c) non-decreasing past the first positive point
    if (check_mono && harvesting) {
        size_t first = g.size();
        for (size_t i = 0; i < g.size(); ++i)
            if (cur.ns[i] > 0.0) { first = i; break; }
        bool mono = true;
        double peak = 0.0;
        for (size_t i = first; i < g.size(); ++i) peak = std::max(peak, cur.ns[i]);
        for (size_t i = first + 1; i < g.size(); ++i)
            if (cur.ns[i] < cur.ns[i - 1] - 1e-9 * peak) mono = false;
        c.check(mono, fmt("gap=%.2f (c): Ns non-decreasing past first positive point "
                          "(first at delay=%.2f)", gap, first < g.size() ? g[first] : -1.0));
    }
    // (d) asymptotic recovery at the grid end
    if (check_ratio) {
        if (harvesting) {
            const double ratio = cur.ns.back() / cur.nwm.back();
            c.check(ratio >= 0.95, fmt("gap=%.2f (d): Ns/Nwm at delay=%.0fT = %.4f (>=0.95)",
                                       gap, g.back(), ratio));
        } else {
            c.info(fmt("gap=%.2f (d): baseline does not harvest (Nwm=0); skipped", gap));
        }
    }
}

void ac5(Ctx& c) {
    auto spec = sweep::preset(FigureId::Fig2);
    for (double gap : spec.gap_list)
        orth_checks(c, spec, gap, orth_curve(spec, gap), true, true, true);
}

void ac6(Ctx& c) {
    auto spec = sweep::preset(FigureId::Fig3);
    for (double gap : spec.gap_list) {
        const auto cur = orth_curve(spec, gap);
        orth_checks(c, spec, gap, cur, true, true, true);
        c.check(cur.ns.front() <= 1e-12,
                fmt("gap=%.2f: Ns=%.2e at delay 0 despite effectively spacelike separation",
                    gap, cur.ns.front()));
        // record the 20T value the near-geometry anchor would have used
        size_t i20 = 0;
        for (size_t i = 0; i < spec.grid.size(); ++i)
            if (std::abs(spec.grid[i] - 20.0) < 1e-9) i20 = i;
        if (cur.nwm[i20] > 0.0)
            c.info(fmt("gap=%.2f: Ns/Nwm at 20T = %.4f (recovery scale of this geometry is ~40T)",
                       gap, cur.ns[i20] / cur.nwm[i20]));
    }
}

void ac7(Ctx& c) {
    auto spec = sweep::preset(FigureId::Fig5);
    for (double gap : spec.gap_list)
        orth_checks(c, spec, gap, orth_curve(spec, gap), true, false, true);
}

// ---------------------------------------------------------------- AC8
void ac8(Ctx& c) {
    auto spec = sweep::preset(FigureId::Fig6like);
    for (double gap : spec.gap_list) {
        double worst = 0.0;
        for (double v : spec.grid) {
            const auto E = elements_at(spec, gap, v);
            worst = std::max(worst, negativity::negativity_orthogonal_scaled(E));
        }
        c.check(worst <= 1e-12,
                fmt("gap=%.2f: max Ns/l^2 over 0<Delta_CA<5T = %.2e (<=1e-12)", gap, worst));
    }
}

// ---------------------------------------------------------------- AC9
void ac9(Ctx& c) {
    auto spec = sweep::preset(FigureId::Fig7);
    const double gap = 2.5;
    std::vector<std::vector<double>> devs;  // per xi
    for (double xi : spec.xi_values) {
        std::vector<double> dv;
        for (double v : spec.grid) {
            ScenarioConfig cfg = sweep::apply_axis(spec.scenario, spec.axis, v);
            cfg.detA.gap = cfg.detB.gap = cfg.detC.gap = gap;
            cfg.measurement.xi = xi;
            const auto E = elements::element_set(cfg);
            const double ns = negativity::negativity_exact(states::assemble_state(cfg, E)).value;
            ScenarioConfig base = cfg;
            base.measurement.kind = MeasurementKind::None;
            const double nwm =
                negativity::negativity_exact(states::assemble_state(base, E)).value;
            dv.push_back((ns - nwm) / nwm);
        }
        devs.push_back(std::move(dv));
    }
    for (size_t xi_i = 0; xi_i < spec.xi_values.size(); ++xi_i) {
        double mx = 0.0;
        for (double d : devs[xi_i]) mx = std::max(mx, std::abs(d));
        c.check(mx <= 1e-3, fmt("xi=%.4f: max |Ns-Nwm|/Nwm = %.3e (<=0.1%%)",
                                spec.xi_values[xi_i], mx));
        c.check(std::abs(devs[xi_i].back()) <= 1e-4,
                fmt("xi=%.4f: |Ns-Nwm|/Nwm at 20T = %.2e (<=0.01%%)", spec.xi_values[xi_i],
                    std::abs(devs[xi_i].back())));
        int signflips = 0;
        for (size_t i = 1; i < devs[xi_i].size(); ++i)
            if (devs[xi_i][i] * devs[xi_i][i - 1] < 0.0) ++signflips;
        c.check(signflips >= 3, fmt("xi=%.4f: deviation oscillates along Delta_AC "
                                    "(%d sign changes)", spec.xi_values[xi_i], signflips));
    }
    // literal check as specified: first-lobe sign flips between xi and xi+pi
    const double s0 = devs[0].front(), spi = devs[2].front();
    const double shalf = devs[1].front();
    c.check(s0 * spi < 0.0,
            fmt("first-lobe deviation sign flips between xi=0 and xi=pi: %+.2e vs %+.2e "
                "(state is exactly pi-periodic in xi, see ledger)", s0, spi));
    c.info(fmt("first-lobe sign does flip between xi=0 and xi=pi/2: %+.2e vs %+.2e", s0, shalf));
}

// ---------------------------------------------------------------- AC10
void ac10(Ctx& c) {
    auto spec = sweep::preset(FigureId::Fig7);
    spec.scenario.detB.position = {10.0, 0.0, 0.0};
    spec.scenario.detC.position = {5.0, 0.0, 0.0};
    const double gap = 5.0;
    double worst = 0.0;
    for (double xi : spec.xi_values)
        for (double v : spec.grid) {
            const auto E = elements_at(spec, gap, v);
            const double ns = negativity::negativity_transition_closed_scaled(
                E, spec.scenario.measurement.epsilon, xi);
            const double nwm = negativity::negativity_baseline_scaled(E);
            worst = std::max(worst, std::abs(ns - nwm) / nwm);
        }
    c.check(worst <= 1e-6,
            fmt("far geometry (L pairs=5T, OmegaT=5): max |Ns-Nwm|/Nwm = %.2e (<=1e-6)", worst));
}

// ---------------------------------------------------------------- AC11
void ac11(Ctx& c) {
    auto spec = sweep::preset(FigureId::Fig9);
    const double eps = spec.scenario.measurement.epsilon;
    for (double xi : {0.0, M_PI / 2.0}) {
        std::vector<double> dev;
        for (double v : spec.grid) {
            const auto E = elements_at(spec, 2.5, v);
            const double ns = negativity::negativity_transition_closed_scaled(E, eps, xi);
            const double nwm = negativity::negativity_baseline_scaled(E);
            dev.push_back(std::abs(ns - nwm));
        }
        const size_t imax = std::distance(dev.begin(), std::max_element(dev.begin(), dev.end()));
        size_t i25 = 0;
        for (size_t i = 0; i < spec.grid.size(); ++i)
            if (std::abs(spec.grid[i] - 2.5) < 1e-9) i25 = i;
        c.check(imax == i25,
                fmt("xi=%.4f: |Ns-Nwm| grid maximum at Delta_CA=%.2f (spec: 2.5; see ledger)",
                    xi, spec.grid[imax]));
        const bool local_max = dev[i25] > dev[i25 - 1] && dev[i25] > dev[i25 + 1];
        c.info(fmt("xi=%.4f: symmetric point is a local maximum: %s (dev=%.3e, neighbors "
                   "%.3e/%.3e)", xi, local_max ? "yes" : "no", dev[i25], dev[i25 - 1],
                   dev[i25 + 1]));
    }
}

// ---------------------------------------------------------------- AC12
void ac12(Ctx& c) {
    SplitMix64 rng(0xACC12ull);
    struct Set { double r22, r33; cplx r41, r32; };
    std::vector<Set> sets;
    for (int i = 0; i < 200; ++i) {
        Set s;
        s.r22 = rng.uniform(0.1, 2.0);
        s.r33 = rng.uniform(0.1, 2.0);
        const double b = std::sqrt(s.r22 * s.r33);
        const double rr = b * std::sqrt(rng.uniform(0.0, 1.0));
        const double th = rng.uniform(0.0, 2.0 * M_PI);
        s.r32 = rr * std::exp(cplx(0.0, th));
        const double rr2 = 1.5 * b * std::sqrt(rng.uniform(0.0, 1.0));
        const double th2 = rng.uniform(0.0, 2.0 * M_PI);
        s.r41 = rr2 * std::exp(cplx(0.0, th2));
        sets.push_back(s);
    }
    for (double lam : {0.005, 0.01, 0.02}) {
        const double l2 = lam * lam;
        const double bound = negativity::kResidualC * lam * lam * lam;
        double worst_neg = 0.0, worst_root = 0.0;
        int bad_count = 0;
        for (const auto& s : sets) {
            states::Matrix4c m = states::Matrix4c::Zero();
            m(0, 0) = 1.0 - l2 * (s.r22 + s.r33);
            m(1, 1) = l2 * s.r22;
            m(2, 2) = l2 * s.r33;
            m(1, 2) = l2 * std::conj(s.r32);
            m(2, 1) = l2 * s.r32;
            m(0, 3) = l2 * std::conj(s.r41);
            m(3, 0) = l2 * s.r41;
            const auto ex = negativity::negativity_exact(m);
            const double pert = negativity::negativity_perturbative(s.r22, s.r33, s.r41, lam);
            worst_neg = std::max(worst_neg, std::abs(ex.value - pert));
            // root expansions vs dense eigenvalues (both sorted)
            auto roots = negativity::perturbative_roots(l2 * s.r22, l2 * s.r33, l2 * s.r41,
                                                        l2 * s.r32);
            std::array<double, 4> ev = ex.eigenvalues;
            std::sort(roots.begin(), roots.end());
            std::sort(ev.begin(), ev.end());
            for (int i = 0; i < 4; ++i)
                worst_root = std::max(worst_root, std::abs(roots[i] - ev[i]));
            if (ev[1] < -bound) ++bad_count;  // at most one negative eigenvalue
        }
        c.check(worst_neg <= bound,
                fmt("lambda=%.3f: max |N_exact - N_pert| = %.3e (<= C l^3 = %.3e)", lam,
                    worst_neg, bound));
        c.check(worst_root <= bound,
                fmt("lambda=%.3f: max root-vs-eigenvalue deviation = %.3e (<= %.3e)", lam,
                    worst_root, bound));
        c.check(bad_count == 0,
                fmt("lambda=%.3f: at most one negative eigenvalue in every set (%d violations)",
                    lam, bad_count));
    }
}

// ---------------------------------------------------------------- AC13
struct OracleRow { int kind; double zr, zi, vr, vi; };
const std::vector<OracleRow>& oracle_table();

void ac13(Ctx& c) {
    double worst_w = 0.0, worst_erf = 0.0, worst_erfi = 0.0;
    for (const auto& row : oracle_table()) {
        const cplx z(row.zr, row.zi);
        const cplx ref(row.vr, row.vi);
        cplx got;
        if (row.kind == 0) got = specfun::faddeeva(z);
        else if (row.kind == 1) got = specfun::erf_complex(z);
        else got = specfun::erfi_complex(z);
        const double rel = std::abs(got - ref) / std::abs(ref);
        if (row.kind == 0) worst_w = std::max(worst_w, rel);
        else if (row.kind == 1) worst_erf = std::max(worst_erf, rel);
        else worst_erfi = std::max(worst_erfi, rel);
    }
    c.check(worst_w <= 1e-10, fmt("faddeeva vs 30-digit oracle (400 pts): max rel=%.2e (<=1e-10)",
                                  worst_w));
    c.check(worst_erf <= 1e-9, fmt("erf vs oracle (300 pts): max rel=%.2e (<=1e-9)", worst_erf));
    c.check(worst_erfi <= 1e-9, fmt("erfi vs oracle (300 pts): max rel=%.2e (<=1e-9)", worst_erfi));
    const double erfc_ref = 0.00040695201744495892;  // erfc(2.5), 30-digit value rounded
    const double e1 = std::abs(specfun::erfc_real(2.5) - erfc_ref) / erfc_ref;
    c.check(e1 <= 1e-12, fmt("erfc(2.5) rel=%.2e (<=1e-12)", e1));
    const double erf1_ref = 0.84270079294971486934;
    const double e2 = std::abs(specfun::erf_complex(1.0).real() - erf1_ref) / erf1_ref;
    c.check(e2 <= 1e-9, fmt("erf(1) rel=%.2e (<=1e-9)", e2));
}

// ---------------------------------------------------------------- AC14
void ac14(Ctx& c) {
    auto spec = sweep::preset(FigureId::Fig2);
    // thinned grid keeps this criterion quick; determinism is format+order+math
    std::vector<double> g;
    for (size_t i = 0; i < spec.grid.size(); i += 10) g.push_back(spec.grid[i]);
    spec.grid = g;
    elements::clear_element_cache();
    const std::string csv1 = sweep::to_csv(sweep::run_sweep(spec, 1));
    elements::clear_element_cache();
    const std::string csv2 = sweep::to_csv(sweep::run_sweep(spec, 4));
    c.check(csv1 == csv2 && !csv1.empty(),
            fmt("sweep rerun (jobs=1 vs jobs=4, cache cleared): byte-identical = %s, %zu bytes",
                csv1 == csv2 ? "yes" : "no", csv1.size()));
}

struct Entry {
    int id;
    const char* suite;
    const char* title;
    std::function<void(Ctx&)> fn;
};

const std::vector<Entry>& registry() {
    static const std::vector<Entry> entries = {
        {1, "local-closed", "closed form vs quadrature (local L)", ac1},
        {2, "nonlocal-closed", "closed form vs quadrature (non-local L)", ac2},
        {3, "nonselective", "non-selective update equals baseline", ac3},
        {4, "nonorthogonal", "non-orthogonal leading-order invariance", ac4},
        {5, "orthogonal-fig2", "orthogonal spacelike reproduction", ac5},
        {6, "orthogonal-fig3", "orthogonal far-geometry reproduction", ac6},
        {7, "orthogonal-fig5", "orthogonal timelike reproduction", ac7},
        {8, "cancellation", "C between A and B cancels entanglement", ac8},
        {9, "transition-fig7", "transition-regime bound and oscillations", ac9},
        {10, "transition-far", "transition far-geometry suppression", ac10},
        {11, "fig9-symmetry", "deviation maximum at the symmetric delay", ac11},
        {12, "perturbative", "perturbative vs exact negativity", ac12},
        {13, "specfun", "special functions vs extended-precision oracle", ac13},
        {14, "determinism", "byte-identical sweep reruns", ac14},
    };
    return entries;
}

}  // namespace

std::vector<CriterionResult> run_criteria(const std::string& filter) {
    std::vector<CriterionResult> out;
    for (const auto& e : registry()) {
        if (!filter.empty() && filter != e.suite && filter != std::to_string(e.id)) continue;
        CriterionResult r;
        r.id = e.id;
        r.suite = e.suite;
        r.title = e.title;
        Ctx ctx{&r};
        const auto t0 = std::chrono::steady_clock::now();
        try {
            e.fn(ctx);
        } catch (const std::exception& ex) {
            ctx.check(false, std::string("exception: ") + ex.what());
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    std::string s = fmt("[%s] AC%-2d %-45s (%s, %.1fs)\n", r.pass ? "PASS" : "FAIL", r.id,
                        r.title.c_str(), r.suite.c_str(), r.seconds);
    for (const auto& l : r.lines)
        s += fmt("    %s %s\n", l.pass ? "ok  " : "FAIL", l.text.c_str());
    return s;
}

namespace {
const std::vector<OracleRow>& oracle_table() {
    static const std::vector<OracleRow> rows = {
#include "specfun_oracle.inc"
    };
    return rows;
}
}  // namespace

}  // namespace harvestlab::acceptance
