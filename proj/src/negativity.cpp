#include "harvestlab/negativity.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace harvestlab::negativity {

using elements::MatrixElementSet;

Matrix4c partial_transpose_B(const Matrix4c& m) {
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10)
        throw std::domain_error("partial_transpose_B: input is not Hermitian");
    Matrix4c r;
    for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap)
            r.block<2, 2>(2 * a, 2 * ap) = m.block<2, 2>(2 * a, 2 * ap).transpose();
    return r;
}

NegativityResult negativity_exact(const Matrix4c& m) {
    const Matrix4c pt = partial_transpose_B(m);
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(pt, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("negativity_exact: eigensolver failed");
    NegativityResult res;
    res.method = Method::ExactEigen;
    double neg = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double x = solver.eigenvalues()(i);
        res.eigenvalues[i] = x;
        neg += 0.5 * (std::abs(x) - x);
    }
    res.value = neg;
    return res;
}

NegativityResult negativity_exact(const states::TwoQubitState& state) {
    return negativity_exact(state.matrix);
}

double negativity_perturbative(double r22, double r33, cplx r41, double lambda) {
    if (r22 < 0.0 || r33 < 0.0)
        throw std::domain_error("negativity_perturbative: r22 and r33 must be >= 0");
    const double root = std::sqrt(std::norm(r41) + 0.25 * (r22 - r33) * (r22 - r33));
    return lambda * lambda * std::max(0.0, root - 0.5 * (r22 + r33));
}

namespace {

double neg_formula(double Laa, double Lbb, cplx Mab) {
    const double root = std::sqrt(std::norm(Mab) + 0.25 * (Laa - Lbb) * (Laa - Lbb));
    return std::max(0.0, root - 0.5 * (Laa + Lbb));
}

}  // namespace

double negativity_baseline(const MatrixElementSet& E) {
    return E.lambda * E.lambda * negativity_baseline_scaled(E);
}

double negativity_baseline_scaled(const MatrixElementSet& E) {
    return neg_formula(E.s_LAA(), E.s_LBB(), E.s_MAB());
}

double negativity_orthogonal(const states::TildeElements& t) {
    return neg_formula(t.Lt_AA, t.Lt_BB, t.Mt_AB);
}

double negativity_orthogonal_scaled(const MatrixElementSet& E) {
    const double lcc = E.s_LCC();
    const double Laa = E.s_LAA() + (std::norm(E.s_LAC()) + std::norm(E.s_MAC())) / lcc;
    const double Lbb = E.s_LBB() + (std::norm(E.s_LBC()) + std::norm(E.s_MBC())) / lcc;
    const cplx Mab = E.s_MAB() + (E.s_LAC() * E.s_MBC() + E.s_LBC() * E.s_MAC()) / lcc;
    return neg_formula(Laa, Lbb, Mab);
}

double negativity_transition_closed_scaled(const MatrixElementSet& E, double epsilon,
                                           double xi) {
    const double lam = E.lambda;
    const double eh = epsilon / lam;
    const double den = eh * eh + E.s_LCC();
    if (!(den > 0.0))
        throw std::domain_error("negativity_transition_closed_scaled: eps^2 + L_CC must be > 0");
    const cplx ep = std::exp(cplx(0.0, xi));
    const cplx em = std::exp(cplx(0.0, -xi));
    const double pr = eh * std::sqrt(std::max(0.0, 1.0 - epsilon * epsilon)) / den;
    const cplx g3 = pr * (ep * E.s_LAC() + em * E.s_MAC());  // A-excited slot
    const cplx g2 = pr * (ep * E.s_LBC() + em * E.s_MBC());
    const double Laa = E.s_LAA() + (std::norm(E.s_LAC()) + std::norm(E.s_MAC())) / den;
    const double Lbb = E.s_LBB() + (std::norm(E.s_LBC()) + std::norm(E.s_MBC())) / den;
    const cplx Mp = E.s_MAB() + (E.s_LAC() * E.s_MBC() + E.s_LBC() * E.s_MAC()) / den;
    const double alpha = Laa + Lbb;
    const double abar = Laa - Lbb;
    const double beta = std::norm(g3) + std::norm(g2);
    const double bbar = std::norm(g3) - std::norm(g2);
    const double rad = 4.0 * std::norm(Mp) + (abar - bbar) * (abar - bbar) -
                       8.0 * (std::conj(Mp) * g3 * g2).real();
    return std::max(0.0, 0.5 * std::sqrt(std::max(rad, 0.0)) - 0.5 * (alpha - beta));
}

TransitionNegativity negativity_transition(const states::TwoQubitState& state,
                                           const MatrixElementSet& E, double epsilon,
                                           double xi) {
    TransitionNegativity out;
    out.value = negativity_exact(state).value;
    out.closed_form =
        E.lambda * E.lambda * negativity_transition_closed_scaled(E, epsilon, xi);
    out.discrepancy = std::abs(out.value - out.closed_form);
    out.beyond_order = out.discrepancy > kResidualC * std::pow(E.lambda, 3);
    return out;
}

std::array<double, 4> perturbative_roots(double r22, double r33, cplx r41, cplx r32) {
    (void)r32;  // absent from the characteristic polynomial at this order
    if (r22 < 0.0 || r33 < 0.0)
        throw std::domain_error("perturbative_roots: r22 and r33 must be >= 0");
    const double s = r22 + r33;
    const double disc = std::sqrt((r22 - r33) * (r22 - r33) + 4.0 * std::norm(r41));
    return {1.0 - s, 0.0, 0.5 * (s + disc), 0.5 * (s - disc)};
}

}  // namespace harvestlab::negativity
