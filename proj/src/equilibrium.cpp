// equilibrium.cpp - Gibbs states and the renormalized generator pipeline

#include "oqs/equilibrium.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "oqs/resonance.hpp"

namespace oqs {

namespace {

// Second divided difference exp[x, y, 0] times e^{-s}, s = max(x, y, 0).
double scaled_divided_difference(double x, double y, double s) {
    Eigen::Matrix3d t;
    t << x - s, 1.0, 0.0, 0.0, y - s, 1.0, 0.0, 0.0, -s;
    const Eigen::Matrix3d e = t.exp();
    return e(0, 2);
}

// beta^2 e^{-beta E_a} exp[x, y, 0] h(u) with x = beta(E_a - E_b), y = beta(E_a - E_c - u), in log space.
double kernel(double beta, double ea, double eb, double ec, double u, double h) {
    if (h <= 0.0) return 0.0;
    const double x = beta * (ea - eb);
    const double y = beta * (ea - ec - u);
    const double s = std::max({x, y, 0.0});
    const double d = scaled_divided_difference(x, y, s);
    return beta * beta * d * std::exp(s - beta * ea + std::log(h));
}

template <class Integral>
cmat correction_from(const SystemSpec& sys, double beta, Integral integral) {
    const int n = sys.dim;
    const cmat g = sys.eigvecs.adjoint() * sys.coupling * sys.eigvecs;
    const rvec& e = sys.eigvals;
    cmat y = cmat::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                const cplx gg = g(a, c) * g(c, b);
                if (gg == 0.0) continue;
                y(a, b) += gg * integral(e(a), e(b), e(c));
            }
    rvec w(n);
    for (int j = 0; j < n; ++j) w(j) = std::exp(-beta * e(j));
    const double z = w.sum();
    const cmat rho0 = (w / z).cast<cplx>().asDiagonal();
    cmat r = (y - rho0 * y.trace()) / z;
    r = hermitize(r);
    r -= rho0 * r.trace();
    return sys.eigvecs * r * sys.eigvecs.adjoint();
}

} // namespace

GibbsState gibbs(const cmat& h, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("gibbs: beta must be positive");
    HermEig e = herm_eig(h);
    const double e0 = e.values.minCoeff();
    rvec w = (-(beta) * (e.values.array() - e0)).exp();
    w /= w.sum();
    GibbsState g;
    g.rho = hermitize(e.vectors * w.cast<cplx>().asDiagonal() * e.vectors.adjoint());
    g.beta = beta;
    g.source = GibbsSource::bare;
    return g;
}

cmat second_order_correction(const SystemSpec& sys, const BathSpec& bath) {
    const double beta = bath.beta;
    const double U = support_cutoff(bath);
    const std::vector<double> bp = bath_breakpoints(bath);
    return correction_from(sys, beta, [&](double ea, double eb, double ec) {
        auto f = [&](double u) { return kernel(beta, ea, eb, ec, u, h_hat(bath, u)); };
        return integrate(f, -U, U, bp) / (2 * std::numbers::pi);
    });
}

cmat second_order_correction(const SystemSpec& sys, double beta, const SpectralMeasure& m) {
    return correction_from(sys, beta, [&](double ea, double eb, double ec) {
        double acc = 0.0;
        for (size_t i = 0; i < m.u.size(); ++i) acc += kernel(beta, ea, eb, ec, m.u[i], m.weight[i]);
        return acc;
    });
}

GibbsState reduced_gibbs_second_order(const SystemSpec& sys, const BathSpec& bath, double lambda) {
    GibbsState g = gibbs(sys.h_sys, bath.beta);
    g.source = GibbsSource::second_order;
    if (lambda == 0.0) return g;
    cmat rho = g.rho + lambda * lambda * second_order_correction(sys, bath);
    rho = hermitize(rho);
    g.rho = rho / rho.trace().real();
    return g;
}

RenormalizedSystem renormalize(const GibbsState& rho_lambda, double beta, const cmat& reference) {
    HermEig e = herm_eig(rho_lambda.rho);
    const int n = static_cast<int>(e.values.size());
    if (!(e.values(0) > 0.0)) throw std::domain_error("renormalize: density matrix is not strictly positive");
    const double pmax = e.values(n - 1);

    RenormalizedSystem rs;
    rs.beta = beta;
    rs.reference = reference;
    rs.e_tilde.resize(n);
    rs.phi_tilde.resize(n, n);
    // ascending energies correspond to descending populations
    for (int j = 0; j < n; ++j) {
        const int src = n - 1 - j;
        rs.e_tilde(j) = -std::log(e.values(src) / pmax) / beta;
        rs.phi_tilde.col(j) = e.vectors.col(src);
    }
    rs.e_tilde(0) = 0.0;
    rs.h_tilde = hermitize(rs.phi_tilde * rs.e_tilde.cast<cplx>().asDiagonal() * rs.phi_tilde.adjoint());

    const rvec sq = e.values.cwiseSqrt();
    const cmat root = e.vectors * sq.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    rs.purification = vec(reference.adjoint() * root * reference);
    return rs;
}

cmat purification_map(const RenormalizedSystem& rs) {
    const int n = static_cast<int>(rs.reference.rows());
    const cmat omega = unvec(rs.purification, n);
    return sandwich(rs.reference.adjoint(), rs.reference * omega);
}

RenormalizedGenerators renormalized_generators(const SystemSpec& sys, const BathSpec& bath, double lambda) {
    const int n = sys.dim;
    RenormalizedGenerators out;

    const ResonanceData bare = analyze_resonances(sys, bath, 0.0);
    if (!bare.fgr_holds) out.warnings.push_back("Fermi Golden Rule condition violated (gamma_FGR <= 0)");

    out.rho_lambda = reduced_gibbs_second_order(sys, bath, lambda);
    out.renormalized = renormalize(out.rho_lambda, bath.beta, sys.eigvecs);
    if (lambda == 0.0) out.renormalized.h_tilde = sys.h_sys;

    const SystemSpec tilde = make_system(out.renormalized.h_tilde, sys.coupling);
    out.k_tilde = build_davies(tilde, bath, lambda);

    const cmat phi = purification_map(out.renormalized);
    {
        Eigen::JacobiSVD<cmat> svd(phi);
        const auto& s = svd.singularValues();
        out.phi_condition = s(0) / s(s.size() - 1);
    }
    if (!(out.phi_condition <= 1e12))
        throw std::runtime_error("purification map is near-singular (condition " + std::to_string(out.phi_condition) + ")");
    const cmat phi_inv = phi.inverse();

    // level shift on the doubled space, then back to the Heisenberg generator of the renormalized dynamics
    const cmat k_star = dual(out.k_tilde.k_super.matrix, n);
    out.lambda_tilde = -I * phi * k_star * phi_inv;
    const cmat md_star = phi_inv * (I * out.lambda_tilde) * phi;

    out.M_d = {n, dual(md_star, n)};
    out.M = {n, commutator_super(out.renormalized.h_tilde) + lambda * lambda * out.M_d.matrix};
    return out;
}

} // namespace oqs
