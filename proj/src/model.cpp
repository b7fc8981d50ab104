// model.cpp - system/bath descriptions and scalar bath functions

#include "oqs/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>

#include <math.h> // pchip.hpp in Boost 1.74 calls unqualified isnan

#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oqs {

namespace {

constexpr double kPi = std::numbers::pi;

void fix_phases(cmat& v) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        Eigen::Index imax = 0;
        v.col(j).cwiseAbs().maxCoeff(&imax);
        const cplx p = v(imax, j);
        if (std::abs(p) > 0) v.col(j) *= std::conj(p) / std::abs(p);
    }
}

double tabulated_J(const Tabulated& tab, double w) {
    if (w <= 0.0) return 0.0;
    if (w > tab.omega.back()) return 0.0;
    if (!tab.interp) throw std::logic_error("tabulated bath built without make_tabulated");
    return std::max(0.0, (*tab.interp)(w));
}

// lim_{u->0+} J(u)/u by Richardson extrapolation on a halving sequence.
double tabulated_slope_at_zero(const Tabulated& tab) {
    const double h0 = 0.5 * tab.omega[1];
    double t[4];
    for (int k = 0; k < 4; ++k) {
        const double h = h0 / std::pow(2.0, k);
        t[k] = tabulated_J(tab, h) / h;
    }
    // Neville tableau for extrapolation to h = 0 assuming an expansion in h
    for (int level = 1; level < 4; ++level)
        for (int k = 3; k >= level; --k) {
            const double f = std::pow(2.0, level);
            t[k] = (f * t[k] - t[k - 1]) / (f - 1.0);
        }
    return t[3];
}

// Bose-weighted factor |e^{bu} / (e^{bu} - 1)| without cancellation.
double planck_factor(double beta, double u) {
    const double x = beta * u;
    return x > 0 ? -1.0 / std::expm1(-x) : 1.0 / std::expm1(-x);
}

} // namespace

Tabulated make_tabulated(std::vector<double> omega, std::vector<double> J) {
    if (omega.size() < 4 || omega.size() != J.size())
        throw std::invalid_argument("bath.tabulated needs >= 4 matching (omega, J) samples");
    for (size_t i = 1; i < omega.size(); ++i)
        if (!(omega[i] > omega[i - 1])) throw std::invalid_argument("bath.tabulated omega grid must be increasing");
    Tabulated t;
    t.omega = omega;
    t.J = J;
    // second-order one-sided slope at omega = 0 (the pchip default is first order)
    const double h1 = omega[1] - omega[0], h2 = omega[2] - omega[1];
    const double d0 = -(2 * h1 + h2) / (h1 * (h1 + h2)) * J[0] + (h1 + h2) / (h1 * h2) * J[1] - h1 / (h2 * (h1 + h2)) * J[2];
    const double left = std::max(0.0, d0);
    auto p = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(std::move(omega), std::move(J), left);
    t.interp = std::make_shared<const std::function<double(double)>>([p](double w) { return (*p)(w); });
    return t;
}

std::vector<double> bath_breakpoints(const BathSpec& bath) {
    std::vector<double> bp{0.0};
    if (const auto* t = std::get_if<Tabulated>(&bath.form_factor))
        for (size_t i = 1; i < t->omega.size(); ++i) {
            bp.push_back(t->omega[i]);
            bp.push_back(-t->omega[i]);
        }
    std::sort(bp.begin(), bp.end());
    return bp;
}

SystemSpec make_system(const cmat& h, const cmat& g) {
    if (h.rows() != h.cols() || h.rows() == 0) throw std::invalid_argument("h_sys must be square and nonempty");
    if (g.rows() != h.rows() || g.cols() != h.cols())
        throw std::invalid_argument("coupling must have the same shape as h_sys");
    if (!h.allFinite() || !g.allFinite()) throw std::invalid_argument("non-finite entries in h_sys or coupling");
    if (hermiticity_deviation(h) > 1e-12) throw std::invalid_argument("hermiticity: h_sys is not hermitian");
    if (hermiticity_deviation(g) > 1e-12) throw std::invalid_argument("hermiticity: coupling is not hermitian");

    SystemSpec s;
    s.dim = static_cast<int>(h.rows());
    HermEig e = herm_eig(h);
    const double e0 = e.values(0);
    s.eigvals = e.values.array() - e0;
    s.eigvals(0) = 0.0;
    s.eigvecs = e.vectors;
    fix_phases(s.eigvecs);
    s.h_sys = hermitize(h) - e0 * cmat::Identity(s.dim, s.dim);
    s.coupling = hermitize(g);
    return s;
}

void validate_bath(const BathSpec& bath) {
    if (!(bath.beta > 0.0) || !std::isfinite(bath.beta)) throw std::invalid_argument("bath.beta must be positive");
    if (const auto* f = std::get_if<AnalyticFamily>(&bath.form_factor)) {
        if (f->n < 0) throw std::invalid_argument("bath.family.n must be a nonnegative integer");
        if (f->m != 1 && f->m != 2) throw std::invalid_argument("bath.family.m must be 1 or 2");
        if (!(f->c1 > 0.0)) throw std::invalid_argument("bath.family.c1 must be positive");
    } else {
        const auto& t = std::get<Tabulated>(bath.form_factor);
        if (t.omega.size() < 4 || t.omega.size() != t.J.size())
            throw std::invalid_argument("bath.tabulated needs >= 4 matching (omega, J) samples");
        if (t.omega[0] != 0.0 || t.J[0] != 0.0) throw std::invalid_argument("bath.tabulated must start at omega = 0 with J = 0");
        for (size_t i = 1; i < t.omega.size(); ++i)
            if (!(t.omega[i] > t.omega[i - 1])) throw std::invalid_argument("bath.tabulated omega grid must be increasing");
        for (double j : t.J)
            if (!(j >= 0.0) || !std::isfinite(j)) throw std::invalid_argument("bath.tabulated J must be nonnegative");
    }
}

double spectral_density(const BathSpec& bath, double omega) {
    if (!(omega >= 0.0)) throw std::domain_error("spectral_density: omega must be nonnegative");
    if (const auto* f = std::get_if<AnalyticFamily>(&bath.form_factor)) {
        if (omega == 0.0) return 0.0;
        return 0.5 * kPi * f->c1 * std::pow(omega, 1 + 2 * f->n) * std::exp(-2.0 * std::pow(omega, f->m));
    }
    return tabulated_J(std::get<Tabulated>(bath.form_factor), omega);
}

double angular_spectral_density(const std::function<double(double, double, double)>& g2, double omega) {
    using boost::math::quadrature::gauss_kronrod;
    auto over_phi = [&](double theta) {
        auto f = [&](double phi) { return g2(omega, theta, phi); };
        return gauss_kronrod<double, 61>::integrate(f, 0.0, 2 * kPi, 10, 1e-14) * std::sin(theta);
    };
    const double sphere = gauss_kronrod<double, 61>::integrate(over_phi, 0.0, kPi, 10, 1e-14);
    return 0.5 * kPi * omega * omega * sphere;
}

double h_hat(const BathSpec& bath, double u) {
    if (u == 0.0) {
        if (const auto* f = std::get_if<AnalyticFamily>(&bath.form_factor))
            return f->n == 0 ? 0.5 * kPi * f->c1 / bath.beta : 0.0;
        return tabulated_slope_at_zero(std::get<Tabulated>(bath.form_factor)) / bath.beta;
    }
    return spectral_density(bath, std::abs(u)) * planck_factor(bath.beta, u);
}

std::optional<std::string> bath_quality_warning(const BathSpec& bath) {
    const auto* t = std::get_if<Tabulated>(&bath.form_factor);
    if (!t) return std::nullopt;
    if (t->omega[1] > 0.1 / bath.beta)
        return "tabulated J: first nonzero node " + std::to_string(t->omega[1]) +
               " does not resolve the thermal scale 1/beta near u = 0";
    return std::nullopt;
}

double support_cutoff(const BathSpec& bath) {
    if (const auto* t = std::get_if<Tabulated>(&bath.form_factor)) return t->omega.back();
    const auto& f = std::get<AnalyticFamily>(bath.form_factor);
    // envelope of J is unimodal; walk past the peak until the tail is negligible
    double peak = 0.0, u = 1e-3;
    for (; u < 1e4; u *= 1.05) peak = std::max(peak, h_hat(bath, u));
    u = std::pow(0.5 * (1 + 2 * f.n) / f.m, 1.0 / f.m); // location of the J maximum
    while (h_hat(bath, u) > 1e-15 * peak) u *= 1.02;
    return u;
}

double integrate(const std::function<double(double)>& f, double a, double b, const std::vector<double>& breakpoints) {
    using boost::math::quadrature::gauss_kronrod;
    std::vector<double> pts{a};
    for (double p : breakpoints)
        if (p > a && p < b) pts.push_back(p);
    std::sort(pts.begin() + 1, pts.end());
    pts.push_back(b);
    double total = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] <= pts[i]) continue;
        double err = 0.0, l1 = 0.0;
        const double r = gauss_kronrod<double, 61>::integrate(f, pts[i], pts[i + 1], 15, 1e-11, &err, &l1);
        if (!std::isfinite(r)) throw std::domain_error("quadrature: non-finite integrand");
        if (err > std::max(1e-10, 1e-9 * l1)) throw std::runtime_error("quadrature failure: error estimate " + std::to_string(err));
        total += r;
    }
    return total;
}

double principal_value(const std::function<double(double)>& f, double pole, Window w,
                       const std::vector<double>& breakpoints) {
    if (!(w.hi > w.lo)) throw std::invalid_argument("principal_value: empty window");
    auto outer = [&](double u) { return f(u) / (pole - u); };
    if (pole < w.lo || pole > w.hi) return integrate(outer, w.lo, w.hi, breakpoints);
    if (pole == w.lo || pole == w.hi) throw std::domain_error("principal_value: pole on the window boundary");

    double eps = std::min({pole - w.lo, w.hi - pole, 1.0});
    for (double b : breakpoints)
        if (std::abs(b - pole) > 1e-14 * std::max(1.0, std::abs(pole))) eps = std::min(eps, 0.5 * std::abs(b - pole));

    // symmetric excision folded onto [0, eps]: the 1/s singularities cancel exactly
    auto folded = [&](double s) { return (f(pole - s) - f(pole + s)) / s; };
    double r = integrate(folded, 0.0, eps);
    if (pole - eps > w.lo) r += integrate(outer, w.lo, pole - eps, breakpoints);
    if (pole + eps < w.hi) r += integrate(outer, pole + eps, w.hi, breakpoints);
    if (std::isnan(r)) throw std::domain_error("principal_value: NaN from integrand");
    return r;
}

cplx correlation_function(const BathSpec& bath, double t) {
    const double U = support_cutoff(bath);
    auto re = [&](double u) { return h_hat(bath, u) * std::cos(u * t); };
    auto im = [&](double u) { return -h_hat(bath, u) * std::sin(u * t); };
    const std::vector<double> bp = bath_breakpoints(bath);
    return cplx(integrate(re, -U, U, bp), integrate(im, -U, U, bp)) / (2 * kPi);
}

double lamb_shift_kernel(const BathSpec& bath, double omega) {
    const double U = support_cutoff(bath);
    auto f = [&](double u) { return h_hat(bath, u); };
    return principal_value(f, omega, {-U, U}, bath_breakpoints(bath)) / (2 * kPi);
}

} // namespace oqs
