// linalg.cpp - dense helpers

#include "oqs/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace oqs {

cvec vec(const cmat& rho) {
    const Eigen::Index n = rho.rows();
    cvec v(n * rho.cols());
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < rho.cols(); ++j) v(i * rho.cols() + j) = rho(i, j);
    return v;
}

cmat unvec(const cvec& v, int n) {
    if (v.size() != static_cast<Eigen::Index>(n) * n)
        throw std::invalid_argument("unvec: size mismatch");
    cmat rho(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rho(i, j) = v(i * n + j);
    return rho;
}

cmat sandwich(const cmat& a, const cmat& b) {
    const Eigen::Index n = a.rows(), m = b.rows();
    cmat out(n * m, a.cols() * b.cols());
    // (A rho B)_{ij} = sum_{kl} A_ik rho_kl B_lj
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            for (Eigen::Index j = 0; j < b.cols(); ++j)
                for (Eigen::Index l = 0; l < b.rows(); ++l)
                    out(i * b.cols() + j, k * b.rows() + l) = aik * b(l, j);
        }
    return out;
}

cmat commutator_super(const cmat& h) {
    const cmat id = cmat::Identity(h.rows(), h.cols());
    return -I * (sandwich(h, id) - sandwich(id, h));
}

cmat transpose_permutation(int n) {
    cmat t = cmat::Zero(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t(j * n + i, i * n + j) = 1.0;
    return t;
}

cmat dual(const cmat& s, int n) {
    // T S^T T with T the transpose permutation, applied by index relabelling
    cmat out(s.rows(), s.cols());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) out(a * n + b, c * n + d) = s(d * n + c, b * n + a);
    return out;
}

double max_abs(const cmat& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

double hermiticity_deviation(const cmat& a) { return max_abs(a - a.adjoint()); }

cmat hermitize(const cmat& a) { return 0.5 * (a + a.adjoint()); }

double trace_norm(const cmat& a) {
    Eigen::JacobiSVD<cmat> svd(a);
    return svd.singularValues().sum();
}

double eigvec_condition(const cmat& v) {
    cmat w = v;
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
        const double nrm = w.col(j).norm();
        if (nrm > 0) w.col(j) /= nrm;
    }
    Eigen::JacobiSVD<cmat> svd(w);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    return smin > 0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

Exponential::Exponential(const cmat& gen, double cond_limit) : gen_(gen) {
    Eigen::ComplexEigenSolver<cmat> es(gen);
    if (es.info() == Eigen::Success) {
        v_ = es.eigenvectors();
        evals_ = es.eigenvalues();
        cond_ = eigvec_condition(v_);
        if (cond_ <= cond_limit) {
            vinv_ = v_.inverse();
            diagonalized_ = true;
        }
    } else {
        cond_ = std::numeric_limits<double>::infinity();
    }
}

cmat Exponential::at(double t) const {
    if (!diagonalized_) return expm(t * gen_);
    cvec d(evals_.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = std::exp(t * evals_(i));
    return v_ * d.asDiagonal() * vinv_;
}

cmat expm(const cmat& a) { return a.exp(); }

HermEig herm_eig(const cmat& a) {
    Eigen::SelfAdjointEigenSolver<cmat> es(hermitize(a));
    if (es.info() != Eigen::Success) throw std::runtime_error("hermitian eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = a;
        return out;
    }
    for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
    return out;
}

std::vector<double> logspace_from_zero(double t_max, int n) {
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    const double lo = std::log(t_max * 1e-3), hi = std::log(t_max);
    for (int i = 1; i < n; ++i)
        out[i] = n == 2 ? t_max : std::exp(lo + (hi - lo) * (i - 1) / (n - 2));
    out[n - 1] = t_max;
    return out;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ssr = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ssr += r * r;
    }
    f.r2 = syy > 0 ? 1.0 - ssr / syy : 1.0;
    return f;
}

LinearFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx(x.size()), ly(y.size());
    for (size_t i = 0; i < x.size(); ++i) {
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    return linear_fit(lx, ly);
}

cmat random_matrix(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    cmat x(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) x(a, b) = cplx(nd(rng), nd(rng));
    return x;
}

cmat random_density(int n, std::mt19937_64& rng) {
    const cmat g = random_matrix(n, rng);
    const cmat r = g * g.adjoint();
    return hermitize(r / r.trace().real());
}

} // namespace oqs
