// linalg.hpp - dense helpers: vectorization, superoperators, exponentials, norms

#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oqs {

using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rmat = Eigen::MatrixXd;
using rvec = Eigen::VectorXd;

inline constexpr cplx I{0.0, 1.0};

// Row-major vectorization: |i><j| maps to index i*N + j.
cvec vec(const cmat& rho);
cmat unvec(const cvec& v, int n);

// Matrix of rho -> A rho B in the vec convention, i.e. A (x) B^T.
cmat sandwich(const cmat& a, const cmat& b);
// Matrix of rho -> -i[H, rho].
cmat commutator_super(const cmat& h);
// Permutation T with vec(X^T) = T vec(X).
cmat transpose_permutation(int n);
// Dual under the pairing tr(X S(rho)) = tr(S_*(X) rho).
cmat dual(const cmat& s, int n);

double max_abs(const cmat& a);
double hermiticity_deviation(const cmat& a);
cmat hermitize(const cmat& a);

// Sum of singular values.
double trace_norm(const cmat& a);

// Condition number of the column-normalized eigenvector matrix.
double eigvec_condition(const cmat& v);

// e^{tS} for a fixed generator, caching the eigendecomposition. Falls back to
// scaling-and-squaring Pade when the eigenvectors are ill-conditioned.
class Exponential {
public:
    explicit Exponential(const cmat& gen, double cond_limit = 1e8);
    cmat at(double t) const;
    bool diagonalized() const { return diagonalized_; }
    double condition() const { return cond_; }
    const cvec& eigenvalues() const { return evals_; }

private:
    cmat gen_;
    cmat v_, vinv_;
    cvec evals_;
    double cond_{0.0};
    bool diagonalized_{false};
};

cmat expm(const cmat& a);

// Hermitian eigendecomposition with ascending eigenvalues.
struct HermEig {
    rvec values;
    cmat vectors;
};
HermEig herm_eig(const cmat& a);

// Hermitian matrix function f(A) via eigendecomposition.
template <class F>
cmat herm_apply(const cmat& a, F f) {
    HermEig e = herm_eig(a);
    cvec d(e.values.size());
    for (Eigen::Index i = 0; i < e.values.size(); ++i) d(i) = f(e.values(i));
    return e.vectors * d.asDiagonal() * e.vectors.adjoint();
}

std::vector<double> linspace(double a, double b, int n);
// n points with t_0 = 0 and the rest log-spaced on [t_max*1e-3, t_max].
std::vector<double> logspace_from_zero(double t_max, int n);

// Least-squares slope of log(y) against log(x); also returns R^2.
struct LinearFit {
    double slope{0.0};
    double intercept{0.0};
    double r2{0.0};
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);
LinearFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

// Entries with independent standard normal real and imaginary parts.
cmat random_matrix(int n, std::mt19937_64& rng);

// G G^+ / tr(G G^+) with G Ginibre.
cmat random_density(int n, std::mt19937_64& rng);

} // namespace oqs
