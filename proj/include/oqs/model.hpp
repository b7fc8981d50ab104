// model.hpp - system and bath descriptions, spectral density and bath correlations

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "oqs/linalg.hpp"

namespace oqs {

struct SystemSpec {
    int dim{0};
    cmat h_sys;    // shifted so that min eigenvalue is 0
    cmat coupling; // G
    rvec eigvals;  // ascending
    cmat eigvecs;  // columns phi_j
};

// Validates hermiticity (1e-12), diagonalizes, shifts min eigenvalue to 0.
SystemSpec make_system(const cmat& h, const cmat& g);

// |g(w, Sigma)|^2 = w^{2p} e^{-2 w^m} |g1(Sigma)|^2 with p = -1/2 + n.
struct AnalyticFamily {
    int n{0};
    int m{1};
    double c1{1.0}; // integral of |g1|^2 over the sphere
};

// Samples of J on an ascending grid starting at 0; monotone cubic in between.
struct Tabulated {
    std::vector<double> omega;
    std::vector<double> J;
    std::shared_ptr<const std::function<double(double)>> interp; // set by make_tabulated
};

Tabulated make_tabulated(std::vector<double> omega, std::vector<double> J);

struct BathSpec {
    double beta{1.0};
    std::variant<AnalyticFamily, Tabulated> form_factor;
};

void validate_bath(const BathSpec& bath);

double spectral_density(const BathSpec& bath, double omega);

// J from an arbitrary angular form factor: (pi/2) w^2 * int_{S^2} |g(w,theta,phi)|^2 dSigma.
double angular_spectral_density(const std::function<double(double, double, double)>& g2, double omega);

double h_hat(const BathSpec& bath, double u);

// Non-fatal resolution diagnostics for tabulated baths.
std::optional<std::string> bath_quality_warning(const BathSpec& bath);

// Kinks of h_hat on the real line: 0, and +-nodes of a tabulated J.
std::vector<double> bath_breakpoints(const BathSpec& bath);

// U such that h_hat vanishes (below 1e-12 relative) outside [-U, U].
double support_cutoff(const BathSpec& bath);

// <phi(t) phi(0)> = (1/2pi) int h_hat(u) e^{-iut} du. Real part is the symmetrized correlation.
cplx correlation_function(const BathSpec& bath, double t);

// (1/2pi) P.V. int h_hat(u) / (omega - u) du.
double lamb_shift_kernel(const BathSpec& bath, double omega);

struct Window {
    double lo;
    double hi;
};

// P.V. int_window f(u) / (pole - u) du. Breakpoints mark kinks of f.
double principal_value(const std::function<double(double)>& f, double pole, Window window,
                       const std::vector<double>& breakpoints = {});

// Adaptive Gauss-Kronrod over [a, b] (infinite bounds allowed), split at breakpoints.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const std::vector<double>& breakpoints = {});

} // namespace oqs
