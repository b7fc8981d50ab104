// equilibrium.hpp - Gibbs states, second-order reduced equilibrium, renormalized generators

#pragma once

#include <string>
#include <vector>

#include "oqs/davies.hpp"

namespace oqs {

enum class GibbsSource { bare, renormalized, second_order, exact };

struct GibbsState {
    cmat rho;
    double beta{1.0};
    GibbsSource source{GibbsSource::bare};
};

GibbsState gibbs(const cmat& h, double beta);

// Point masses approximating h_hat(u) du / 2pi, e.g. from a finite-mode bath.
struct SpectralMeasure {
    std::vector<double> u;
    std::vector<double> weight;
};

// rho^(2) with rho_lambda = rho_0 + lambda^2 rho^(2) + O(lambda^4); traceless and hermitian.
cmat second_order_correction(const SystemSpec& sys, const BathSpec& bath);
cmat second_order_correction(const SystemSpec& sys, double beta, const SpectralMeasure& measure);

GibbsState reduced_gibbs_second_order(const SystemSpec& sys, const BathSpec& bath, double lambda);

struct RenormalizedSystem {
    cmat h_tilde;
    rvec e_tilde;      // ascending, e_tilde(0) = 0
    cmat phi_tilde;    // eigenvectors of h_tilde
    cvec purification; // Omega~ in C^N (x) C^N, conjugation taken in the reference basis
    cmat reference;    // basis defining the conjugation (eigenvectors of H_S)
    double beta{1.0};
};

// H~ = -(1/beta) ln(rho / ||rho||). Throws std::domain_error unless rho > 0.
RenormalizedSystem renormalize(const GibbsState& rho_lambda, double beta, const cmat& reference);

// X -> (X (x) 1) Omega~ as an N^2 x N^2 matrix on vec(X).
cmat purification_map(const RenormalizedSystem& rs);

struct RenormalizedGenerators {
    Superoperator M;
    Superoperator M_d;
    GibbsState rho_lambda;
    RenormalizedSystem renormalized;
    DaviesGenerator k_tilde;  // Davies construction at the renormalized Hamiltonian
    cmat lambda_tilde;        // level-shift operator on the doubled space
    double phi_condition{1.0};
    std::vector<std::string> warnings;
};

RenormalizedGenerators renormalized_generators(const SystemSpec& sys, const BathSpec& bath, double lambda);

} // namespace oqs
