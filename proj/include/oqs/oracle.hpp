// oracle.hpp - exact reduced dynamics of the system coupled to a finite set of bath modes

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "oqs/dynamics.hpp"
#include "oqs/equilibrium.hpp"

namespace oqs {

struct OracleOptions {
    int cutoff{3};               // largest per-mode occupation
    double tail_tol{1e-6};       // coupling-weighted thermal tail targeted when picking per-mode cutoffs
    double max_tail_mass{1e-6};  // coupling-weighted tail above which the oracle refuses to run
    long dim_cap{4096};          // total Hilbert dimension limit
    double max_omega_tail{1e-10}; // spectral weight allowed above omega_max
};

struct FiniteModeReservoir {
    int n_modes{0};
    std::vector<double> omegas;
    std::vector<double> couplings; // g_k >= 0
    std::vector<int> cutoffs;      // occupation cutoff d_k, local dimension d_k + 1
    double beta{1.0};
    double omega_max{0.0};

    long bath_dim() const;
    // Weighted thermal tail g_k^2 / sum g^2 * P(n_k > d_k) of each mode.
    std::vector<double> tail_mass() const;
    // Point masses of the free two-point function; `truncated` uses the moments of the truncated modes.
    SpectralMeasure measure(bool truncated) const;
};

// Smallest omega_max whose spectral tail is below rel_tail of the total weight.
double default_omega_max(const BathSpec& bath, double rel_tail = 1e-10);

FiniteModeReservoir discretize_bath(const BathSpec& bath, int n, double omega_max, const OracleOptions& opt = {});

// Free bath correlation of the untruncated discrete modes (converges to correlation_function).
cplx discrete_correlation(const FiniteModeReservoir& fm, double t);

double recurrence_window(const FiniteModeReservoir& fm);

// One diagonalization of the full Hamiltonian serves every time and the Gibbs state.
class ExactOracle {
public:
    ExactOracle(const SystemSpec& sys, const FiniteModeReservoir& fm, double lambda, const OracleOptions& opt = {});
    ~ExactOracle();
    ExactOracle(const ExactOracle&) = delete;
    ExactOracle& operator=(const ExactOracle&) = delete;

    Trajectory evolve(const cmat& rho_s0, const std::vector<double>& times) const;
    GibbsState reduced_gibbs() const;
    // Full system+bath state at time t (small dimensions only).
    cmat full_state(const cmat& rho_s0, double t) const;
    cmat initial_full_state(const cmat& rho_s0) const;
    cmat hamiltonian() const;

    long dim() const;
    const std::vector<std::string>& warnings() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

Trajectory exact_reduced_dynamics(const SystemSpec& sys, const FiniteModeReservoir& fm, double lambda,
                                  const cmat& rho_s0, const std::vector<double>& times, const OracleOptions& opt = {});

GibbsState exact_reduced_gibbs(const SystemSpec& sys, const FiniteModeReservoir& fm, double lambda,
                               const OracleOptions& opt = {});

// Thread count of the dense linear algebra (Eigen with OpenMP).
void set_backend_threads(int n);

} // namespace oqs
