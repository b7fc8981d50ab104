// resonance.hpp - Bohr sectors, level-shift operators, resonance energies, and W_t

#pragma once

#include <utility>
#include <vector>

#include "oqs/davies.hpp"

namespace oqs {

struct BohrSector {
    double e{0.0};
    std::vector<std::pair<int, int>> pairs; // eigen-index pairs (k, l) with E_k - E_l = e
    int dim{0};
};

// Sorted by e. Throws if tol merges distinct Bohr frequencies.
std::vector<BohrSector> bohr_decompose(const SystemSpec& sys, double tol);

// Lambda_e = -i K_* restricted to sector e, in the |phi_k><phi_l| basis (observables).
struct LevelShift {
    BohrSector sector;
    cmat op;
};

std::vector<LevelShift> level_shift(const SystemSpec& sys, const DaviesGenerator& k,
                                    const std::vector<BohrSector>& sectors);

struct ResonanceEntry {
    double e{0.0};
    int s{1};
    cplx a{0.0};
    cplx epsilon{0.0};
    Superoperator Q; // spectral projection acting on observables
    Superoperator P; // its dual acting on states
};

struct ResonanceData {
    std::vector<ResonanceEntry> entries; // entries[0] is (e, s) = (0, 1)
    double lambda{0.0};
    double gamma_lambda{0.0};
    double gamma_fgr{0.0};
    bool fgr_holds{false};
    cmat rho_beta; // e^{-beta H_S} / Z
};

ResonanceData resonance_energies(const SystemSpec& sys, const std::vector<LevelShift>& lso, double lambda,
                                 double beta, double cond_limit = 1e10);

// Convenience: Davies generator, sectors, level shifts and resonances in one call.
ResonanceData analyze_resonances(const SystemSpec& sys, const BathSpec& bath, double lambda,
                                 double bohr_tol = 1e-9);

// W_t = sum over (e, s) != (0, 1) of e^{i t eps} P_e^(s).
Superoperator w_map(const ResonanceData& rd, double t);

// Pauli rate matrix R (dp/dt = R p) in the H_S eigenbasis from the jump list.
rmat pauli_rate_matrix(const SystemSpec& sys, const DaviesGenerator& k);

} // namespace oqs
