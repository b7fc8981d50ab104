// davies.hpp - Davies generator, superoperators, and complete-positivity diagnostics

#pragma once

#include <cstdint>
#include <vector>

#include "oqs/linalg.hpp"
#include "oqs/model.hpp"

namespace oqs {

// N^2 x N^2 matrix acting on row-major vec(rho).
struct Superoperator {
    int dim{0};
    cmat matrix;

    static Superoperator identity(int n);
    static Superoperator from_map(int n, const std::function<cmat(const cmat&)>& f);
    cmat apply(const cmat& rho) const;
    Superoperator then(const Superoperator& next) const; // next after this
    Superoperator dual() const;                          // Heisenberg picture
};

// Eigenspace of H_S: energy and orthogonal projector.
struct Level {
    double energy{0.0};
    cmat projector;
    std::vector<int> indices;
};

// Groups eigenvalues closer than rel_tol * ||H_S||.
std::vector<Level> spectral_levels(const SystemSpec& sys, double rel_tol = 1e-9);

struct Jump {
    double omega{0.0}; // Bohr frequency E_k - E_l released by the jump
    double rate{0.0};  // h_hat(omega)
    cmat op;
};

struct DaviesGenerator {
    Superoperator k_super;   // K
    cmat lamb_shift;         // H_LS
    std::vector<Jump> jumps; // includes the omega = 0 dephasing channel
    double lambda{0.0};
    Superoperator liouvillian; // -i[H_S, .]
    Superoperator total;       // -i[H_S, .] + lambda^2 K
};

DaviesGenerator build_davies(const SystemSpec& sys, const BathSpec& bath, double lambda,
                             double level_tol = 1e-9);

// GKSL assembly: sum_j rate_j (A rho A^+ - {A^+A, rho}/2) - i[H_LS, rho].
cmat assemble_gksl(const std::vector<Jump>& jumps, const cmat& lamb_shift);

cmat to_choi(const Superoperator& s);

struct CptReport {
    double min_choi_eig{0.0};
    double trace_dev{0.0};
    double herm_dev{0.0};
};

CptReport cpt_report(const Superoperator& s, std::uint64_t seed = 7);

} // namespace oqs
