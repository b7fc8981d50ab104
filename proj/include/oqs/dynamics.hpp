// dynamics.hpp - propagation, population tracks, trajectory comparison

#pragma once

#include <string>
#include <vector>

#include "oqs/davies.hpp"
#include "oqs/resonance.hpp"

namespace oqs {

enum class GeneratorTag { davies, resonance, renormalized, populations, oracle };

std::string to_string(GeneratorTag tag);

struct Trajectory {
    std::vector<double> times;
    std::vector<cmat> states;
    GeneratorTag tag{GeneratorTag::davies};
};

Trajectory propagate(const Superoperator& gen, const cmat& rho0, const std::vector<double>& times,
                     GeneratorTag tag = GeneratorTag::davies);

// rho_inf + W_t rho0.
Trajectory propagate_resonance(const ResonanceData& rd, const cmat& rho_inf, const cmat& rho0,
                               const std::vector<double>& times);

// Diagonals <phi_k, rho phi_k> per time.
std::vector<rvec> populations(const Trajectory& traj, const cmat& basis);

struct Comparison {
    std::vector<double> per_time;
    double sup{0.0};
};

// Trace-norm distances on a shared grid.
Comparison compare(const Trajectory& a, const Trajectory& b);

// l1 distance between population tracks on a shared grid.
Comparison compare_populations(const Trajectory& a, const Trajectory& b, const cmat& basis);

} // namespace oqs
