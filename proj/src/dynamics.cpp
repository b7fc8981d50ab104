// dynamics.cpp - propagation and comparison

#include "oqs/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace oqs {

std::string to_string(GeneratorTag tag) {
    switch (tag) {
    case GeneratorTag::davies: return "davies";
    case GeneratorTag::resonance: return "resonance";
    case GeneratorTag::renormalized: return "M";
    case GeneratorTag::populations: return "M_d";
    case GeneratorTag::oracle: return "oracle";
    }
    return "unknown";
}

Trajectory propagate(const Superoperator& gen, const cmat& rho0, const std::vector<double>& times, GeneratorTag tag) {
    if (rho0.rows() != gen.dim || rho0.cols() != gen.dim) throw std::invalid_argument("propagate: state dimension mismatch");
    const Exponential ex(gen.matrix);
    const cvec v0 = vec(rho0);
    Trajectory tr;
    tr.tag = tag;
    tr.times = times;
    tr.states.reserve(times.size());
    for (double t : times) {
        const cvec v = ex.at(t) * v0;
        if (!v.allFinite()) throw std::runtime_error("propagate: non-finite state at t = " + std::to_string(t));
        tr.states.push_back(unvec(v, gen.dim));
    }
    return tr;
}

Trajectory propagate_resonance(const ResonanceData& rd, const cmat& rho_inf, const cmat& rho0,
                               const std::vector<double>& times) {
    Trajectory tr;
    tr.tag = GeneratorTag::resonance;
    tr.times = times;
    for (double t : times) tr.states.push_back(rho_inf + w_map(rd, t).apply(rho0));
    return tr;
}

std::vector<rvec> populations(const Trajectory& traj, const cmat& basis) {
    std::vector<rvec> out;
    out.reserve(traj.states.size());
    for (const auto& rho : traj.states) out.push_back((basis.adjoint() * rho * basis).diagonal().real());
    return out;
}

namespace {

void check_grid(const Trajectory& a, const Trajectory& b) {
    if (a.times.size() != b.times.size()) throw std::invalid_argument("compare: time grid mismatch");
    for (size_t i = 0; i < a.times.size(); ++i)
        if (std::abs(a.times[i] - b.times[i]) > 1e-12 * std::max(1.0, std::abs(a.times[i])))
            throw std::invalid_argument("compare: time grid mismatch");
}

} // namespace

Comparison compare(const Trajectory& a, const Trajectory& b) {
    check_grid(a, b);
    Comparison c;
    for (size_t i = 0; i < a.times.size(); ++i) {
        const double d = trace_norm(a.states[i] - b.states[i]);
        c.per_time.push_back(d);
        c.sup = std::max(c.sup, d);
    }
    return c;
}

Comparison compare_populations(const Trajectory& a, const Trajectory& b, const cmat& basis) {
    check_grid(a, b);
    const auto pa = populations(a, basis), pb = populations(b, basis);
    Comparison c;
    for (size_t i = 0; i < pa.size(); ++i) {
        const double d = (pa[i] - pb[i]).cwiseAbs().sum();
        c.per_time.push_back(d);
        c.sup = std::max(c.sup, d);
    }
    return c;
}

} // namespace oqs
