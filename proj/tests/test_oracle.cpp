#include <doctest.h>

#include <cmath>
#include <numbers>

#include "common.hpp"
#include "oqs/equilibrium.hpp"
#include "oqs/oracle.hpp"

using namespace oqs;
using namespace oqs::testing;

namespace {

// Classical RK4 on the full von Neumann equation.
cmat rk4(const cmat& h, cmat rho, double t, int steps) {
    const double dt = t / steps;
    auto f = [&](const cmat& r) { return cmat(-I * (h * r - r * h)); };
    for (int i = 0; i < steps; ++i) {
        const cmat k1 = f(rho);
        const cmat k2 = f(rho + 0.5 * dt * k1);
        const cmat k3 = f(rho + 0.5 * dt * k2);
        const cmat k4 = f(rho + dt * k3);
        rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return rho;
}

FiniteModeReservoir one_mode() {
    FiniteModeReservoir fm;
    fm.n_modes = 1;
    fm.omegas = {1.2};
    fm.couplings = {0.5};
    fm.cutoffs = {2};
    fm.beta = 3.0;
    fm.omega_max = 2.4;
    return fm;
}

} // namespace

TEST_CASE("oracle agrees with an independent ODE integration") {
    const SystemSpec s = qubit(1.0);
    const FiniteModeReservoir fm = one_mode();
    OracleOptions opt;
    opt.max_tail_mass = 1e-3;
    const double lambda = 0.1;
    const ExactOracle o(s, fm, lambda, opt);
    CHECK(o.dim() == 6);
    // H = H_S + sum w a^+a + lambda G (x) g (a + a^+)/sqrt2, assembled here independently
    cmat a = cmat::Zero(3, 3);
    a(0, 1) = 1.0;
    a(1, 2) = std::sqrt(2.0);
    const cmat num = a.adjoint() * a;
    const cmat i2 = cmat::Identity(2, 2), i3 = cmat::Identity(3, 3);
    auto kron = [](const cmat& x, const cmat& y) {
        cmat out(x.rows() * y.rows(), x.cols() * y.cols());
        for (Eigen::Index r = 0; r < x.rows(); ++r)
            for (Eigen::Index c = 0; c < x.cols(); ++c) out.block(r * y.rows(), c * y.cols(), y.rows(), y.cols()) = x(r, c) * y;
        return out;
    };
    const cmat h = kron(s.h_sys, i3) + 1.2 * kron(i2, num) + lambda * 0.5 / std::sqrt(2.0) * kron(s.coupling, a + a.adjoint());
    CHECK(max_abs(o.hamiltonian() - h) < 1e-15);

    const cmat rho_s = resolve_state("plus", s, 1.0);
    const cmat full0 = o.initial_full_state(rho_s);
    const std::vector<double> times{0.0, 0.8, 2.5};
    const Trajectory tr = o.evolve(rho_s, times);
    for (size_t k = 0; k < times.size(); ++k) {
        const cmat full = rk4(h, full0, times[k], 4000);
        cmat red = cmat::Zero(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int b = 0; b < 3; ++b) red(i, j) += full(i * 3 + b, j * 3 + b);
        CHECK(max_abs(red - tr.states[k]) < 1e-8);
    }
}

TEST_CASE("oracle at zero coupling is the free evolution and bare Gibbs state") {
    const SystemSpec s = three_level(1.0, 2.5);
    const BathSpec b = family();
    OracleOptions opt;
    opt.max_tail_mass = 0.05;
    const FiniteModeReservoir fm = discretize_bath(b, 3, default_omega_max(b), opt);
    const ExactOracle o(s, fm, 0.0, opt);
    std::mt19937_64 rng(2);
    const cmat rho = random_density(3, rng);
    const auto tr = o.evolve(rho, {1.7});
    const auto fr = propagate({3, commutator_super(s.h_sys)}, rho, {1.7});
    CHECK(max_abs(tr.states[0] - fr.states[0]) < 1e-12);
    CHECK(max_abs(o.reduced_gibbs().rho - gibbs(s.h_sys, 1.0).rho) < 1e-12);
}

TEST_CASE("discretization reproduces the bath correlation") {
    const BathSpec b = family();
    const double wmax = default_omega_max(b);
    CHECK(wmax == doctest::Approx(13.2).epsilon(0.02));
    const FiniteModeReservoir fm = discretize_bath(b, 2000, wmax);
    for (double t : {0.0, 0.5, 2.0}) CHECK(std::abs(discrete_correlation(fm, t) - correlation_function(b, t)) < 1e-4);
    const FiniteModeReservoir f6 = discretize_bath(b, 6, wmax);
    CHECK(recurrence_window(f6) == doctest::Approx(4 * std::numbers::pi / (wmax / 6)).epsilon(1e-12));
}

TEST_CASE("cutoff selection and guards") {
    const BathSpec b = family();
    const double wmax = default_omega_max(b);
    const FiniteModeReservoir f6 = discretize_bath(b, 6, wmax);
    CHECK(f6.cutoffs == std::vector<int>{3, 3, 1, 1, 1, 1});
    CHECK(f6.bath_dim() == 256);
    const FiniteModeReservoir f8 = discretize_bath(b, 8, wmax);
    CHECK(f8.bath_dim() * 2 <= 4096);
    // the default leakage bound cannot be met at cutoff 3 for the lowest mode
    try {
        ExactOracle o(qubit(), f6, 0.05);
        FAIL("leakage not reported");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("cutoff leakage") != std::string::npos);
    }
    OracleOptions small;
    small.max_tail_mass = 0.05;
    small.dim_cap = 100;
    CHECK_THROWS_WITH_AS(ExactOracle(qubit(), f6, 0.05, small), doctest::Contains("exceeds the cap"), std::runtime_error);
    CHECK_THROWS(discretize_bath(b, 6, 3.0));
}

TEST_CASE("oracle states stay physical") {
    const BathSpec b = family();
    OracleOptions opt;
    opt.max_tail_mass = 0.05;
    const FiniteModeReservoir fm = discretize_bath(b, 4, default_omega_max(b), opt);
    const SystemSpec s = qubit();
    const auto tr = exact_reduced_dynamics(s, fm, 0.08, resolve_state("plus", s, 1.0), linspace(0, 0.5 * recurrence_window(fm), 7), opt);
    for (const auto& r : tr.states) {
        CHECK(std::abs(r.trace() - 1.0) < 1e-12);
        CHECK(herm_eig(r).values.minCoeff() > -1e-12);
    }
}
