#include <doctest.h>

#include <cmath>
#include <numbers>

#include "common.hpp"

using namespace oqs;
using namespace oqs::testing;

TEST_CASE("make_system shifts, sorts and rejects non-hermitian input") {
    cmat h(2, 2);
    h << 3.0, 0.5, 0.5, 1.0;
    const SystemSpec s = make_system(h, named_coupling("sigma_z", 2));
    CHECK(s.eigvals(0) == doctest::Approx(0.0));
    CHECK(s.eigvals(1) > s.eigvals(0));
    CHECK(max_abs(s.eigvecs * s.eigvals.cast<cplx>().asDiagonal() * s.eigvecs.adjoint() - s.h_sys) < 1e-10);
    CHECK(max_abs(s.eigvecs.adjoint() * s.eigvecs - cmat::Identity(2, 2)) < 1e-12);
    cmat bad = h;
    bad(0, 1) = 0.6;
    try {
        make_system(bad, named_coupling("sigma_x", 2));
        FAIL("accepted a non-hermitian Hamiltonian");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("hermiticity") != std::string::npos);
    }
}

TEST_CASE("spectral density of the analytic family") {
    const BathSpec b = family(0, 1, 1.0, 1.0);
    CHECK(spectral_density(b, 1.0) == doctest::Approx(std::numbers::pi / 2 * std::exp(-2.0)).epsilon(1e-14));
    const BathSpec b2 = family(1, 2, 1.0, 2.0);
    CHECK(spectral_density(b2, 0.8) == doctest::Approx(std::numbers::pi * std::pow(0.8, 3) * std::exp(-2 * 0.64)).epsilon(1e-14));
    CHECK_THROWS_AS(spectral_density(b, -1.0), std::domain_error);
}

TEST_CASE("angular form factor integrates to the isotropic family") {
    const BathSpec b = family(0, 1, 1.0, 1.0);
    auto g2 = [](double w, double, double) { return std::pow(w, -1.0) * std::exp(-2 * w) / (4 * std::numbers::pi); };
    for (double w : {0.3, 1.0, 2.2}) CHECK(angular_spectral_density(g2, w) == doctest::Approx(spectral_density(b, w)).epsilon(1e-10));
}

TEST_CASE("h_hat obeys detailed balance and has the ohmic zero-frequency limit") {
    for (int n : {0, 1})
        for (double beta : {0.5, 1.0, 3.0}) {
            const BathSpec b = family(n, 1, beta);
            for (double u : {0.01, 0.5, 1.0, 4.0, 9.0})
                CHECK(std::abs(h_hat(b, -u) - std::exp(-beta * u) * h_hat(b, u)) <= 1e-12 * h_hat(b, u));
        }
    CHECK(h_hat(family(0, 1, 2.0), 0.0) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
    CHECK(h_hat(family(1, 1, 2.0), 0.0) == 0.0);
    // independent high-precision quadrature
    CHECK(h_hat(family(), 1.0) == doctest::Approx(0.33630319853506736733).epsilon(1e-14));
    CHECK(h_hat(family(), -1.0) == doctest::Approx(0.12371903274124920311).epsilon(1e-14));
}

TEST_CASE("correlation function matches independent quadrature") {
    const BathSpec b = family();
    const cplx c0 = correlation_function(b, 0.0);
    CHECK(c0.real() == doctest::Approx(0.25996703342411321824).epsilon(1e-9));
    CHECK(std::abs(c0.imag()) < 1e-12);
    const cplx c1 = correlation_function(b, 1.0);
    CHECK(c1.real() == doctest::Approx(0.20150004831138189315).epsilon(1e-9));
    CHECK(c1.imag() == doctest::Approx(-0.04).epsilon(1e-9));
    const cplx cm = correlation_function(b, -1.0);
    CHECK(std::abs(cm - std::conj(c1)) < 1e-12);
}

TEST_CASE("principal value against the Dawson function") {
    auto f = [](double u) { return std::exp(-u * u); };
    const double v = principal_value(f, 1.0, {-12.0, 12.0});
    CHECK(v == doctest::Approx(1.9074421882417551644).epsilon(1e-10));
}

TEST_CASE("Lamb shift kernel matches independent quadrature") {
    const BathSpec b = family();
    CHECK(lamb_shift_kernel(b, 1.0) == doctest::Approx(0.26274040570225454339).epsilon(1e-9));
    CHECK(lamb_shift_kernel(b, -1.0) == doctest::Approx(-0.25478757403268057695).epsilon(1e-9));
    CHECK(lamb_shift_kernel(b, 0.5) == doctest::Approx(0.27564238308767589102).epsilon(1e-9));
    CHECK(lamb_shift_kernel(b, 2.5) == doctest::Approx(0.12840000174963126471).epsilon(1e-9));
}

TEST_CASE("tabulated bath reproduces the analytic one") {
    const BathSpec a = family();
    std::vector<double> w, j;
    for (int i = 0; i <= 400; ++i) {
        w.push_back(i * 0.05);
        j.push_back(spectral_density(a, w.back()));
    }
    BathSpec t;
    t.beta = 1.0;
    t.form_factor = make_tabulated(w, j);
    validate_bath(t);
    for (double u : {0.33, 1.0, 2.71}) CHECK(h_hat(t, u) == doctest::Approx(h_hat(a, u)).epsilon(1e-4));
    CHECK(h_hat(t, 0.0) == doctest::Approx(h_hat(a, 0.0)).epsilon(2e-2)); // O(h^2) end slope
    CHECK(lamb_shift_kernel(t, 1.0) == doctest::Approx(lamb_shift_kernel(a, 1.0)).epsilon(1e-3));
}

TEST_CASE("bath validation") {
    CHECK_THROWS_AS(validate_bath(family(0, 3)), std::invalid_argument);
    CHECK_THROWS_AS(validate_bath(family(0, 1, -1.0)), std::invalid_argument);
    CHECK_THROWS(make_tabulated({0.0, 1.0}, {0.0, 1.0}));
}

TEST_CASE("support cutoff bounds the numerical support") {
    const BathSpec b = family();
    const double u = support_cutoff(b);
    CHECK(u > 5.0);
    CHECK(h_hat(b, u) < 1e-12 * h_hat(b, 1.0));
}
