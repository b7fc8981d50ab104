#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "oqs/resonance.hpp"

using namespace oqs;
using namespace oqs::testing;

TEST_CASE("Bohr sectors of a three-level system") {
    const SystemSpec s = three_level(1.0, 2.5);
    const auto sec = bohr_decompose(s, 1e-9);
    CHECK(sec.size() == 7);
    int total = 0;
    for (const auto& e : sec) total += e.dim;
    CHECK(total == 9);
    const auto zero = std::find_if(sec.begin(), sec.end(), [](const BohrSector& x) { return x.e == 0.0; });
    REQUIRE(zero != sec.end());
    CHECK(zero->dim == 3);
}

TEST_CASE("Bohr decomposition refuses an ambiguous tolerance") {
    const SystemSpec s = three_level(1.0, 1.0 + 1e-7);
    CHECK_THROWS(bohr_decompose(s, 1e-6));
    CHECK_NOTHROW(bohr_decompose(s, 1e-9));
}

TEST_CASE("qubit level shifts in closed form") {
    const SystemSpec s = qubit(1.0);
    const BathSpec b = family();
    const ResonanceData rd = analyze_resonances(s, b, 0.1);
    REQUIRE(rd.entries.size() == 4);
    const double hp = h_hat(b, 1.0), hm = h_hat(b, -1.0);
    const double sp = lamb_shift_kernel(b, 1.0), sm = lamb_shift_kernel(b, -1.0);
    CHECK(rd.gamma_fgr == doctest::Approx((hp + hm) / 2).epsilon(1e-12));
    CHECK(rd.gamma_lambda == doctest::Approx(0.01 * (hp + hm) / 2).epsilon(1e-12));
    CHECK(rd.fgr_holds);
    CHECK(std::abs(rd.entries[0].epsilon) == 0.0);
    for (const auto& en : rd.entries) {
        if (en.e == 0.0 && en.s == 2) CHECK(en.a.imag() == doctest::Approx(hp + hm).epsilon(1e-12));
        if (en.e != 0.0) {
            CHECK(en.a.imag() == doctest::Approx((hp + hm) / 2).epsilon(1e-12));
            CHECK(std::abs(en.a.real()) == doctest::Approx(sp - sm).epsilon(1e-9));
            CHECK(en.epsilon.real() * en.e > 0.0);
        }
    }
}

TEST_CASE("lambda = 0 gives epsilon = e") {
    const ResonanceData rd = analyze_resonances(three_level(1.0, 2.5), family(), 0.0);
    CHECK(rd.entries.size() == 9);
    for (const auto& en : rd.entries) CHECK(std::abs(en.epsilon - cplx(en.e)) == 0.0);
}

TEST_CASE("projections, W_t semigroup and spectrum") {
    for (const SystemSpec& s : {qubit(1.0), three_level(1.0, 2.5), three_level(0.8, 2.1, "sigma_z")}) {
        const BathSpec b = family();
        const double lambda = 0.1;
        const ResonanceData rd = analyze_resonances(s, b, lambda);
        const int n2 = s.dim * s.dim;
        cmat sum = cmat::Zero(n2, n2);
        for (size_t i = 0; i < rd.entries.size(); ++i) {
            sum += rd.entries[i].Q.matrix;
            for (size_t j = 0; j < rd.entries.size(); ++j) {
                const cmat p = rd.entries[i].Q.matrix * rd.entries[j].Q.matrix;
                CHECK(max_abs(i == j ? cmat(p - rd.entries[i].Q.matrix) : p) < 1e-9);
            }
            CHECK(max_abs(rd.entries[i].P.matrix - dual(rd.entries[i].Q.matrix, s.dim)) == 0.0);
        }
        CHECK(max_abs(sum - cmat::Identity(n2, n2)) < 1e-9);
        for (auto [t, u] : {std::pair{0.3, 2.0}, std::pair{7.0, 11.5}})
            CHECK(max_abs(w_map(rd, t + u).matrix - w_map(rd, u).matrix * w_map(rd, t).matrix) < 1e-9);
        if (rd.gamma_fgr > 0.0) {
            const double t = 50.0 / (lambda * lambda * rd.gamma_fgr);
            CHECK(max_abs(w_map(rd, t).matrix) <= 1e-12);
        }
        // eigenvalues of the full generator are i*epsilon
        const cvec ev = Eigen::ComplexEigenSolver<cmat>(build_davies(s, b, lambda).total.matrix).eigenvalues();
        std::vector<cplx> res;
        for (const auto& en : rd.entries) res.push_back(I * en.epsilon);
        for (Eigen::Index k = 0; k < ev.size(); ++k) {
            auto it = std::min_element(res.begin(), res.end(),
                                       [&](cplx a, cplx c) { return std::abs(a - ev(k)) < std::abs(c - ev(k)); });
            CHECK(std::abs(*it - ev(k)) < 1e-8);
            res.erase(it);
        }
    }
}

TEST_CASE("the stationary projection maps every state to rho_beta") {
    const SystemSpec s = three_level(1.0, 2.5);
    const ResonanceData rd = analyze_resonances(s, family(), 0.1);
    std::mt19937_64 rng(9);
    const cmat r = random_density(3, rng);
    CHECK(max_abs(rd.entries[0].P.apply(r) - rd.rho_beta) < 1e-12);
}

TEST_CASE("level shift of an uncoupled sector is structural zero") {
    const SystemSpec s = qubit(1.0, "zero");
    const ResonanceData rd = analyze_resonances(s, family(), 0.1);
    CHECK(rd.gamma_fgr == 0.0);
    CHECK_FALSE(rd.fgr_holds);
}
