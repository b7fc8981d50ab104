#pragma once

#include <random>

#include "oqs/config.hpp"
#include "oqs/davies.hpp"

namespace oqs::testing {

inline SystemSpec qubit(double delta = 1.0, const char* coupling = "sigma_x") {
    cmat h = cmat::Zero(2, 2);
    h(1, 1) = delta;
    return make_system(h, named_coupling(coupling, 2));
}

inline SystemSpec three_level(double e1 = 1.0, double e2 = 2.5, const char* coupling = "sigma_x") {
    cmat h = cmat::Zero(3, 3);
    h(1, 1) = e1;
    h(2, 2) = e2;
    return make_system(h, named_coupling(coupling, 3));
}

inline BathSpec family(int n = 0, int m = 1, double beta = 1.0, double c1 = 1.0) {
    BathSpec b;
    b.beta = beta;
    b.form_factor = AnalyticFamily{n, m, c1};
    return b;
}

} // namespace oqs::testing
