// davies.cpp - Davies generator assembly and CPT diagnostics

#include "oqs/davies.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace oqs {

Superoperator Superoperator::identity(int n) {
    return {n, cmat::Identity(n * n, n * n)};
}

Superoperator Superoperator::from_map(int n, const std::function<cmat(const cmat&)>& f) {
    Superoperator s{n, cmat::Zero(n * n, n * n)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cmat e = cmat::Zero(n, n);
            e(i, j) = 1.0;
            s.matrix.col(i * n + j) = vec(f(e));
        }
    return s;
}

cmat Superoperator::apply(const cmat& rho) const { return unvec(matrix * vec(rho), dim); }

Superoperator Superoperator::then(const Superoperator& next) const {
    if (next.dim != dim) throw std::invalid_argument("superoperator dimension mismatch");
    return {dim, next.matrix * matrix};
}

Superoperator Superoperator::dual() const { return {dim, oqs::dual(matrix, dim)}; }

std::vector<Level> spectral_levels(const SystemSpec& sys, double rel_tol) {
    const double scale = sys.eigvals.cwiseAbs().maxCoeff();
    const double tol = rel_tol * std::max(scale, 1e-300);
    std::vector<Level> levels;
    for (int j = 0; j < sys.dim; ++j) {
        if (!levels.empty() && std::abs(sys.eigvals(j) - sys.eigvals(levels.back().indices.back())) <= tol) {
            levels.back().indices.push_back(j);
        } else {
            levels.push_back({});
            levels.back().indices.push_back(j);
        }
    }
    for (auto& lv : levels) {
        lv.projector = cmat::Zero(sys.dim, sys.dim);
        double e = 0.0;
        for (int j : lv.indices) {
            lv.projector += sys.eigvecs.col(j) * sys.eigvecs.col(j).adjoint();
            e += sys.eigvals(j);
        }
        lv.energy = e / static_cast<double>(lv.indices.size());
    }
    return levels;
}

cmat assemble_gksl(const std::vector<Jump>& jumps, const cmat& lamb_shift) {
    const Eigen::Index n = lamb_shift.rows();
    const cmat id = cmat::Identity(n, n);
    cmat k = -I * (sandwich(lamb_shift, id) - sandwich(id, lamb_shift));
    for (const auto& j : jumps) {
        if (j.rate == 0.0) continue;
        const cmat ad = j.op.adjoint();
        const cmat ada = ad * j.op;
        k += j.rate * (sandwich(j.op, ad) - 0.5 * sandwich(ada, id) - 0.5 * sandwich(id, ada));
    }
    return k;
}

DaviesGenerator build_davies(const SystemSpec& sys, const BathSpec& bath, double lambda, double level_tol) {
    const int n = sys.dim;
    const auto levels = spectral_levels(sys, level_tol);
    const cmat& g = sys.coupling;
    const double scale = std::max(sys.eigvals.cwiseAbs().maxCoeff(), 1e-300);
    const double tol = level_tol * scale;

    DaviesGenerator d;
    d.lambda = lambda;

    // omega = 0 channel: A = sum_k P_k G P_k
    cmat a0 = cmat::Zero(n, n);
    for (const auto& lv : levels) a0 += lv.projector * g * lv.projector;
    d.jumps.push_back({0.0, h_hat(bath, 0.0), a0});

    // transitions between distinct levels, grouped by Bohr frequency
    std::vector<Jump> transitions;
    for (const auto& from : levels)
        for (const auto& to : levels) {
            if (&from == &to) continue;
            const double w = from.energy - to.energy;
            const cmat a = to.projector * g * from.projector;
            auto it = std::find_if(transitions.begin(), transitions.end(),
                                   [&](const Jump& j) { return std::abs(j.omega - w) <= tol; });
            if (it == transitions.end())
                transitions.push_back({w, 0.0, a});
            else
                it->op += a;
        }
    std::sort(transitions.begin(), transitions.end(), [](const Jump& x, const Jump& y) { return x.omega < y.omega; });
    for (auto& j : transitions) {
        j.rate = h_hat(bath, j.omega);
        d.jumps.push_back(j);
    }

    // Lamb shift: sum over level pairs of S(E_k - E_l) P_k G P_l G P_k
    d.lamb_shift = cmat::Zero(n, n);
    std::vector<std::pair<double, double>> s_cache;
    for (const auto& k : levels)
        for (const auto& l : levels) {
            const cmat block = k.projector * g * l.projector * g * k.projector;
            if (max_abs(block) == 0.0) continue;
            const double w = k.energy - l.energy;
            auto it = std::find_if(s_cache.begin(), s_cache.end(),
                                   [&](const auto& p) { return std::abs(p.first - w) <= tol; });
            double s;
            if (it == s_cache.end()) {
                s = lamb_shift_kernel(bath, w);
                s_cache.emplace_back(w, s);
            } else {
                s = it->second;
            }
            d.lamb_shift += s * block;
        }
    d.lamb_shift = hermitize(d.lamb_shift);

    d.k_super = {n, assemble_gksl(d.jumps, d.lamb_shift)};
    d.liouvillian = {n, commutator_super(sys.h_sys)};
    d.total = {n, d.liouvillian.matrix + lambda * lambda * d.k_super.matrix};
    return d;
}

cmat to_choi(const Superoperator& s) {
    const int n = s.dim;
    cmat c = cmat::Zero(n * n, n * n);
    // C = sum_ij S(|i><j|) (x) |i><j|
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) c(a * n + i, b * n + j) = s.matrix(a * n + b, i * n + j);
    return c;
}

CptReport cpt_report(const Superoperator& s, std::uint64_t seed) {
    const int n = s.dim;
    CptReport r;
    const cmat choi = hermitize(to_choi(s));
    r.min_choi_eig = herm_eig(choi).values.minCoeff();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx tr = 0.0;
            for (int a = 0; a < n; ++a) tr += s.matrix(a * n + a, i * n + j);
            r.trace_dev = std::max(r.trace_dev, std::abs(tr - (i == j ? 1.0 : 0.0)));
        }
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 8; ++k) {
        const cmat x = hermitize(random_matrix(n, rng));
        r.herm_dev = std::max(r.herm_dev, hermiticity_deviation(s.apply(x)));
    }
    return r;
}

} // namespace oqs
