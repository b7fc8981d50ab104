// resonance.cpp - level-shift spectra from the sector blocks of K

#include "oqs/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace oqs {

namespace {

// Maps eigenbasis coordinates to computational coordinates: X = U X' U^+.
cmat basis_change(const SystemSpec& sys) { return sandwich(sys.eigvecs, sys.eigvecs.adjoint()); }

struct Eig {
    cvec values;
    cmat right; // columns
    cmat left;  // rows, left * right = 1
};

Eig diagonalize(const cmat& b, double cond_limit, double e) {
    Eig out;
    if (b.rows() == 0) return out;
    Eigen::ComplexEigenSolver<cmat> es(b);
    if (es.info() != Eigen::Success) throw std::runtime_error("level shift eigensolver failed");
    const double cond = eigvec_condition(es.eigenvectors());
    if (!(cond <= cond_limit)) {
        std::ostringstream msg;
        msg << "non-diagonalizable level shift operator in sector e=" << e << " (eigenvector condition " << cond << ")";
        throw std::runtime_error(msg.str());
    }
    // deterministic order: by Im a, then Re a
    std::vector<Eigen::Index> order(b.rows());
    for (Eigen::Index i = 0; i < b.rows(); ++i) order[i] = i;
    const cvec& ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        if (std::abs(ev(x).imag() - ev(y).imag()) > 1e-12 * scale) return ev(x).imag() < ev(y).imag();
        return ev(x).real() < ev(y).real();
    });
    out.values.resize(b.rows());
    out.right.resize(b.rows(), b.cols());
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
        out.values(i) = ev(order[i]);
        out.right.col(i) = es.eigenvectors().col(order[i]);
    }
    out.left = out.right.inverse();
    return out;
}

} // namespace

std::vector<BohrSector> bohr_decompose(const SystemSpec& sys, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("bohr_decompose: tol must be positive");
    const int n = sys.dim;
    struct Item {
        double e;
        int k, l;
    };
    std::vector<Item> items;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) items.push_back({sys.eigvals(k) - sys.eigvals(l), k, l});
    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.e < b.e; });

    const double scale = std::max(1.0, sys.eigvals.cwiseAbs().maxCoeff());
    const double floor = 1e-13 * scale; // below this a gap is roundoff, not structure
    std::vector<BohrSector> sectors;
    double prev = 0.0;
    for (const auto& it : items) {
        const double gap = sectors.empty() ? 0.0 : it.e - prev;
        if (!sectors.empty() && gap > floor && gap <= tol) {
            std::ostringstream msg;
            msg << "ambiguous Bohr decomposition: nonzero gap " << gap << " is below tol " << tol;
            throw std::invalid_argument(msg.str());
        }
        if (!sectors.empty() && gap <= tol)
            sectors.back().pairs.emplace_back(it.k, it.l);
        else
            sectors.push_back({it.e, {{it.k, it.l}}, 0});
        prev = it.e;
    }
    for (auto& s : sectors) {
        s.dim = static_cast<int>(s.pairs.size());
        double sum = 0.0;
        bool has_diag = false;
        for (auto [k, l] : s.pairs) {
            sum += sys.eigvals(k) - sys.eigvals(l);
            has_diag |= (k == l);
        }
        s.e = has_diag ? 0.0 : sum / s.dim;
    }
    return sectors;
}

std::vector<LevelShift> level_shift(const SystemSpec& sys, const DaviesGenerator& k,
                                    const std::vector<BohrSector>& sectors) {
    const int n = sys.dim;
    const cmat& kk = k.k_super.matrix;
    const cmat& ls = k.liouvillian.matrix;
    const double comm = (ls * kk - kk * ls).norm();
    if (comm > 1e-9 * ls.norm() * kk.norm() + 1e-300)
        throw std::runtime_error("structural: K does not commute with -i[H_S, .] (relative commutator " +
                                 std::to_string(comm / (ls.norm() * kk.norm())) + ")");

    const cmat ub = basis_change(sys);
    const cmat kstar = ub.adjoint() * dual(kk, n) * ub; // Heisenberg, eigenbasis coordinates

    std::vector<int> owner(n * n, -1);
    for (size_t s = 0; s < sectors.size(); ++s)
        for (auto [a, b] : sectors[s].pairs) owner[a * n + b] = static_cast<int>(s);
    double leak = 0.0;
    for (int r = 0; r < n * n; ++r)
        for (int c = 0; c < n * n; ++c)
            if (owner[r] != owner[c]) leak = std::max(leak, std::abs(kstar(r, c)));
    if (leak > 1e-9 * std::max(1.0, max_abs(kstar)))
        throw std::runtime_error("structural: K mixes Bohr sectors (coarse tolerance?)");

    std::vector<LevelShift> out;
    for (const auto& sec : sectors) {
        cmat op(sec.dim, sec.dim);
        for (int i = 0; i < sec.dim; ++i)
            for (int j = 0; j < sec.dim; ++j) {
                const auto [a, b] = sec.pairs[i];
                const auto [c, d] = sec.pairs[j];
                op(i, j) = -I * kstar(a * n + b, c * n + d);
            }
        out.push_back({sec, op});
    }
    return out;
}

ResonanceData resonance_energies(const SystemSpec& sys, const std::vector<LevelShift>& lso, double lambda,
                                 double beta, double cond_limit) {
    const int n = sys.dim;
    const cmat ub = basis_change(sys);
    const double l2 = lambda * lambda;

    ResonanceData rd;
    rd.lambda = lambda;
    rvec p(n);
    for (int j = 0; j < n; ++j) p(j) = std::exp(-beta * sys.eigvals(j));
    p /= p.sum();
    rd.rho_beta = sys.eigvecs * p.cast<cplx>().asDiagonal() * sys.eigvecs.adjoint();

    auto lift = [&](const BohrSector& sec, const cvec& right, const cvec& left) {
        cmat qe = cmat::Zero(n * n, n * n);
        for (int i = 0; i < sec.dim; ++i)
            for (int j = 0; j < sec.dim; ++j) {
                const auto [a, b] = sec.pairs[i];
                const auto [c, d] = sec.pairs[j];
                qe(a * n + b, c * n + d) = right(i) * left(j);
            }
        Superoperator q{n, ub * qe * ub.adjoint()};
        return q;
    };
    auto add = [&](const BohrSector& sec, int s, cplx a, const cvec& right, const cvec& left) {
        ResonanceEntry en;
        en.e = sec.e;
        en.s = s;
        en.a = a;
        en.epsilon = sec.e + l2 * a;
        en.Q = lift(sec, right, left);
        en.P = en.Q.dual();
        rd.entries.push_back(std::move(en));
    };

    // sector e = 0 first, deflating the invariant pair (identity, Gibbs functional)
    auto zero = std::find_if(lso.begin(), lso.end(), [](const LevelShift& l) { return l.sector.e == 0.0; });
    if (zero == lso.end()) throw std::logic_error("no e = 0 sector");
    {
        const BohrSector& sec = zero->sector;
        const int m = sec.dim;
        cvec one = cvec::Zero(m), w = cvec::Zero(m);
        for (int i = 0; i < m; ++i)
            if (sec.pairs[i].first == sec.pairs[i].second) {
                one(i) = 1.0;
                w(i) = p(sec.pairs[i].first);
            }
        add(sec, 1, 0.0, one, w);
        if (m > 1) {
            // orthonormal basis of {x : w^T x = 0}
            Eigen::HouseholderQR<cmat> qr(w);
            const cmat uc = cmat(qr.householderQ()).rightCols(m - 1);
            const cmat proj = cmat::Identity(m, m) - one * w.transpose();
            const cmat b = uc.adjoint() * zero->op * uc;
            Eig ed = diagonalize(b, cond_limit, 0.0);
            for (int s = 0; s < m - 1; ++s) {
                const cvec right = uc * ed.right.col(s);
                const cvec left = (ed.left.row(s) * uc.adjoint() * proj).transpose();
                add(sec, s + 2, ed.values(s), right, left);
            }
        }
    }
    for (const auto& l : lso) {
        if (&l == &*zero) continue;
        Eig ed = diagonalize(l.op, cond_limit, l.sector.e);
        for (int s = 0; s < l.sector.dim; ++s) add(l.sector, s + 1, ed.values(s), ed.right.col(s), ed.left.row(s).transpose());
    }

    double amax = 0.0;
    for (const auto& en : rd.entries) amax = std::max(amax, std::abs(en.a));
    rd.gamma_fgr = 0.0;
    rd.gamma_lambda = 0.0;
    bool first = true;
    for (size_t i = 1; i < rd.entries.size(); ++i) {
        const auto& en = rd.entries[i];
        if (first || en.a.imag() < rd.gamma_fgr) rd.gamma_fgr = en.a.imag();
        if (en.epsilon.imag() >= 0.0 && (first || en.epsilon.imag() < rd.gamma_lambda)) rd.gamma_lambda = en.epsilon.imag();
        first = false;
    }
    rd.fgr_holds = rd.gamma_fgr > 1e-12 * std::max(1.0, amax);
    return rd;
}

ResonanceData analyze_resonances(const SystemSpec& sys, const BathSpec& bath, double lambda, double bohr_tol) {
    const DaviesGenerator k = build_davies(sys, bath, lambda, bohr_tol);
    const double scale = std::max(1.0, sys.eigvals.cwiseAbs().maxCoeff());
    const auto sectors = bohr_decompose(sys, bohr_tol * scale);
    return resonance_energies(sys, level_shift(sys, k, sectors), lambda, bath.beta);
}

Superoperator w_map(const ResonanceData& rd, double t) {
    const int n = rd.entries.front().P.dim;
    Superoperator w{n, cmat::Zero(n * n, n * n)};
    for (size_t i = 1; i < rd.entries.size(); ++i)
        w.matrix += std::exp(I * t * rd.entries[i].epsilon) * rd.entries[i].P.matrix;
    return w;
}

rmat pauli_rate_matrix(const SystemSpec& sys, const DaviesGenerator& k) {
    const int n = sys.dim;
    rmat r = rmat::Zero(n, n);
    for (const auto& j : k.jumps) {
        const cmat a = sys.eigvecs.adjoint() * j.op * sys.eigvecs;
        for (int from = 0; from < n; ++from)
            for (int to = 0; to < n; ++to)
                if (to != from) r(to, from) += j.rate * std::norm(a(to, from));
    }
    for (int c = 0; c < n; ++c) r(c, c) = -(r.col(c).sum() - r(c, c));
    return r;
}

} // namespace oqs
