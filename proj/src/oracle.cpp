// oracle.cpp - finite-mode bath, exact diagonalization, partial traces

#include "oqs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <type_traits>

namespace oqs {

void set_backend_threads(int n) {
    if (n > 0) Eigen::setNbThreads(n);
}

long FiniteModeReservoir::bath_dim() const {
    long d = 1;
    for (int c : cutoffs) d *= (c + 1);
    return d;
}

std::vector<double> FiniteModeReservoir::tail_mass() const {
    double total = 0.0;
    for (double g : couplings) total += g * g;
    std::vector<double> out(n_modes, 0.0);
    if (total == 0.0) return out;
    for (int k = 0; k < n_modes; ++k)
        out[k] = couplings[k] * couplings[k] / total * std::exp(-beta * omegas[k] * (cutoffs[k] + 1));
    return out;
}

SpectralMeasure FiniteModeReservoir::measure(bool truncated) const {
    SpectralMeasure m;
    for (int k = 0; k < n_modes; ++k) {
        const double g2 = couplings[k] * couplings[k];
        double up, down; // <a a^+>, <a^+ a>
        if (truncated) {
            double z = 0, s_up = 0, s_down = 0;
            for (int n = 0; n <= cutoffs[k]; ++n) {
                const double p = std::exp(-beta * omegas[k] * n);
                z += p;
                if (n < cutoffs[k]) s_up += p * (n + 1);
                s_down += p * n;
            }
            up = s_up / z;
            down = s_down / z;
        } else {
            down = 1.0 / std::expm1(beta * omegas[k]);
            up = 1.0 + down;
        }
        m.u.push_back(omegas[k]);
        m.weight.push_back(0.5 * g2 * up);
        m.u.push_back(-omegas[k]);
        m.weight.push_back(0.5 * g2 * down);
    }
    return m;
}

double default_omega_max(const BathSpec& bath, double rel_tail) {
    const double U = support_cutoff(bath);
    auto J = [&](double w) { return spectral_density(bath, w); };
    const auto bp = bath_breakpoints(bath);
    const double total = integrate(J, 0.0, U, bp);
    if (total <= 0.0) return U;
    double lo = 0.0, hi = U;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (integrate(J, mid, U, bp) <= rel_tail * total)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

FiniteModeReservoir discretize_bath(const BathSpec& bath, int n, double omega_max, const OracleOptions& opt) {
    if (n < 1) throw std::invalid_argument("discretize_bath: n must be >= 1");
    if (!(omega_max > 0.0)) throw std::invalid_argument("discretize_bath: omega_max must be positive");
    if (opt.cutoff < 1) throw std::invalid_argument("discretize_bath: cutoff must be >= 1");
    auto J = [&](double w) { return spectral_density(bath, w); };
    const double U = support_cutoff(bath);
    const auto bp = bath_breakpoints(bath);
    const double total = integrate(J, 0.0, std::max(U, omega_max), bp);
    if (total > 0.0 && omega_max < U) {
        const double tail = integrate(J, omega_max, U, bp) / total;
        if (tail > opt.max_omega_tail) {
            std::ostringstream msg;
            msg << "omega_max too small: spectral tail mass " << tail << " above " << opt.max_omega_tail
                << " (try omega_max >= " << default_omega_max(bath, opt.max_omega_tail) << ")";
            throw std::invalid_argument(msg.str());
        }
    }

    FiniteModeReservoir fm;
    fm.n_modes = n;
    fm.beta = bath.beta;
    fm.omega_max = omega_max;
    const double width = omega_max / n;
    double g2sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const double a = k * width, b = (k + 1) * width;
        fm.omegas.push_back(0.5 * (a + b));
        const double g2 = integrate(J, a, b, bp) / std::numbers::pi;
        fm.couplings.push_back(std::sqrt(std::max(0.0, g2)));
        g2sum += g2;
    }
    for (int k = 0; k < n; ++k) {
        const double share = g2sum > 0 ? fm.couplings[k] * fm.couplings[k] / g2sum : 0.0;
        int d = 1;
        while (d < opt.cutoff && share * std::exp(-bath.beta * fm.omegas[k] * (d + 1)) > opt.tail_tol) ++d;
        fm.cutoffs.push_back(d);
    }
    return fm;
}

cplx discrete_correlation(const FiniteModeReservoir& fm, double t) {
    cplx c = 0.0;
    const SpectralMeasure m = fm.measure(false);
    for (size_t i = 0; i < m.u.size(); ++i) c += m.weight[i] * std::exp(-I * m.u[i] * t);
    return c;
}

double recurrence_window(const FiniteModeReservoir& fm) {
    double gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k < fm.n_modes; ++k) {
        gap = std::min(gap, fm.omegas[k]);
        for (int j = 0; j < k; ++j)
            if (fm.omegas[k] != fm.omegas[j]) gap = std::min(gap, std::abs(fm.omegas[k] - fm.omegas[j]));
    }
    return 2 * std::numbers::pi / gap;
}

namespace {

template <class Mat>
void eigh_inplace(Mat& a, rvec& w) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    if (es.info() != Eigen::Success) throw std::runtime_error("oracle: Hamiltonian diagonalization failed");
    w = es.eigenvalues();
    a = es.eigenvectors();
}

} // namespace

struct ExactOracle::Impl {
    SystemSpec sys;
    FiniteModeReservoir fm;
    double lambda{0.0};
    int n{0};
    long db{0}, d{0};
    bool real{true};
    rvec energies;
    rmat vr;
    cmat vc;
    rvec rho_bath; // diagonal of the truncated thermal bath state
    mutable std::vector<std::string> warnings;

    template <class Mat>
    Mat build() const {
        using S = typename Mat::Scalar;
        Mat h = Mat::Zero(d, d);
        std::vector<long> stride(fm.n_modes);
        long st = 1;
        for (int k = fm.n_modes - 1; k >= 0; --k) {
            stride[k] = st;
            st *= fm.cutoffs[k] + 1;
        }
        std::vector<int> occ(fm.n_modes);
        for (long b = 0; b < db; ++b) {
            long rem = b;
            double eb = 0.0;
            for (int k = 0; k < fm.n_modes; ++k) {
                occ[k] = static_cast<int>(rem / stride[k]);
                rem %= stride[k];
                eb += fm.omegas[k] * occ[k];
            }
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) h(i * db + b, j * db + b) += to_scalar<S>(sys.h_sys(i, j));
                h(i * db + b, i * db + b) += eb;
            }
            for (int k = 0; k < fm.n_modes; ++k) {
                if (occ[k] >= fm.cutoffs[k]) continue;
                const long b2 = b + stride[k];
                const double amp = lambda * fm.couplings[k] / std::sqrt(2.0) * std::sqrt(occ[k] + 1.0);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        const S v = to_scalar<S>(sys.coupling(i, j)) * amp;
                        h(i * db + b2, j * db + b) += v; // G (x) a^+
                        h(j * db + b, i * db + b2) += conj_s(v);
                    }
            }
        }
        return h;
    }

    template <class S>
    static S to_scalar(cplx z) {
        if constexpr (std::is_same_v<S, double>)
            return z.real();
        else
            return z;
    }
    static double conj_s(double x) { return x; }
    static cplx conj_s(cplx x) { return std::conj(x); }

    template <class Mat>
    Trajectory evolve(const Mat& v, const cmat& rho_s0, const std::vector<double>& times) const {
        // A = V^+ (rho_s0 (x) rho_B) V ; rho_S(t)_ij = u^T (A o C^ij) conj(u), C^ij = V_i^T conj(V_j)
        cmat a = cmat::Zero(d, d);
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                if (rho_s0(k, l) == 0.0) continue;
                const Mat left = v.middleRows(k * db, db).adjoint() * rho_bath.cast<typename Mat::Scalar>().asDiagonal();
                a += rho_s0(k, l) * (left * v.middleRows(l * db, db)).template cast<cplx>();
            }
        std::vector<cmat> m(n * n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const Mat c = v.middleRows(i * db, db).transpose() * v.middleRows(j * db, db).conjugate();
                m[i * n + j] = a.cwiseProduct(c.template cast<cplx>());
            }
        a.resize(0, 0);
        Trajectory tr;
        tr.tag = GeneratorTag::oracle;
        tr.times = times;
        for (double t : times) {
            cvec u(d);
            for (long x = 0; x < d; ++x) u(x) = std::exp(-I * energies(x) * t);
            const cvec ub = u.conjugate();
            cmat rho(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    rho(i, j) = ub.dot(m[i * n + j] * ub);
                    if (j != i) rho(j, i) = std::conj(rho(i, j));
                }
            rho = hermitize(rho);
            tr.states.push_back(rho);
        }
        return tr;
    }

    template <class Mat>
    GibbsState gibbs(const Mat& v) const {
        const double e0 = energies.minCoeff();
        rvec w = (-(fm.beta) * (energies.array() - e0)).exp();
        w /= w.sum();
        cmat rho(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const auto vi = v.middleRows(i * db, db);
                const auto vj = v.middleRows(j * db, db);
                cplx acc = 0.0;
                for (long x = 0; x < d; ++x) {
                    cplx col = 0.0;
                    for (long b = 0; b < db; ++b) col += cplx(vi(b, x)) * std::conj(cplx(vj(b, x)));
                    acc += w(x) * col;
                }
                rho(i, j) = acc;
            }
        GibbsState g;
        g.rho = hermitize(rho);
        g.rho /= g.rho.trace().real();
        g.beta = fm.beta;
        g.source = GibbsSource::exact;
        return g;
    }
};

ExactOracle::ExactOracle(const SystemSpec& sys, const FiniteModeReservoir& fm, double lambda, const OracleOptions& opt)
    : impl_(std::make_unique<Impl>()) {
    Impl& p = *impl_;
    p.sys = sys;
    p.fm = fm;
    p.lambda = lambda;
    p.n = sys.dim;
    p.db = fm.bath_dim();
    p.d = p.n * p.db;
    if (p.d > opt.dim_cap) {
        std::ostringstream msg;
        msg << "oracle dimension " << p.d << " exceeds the cap " << opt.dim_cap;
        throw std::runtime_error(msg.str());
    }
    const auto tails = fm.tail_mass();
    for (int k = 0; k < fm.n_modes; ++k)
        if (tails[k] > opt.max_tail_mass) {
            const double share = tails[k] / std::exp(-fm.beta * fm.omegas[k] * (fm.cutoffs[k] + 1));
            int need = fm.cutoffs[k];
            while (share * std::exp(-fm.beta * fm.omegas[k] * (need + 1)) > opt.max_tail_mass) ++need;
            std::ostringstream msg;
            msg << "cutoff leakage: mode " << k << " (omega=" << fm.omegas[k] << ") has truncated thermal tail "
                << tails[k] << " > " << opt.max_tail_mass << "; suggested cutoff d >= " << need;
            throw std::runtime_error(msg.str());
        }

    // truncated, renormalized thermal state of each mode
    p.rho_bath = rvec::Ones(p.db);
    {
        long st = 1;
        for (int k = fm.n_modes - 1; k >= 0; --k) {
            const int dk = fm.cutoffs[k] + 1;
            rvec pk(dk);
            for (int m = 0; m < dk; ++m) pk(m) = std::exp(-fm.beta * fm.omegas[k] * m);
            pk /= pk.sum();
            for (long b = 0; b < p.db; ++b) p.rho_bath(b) *= pk((b / st) % dk);
            st *= dk;
        }
    }

    p.real = sys.h_sys.imag().cwiseAbs().maxCoeff() == 0.0 && sys.coupling.imag().cwiseAbs().maxCoeff() == 0.0;
    if (p.real) {
        p.vr = p.build<rmat>();
        eigh_inplace(p.vr, p.energies);
    } else {
        p.vc = p.build<cmat>();
        eigh_inplace(p.vc, p.energies);
    }
}

ExactOracle::~ExactOracle() = default;

Trajectory ExactOracle::evolve(const cmat& rho_s0, const std::vector<double>& times) const {
    const Impl& p = *impl_;
    if (rho_s0.rows() != p.n || rho_s0.cols() != p.n) throw std::invalid_argument("oracle: state dimension mismatch");
    const double half = 0.5 * recurrence_window(p.fm);
    for (double t : times)
        if (t > half * (1 + 1e-12)) {
            p.warnings.push_back("times beyond half the recurrence window (" + std::to_string(half) + ")");
            break;
        }
    return p.real ? p.evolve(p.vr, rho_s0, times) : p.evolve(p.vc, rho_s0, times);
}

GibbsState ExactOracle::reduced_gibbs() const {
    const Impl& p = *impl_;
    return p.real ? p.gibbs(p.vr) : p.gibbs(p.vc);
}

cmat ExactOracle::hamiltonian() const {
    const Impl& p = *impl_;
    return p.real ? cmat(p.build<rmat>().cast<cplx>()) : p.build<cmat>();
}

cmat ExactOracle::initial_full_state(const cmat& rho_s0) const {
    const Impl& p = *impl_;
    cmat rho = cmat::Zero(p.d, p.d);
    for (int i = 0; i < p.n; ++i)
        for (int j = 0; j < p.n; ++j)
            for (long b = 0; b < p.db; ++b) rho(i * p.db + b, j * p.db + b) = rho_s0(i, j) * p.rho_bath(b);
    return rho;
}

cmat ExactOracle::full_state(const cmat& rho_s0, double t) const {
    const Impl& p = *impl_;
    const cmat v = p.real ? cmat(p.vr.cast<cplx>()) : p.vc;
    cvec u(p.d);
    for (long x = 0; x < p.d; ++x) u(x) = std::exp(-I * p.energies(x) * t);
    const cmat prop = v * u.asDiagonal() * v.adjoint();
    return prop * initial_full_state(rho_s0) * prop.adjoint();
}

long ExactOracle::dim() const { return impl_->d; }

const std::vector<std::string>& ExactOracle::warnings() const { return impl_->warnings; }

Trajectory exact_reduced_dynamics(const SystemSpec& sys, const FiniteModeReservoir& fm, double lambda,
                                  const cmat& rho_s0, const std::vector<double>& times, const OracleOptions& opt) {
    return ExactOracle(sys, fm, lambda, opt).evolve(rho_s0, times);
}

GibbsState exact_reduced_gibbs(const SystemSpec& sys, const FiniteModeReservoir& fm, double lambda,
                               const OracleOptions& opt) {
    return ExactOracle(sys, fm, lambda, opt).reduced_gibbs();
}

} // namespace oqs
