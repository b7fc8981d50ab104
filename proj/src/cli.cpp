// cli.cpp - commands of the `oqs` tool

#include "oqs/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

namespace oqs {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<double> time_grid(const RunConfig& cfg, double lambda, double gamma_fgr) {
    double t_max = 10.0;
    if (cfg.times.t_max) t_max = *cfg.times.t_max;
    else if (lambda * lambda * gamma_fgr > 0.0) t_max = cfg.times.relax_multiple / (lambda * lambda * gamma_fgr);
    if (cfg.times.spacing == "linear") return linspace(0.0, t_max, cfg.times.points);
    return logspace_from_zero(t_max, cfg.times.points);
}

json generator_to_json(const SystemSpec& sys, const BathSpec& bath, const DaviesGenerator& gen) {
    json jumps = json::array();
    json rates = json::array();
    for (const auto& jp : gen.jumps) {
        jumps.push_back({{"omega", jp.omega}, {"rate", jp.rate}, {"op", matrix_to_json(jp.op)}});
        rates.push_back(jp.rate);
    }
    return json{{"dim", sys.dim},
                {"lambda", gen.lambda},
                {"beta", bath.beta},
                {"convention", "row-major vec, |i><j| -> i*N + j"},
                {"h_sys", matrix_to_json(sys.h_sys)},
                {"coupling", matrix_to_json(sys.coupling)},
                {"lamb_shift", matrix_to_json(gen.lamb_shift)},
                {"rates", rates},
                {"jumps", jumps},
                {"K", matrix_to_json(gen.k_super.matrix)},
                {"generator", matrix_to_json(gen.total.matrix)}};
}

Superoperator generator_from_json(const json& j) {
    const int n = j.at("dim").get<int>();
    const double lambda = j.at("lambda").get<double>();
    const cmat h = matrix_from_json(j.at("h_sys"), "h_sys");
    std::vector<Jump> jumps;
    for (const auto& jj : j.at("jumps"))
        jumps.push_back({jj.at("omega").get<double>(), jj.at("rate").get<double>(), matrix_from_json(jj.at("op"), "op")});
    const cmat k = assemble_gksl(jumps, matrix_from_json(j.at("lamb_shift"), "lamb_shift"));
    return {n, commutator_super(h) + lambda * lambda * k};
}

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

double rel_fro(const cmat& a, double scale) { return scale > 0.0 ? a.norm() / scale : a.norm(); }

// Largest distance in a greedy nearest-neighbour pairing of two spectra.
double spectrum_mismatch(const cvec& a, std::vector<cplx> b) {
    if (static_cast<size_t>(a.size()) != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        auto it = std::min_element(b.begin(), b.end(),
                                   [&](cplx x, cplx y) { return std::abs(x - a(i)) < std::abs(y - a(i)); });
        worst = std::max(worst, std::abs(*it - a(i)));
        b.erase(it);
    }
    return worst;
}

LinearFit safe_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> xs, ys;
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i] > 0.0 && y[i] > 0.0) {
            xs.push_back(x[i]);
            ys.push_back(y[i]);
        }
    if (xs.size() < 2 || xs.size() != x.size()) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan, nan};
    }
    return loglog_fit(xs, ys);
}

Superoperator scaled(const Superoperator& s, double c) { return {s.dim, c * s.matrix}; }

} // namespace

OracleStudy oracle_study(const RunConfig& cfg, const cmat& rho0) {
    const Timer timer;
    OracleStudy st;
    const auto& sys = cfg.system;
    const auto& opt = cfg.oracle.options;
    const double omega_max = cfg.oracle.omega_max ? *cfg.oracle.omega_max : default_omega_max(cfg.bath, opt.max_omega_tail);
    const auto fm = discretize_bath(cfg.bath, cfg.oracle.n_modes, omega_max, opt);
    const bool with_floor = cfg.oracle.floor_modes > 0 && cfg.oracle.floor_modes != cfg.oracle.n_modes;
    FiniteModeReservoir fm_floor;
    if (with_floor) fm_floor = discretize_bath(cfg.bath, cfg.oracle.floor_modes, omega_max, opt);
    const double t_rec = recurrence_window(fm);
    const auto times = linspace(0.0, 0.5 * t_rec, cfg.oracle.points);

    std::vector<double> lambdas, sup_d, sup_corr, sup_r, sup_m;
    for (double lambda : cfg.lambdas) {
        OracleRun run;
        run.lambda = lambda;
        run.times = times;
        run.t_rec = t_rec;
        run.cutoffs = fm.cutoffs;

        const ExactOracle oracle(sys, fm, lambda, opt);
        run.oracle_dim = oracle.dim();
        for (const auto& w : oracle.warnings()) st.warnings.push_back(w);
        const Trajectory v = oracle.evolve(rho0, times);

        const DaviesGenerator gen = build_davies(sys, cfg.bath, lambda, cfg.bohr_tol);
        const Trajectory d = propagate(gen.total, rho0, times, GeneratorTag::davies);
        const ResonanceData rd = analyze_resonances(sys, cfg.bath, lambda, cfg.bohr_tol);
        const cmat rho_inf = reduced_gibbs_second_order(sys, cfg.bath, lambda).rho;
        const Trajectory r = propagate_resonance(rd, rho_inf, rho0, times);
        const RenormalizedGenerators rg = renormalized_generators(sys, cfg.bath, lambda);
        for (const auto& w : rg.warnings) st.warnings.push_back(w);
        const Trajectory m = propagate(rg.M, rho0, times, GeneratorTag::renormalized);
        const Trajectory md = propagate(scaled(rg.M_d, lambda * lambda), rho0, times, GeneratorTag::populations);

        run.davies = compare(v, d);
        run.resonance = compare(v, r);
        run.renormalized = compare(v, m);
        run.md_populations = compare_populations(v, md, sys.eigvecs);
        run.davies_populations = compare_populations(v, d, sys.eigvecs);

        if (with_floor) {
            const Trajectory v2 = exact_reduced_dynamics(sys, fm_floor, lambda, rho0, times, opt);
            const Comparison f = compare(v, v2);
            run.floor = f.per_time;
            run.floor_sup = f.sup;
        }
        lambdas.push_back(lambda);
        sup_d.push_back(run.davies.sup);
        sup_corr.push_back(run.davies.sup - run.floor_sup);
        sup_r.push_back(run.resonance.sup);
        sup_m.push_back(run.renormalized.sup);
        st.runs.push_back(std::move(run));
    }
    st.davies_raw = safe_loglog(lambdas, sup_d);
    st.davies_corrected = safe_loglog(lambdas, sup_corr);
    st.resonance = safe_loglog(lambdas, sup_r);
    st.renormalized = safe_loglog(lambdas, sup_m);
    st.seconds = timer.seconds();
    return st;
}

json scaling_json(const OracleStudy& st) {
    auto fit = [](const LinearFit& f) {
        auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
        return json{{"slope", num(f.slope)}, {"intercept", num(f.intercept)}, {"r2", num(f.r2)}};
    };
    json runs = json::array();
    for (const auto& r : st.runs)
        runs.push_back({{"lambda", r.lambda},
                        {"t_rec", r.t_rec},
                        {"oracle_dim", r.oracle_dim},
                        {"cutoffs", r.cutoffs},
                        {"sup_davies", r.davies.sup},
                        {"sup_resonance", r.resonance.sup},
                        {"sup_M", r.renormalized.sup},
                        {"sup_M_d_populations", r.md_populations.sup},
                        {"sup_davies_populations", r.davies_populations.sup},
                        {"floor", r.floor_sup}});
    return json{{"davies", fit(st.davies_raw)},
                {"davies_floor_corrected", fit(st.davies_corrected)},
                {"resonance", fit(st.resonance)},
                {"M", fit(st.renormalized)},
                {"runs", runs},
                {"warnings", st.warnings},
                {"seconds", st.seconds}};
}

std::vector<Check> validation_suite(const RunConfig& cfg, std::uint64_t seed) {
    std::vector<Check> out;
    auto at_most = [&](const std::string& name, double v, double thr) { out.push_back({name, v, thr, v <= thr}); };
    auto at_least = [&](const std::string& name, double v, double thr) { out.push_back({name, v, thr, v >= thr}); };
    std::mt19937_64 rng(seed);

    const auto& sys = cfg.system;
    const auto& bath = cfg.bath;
    const double lambda = cfg.lambdas.front();
    const int n = sys.dim;

    at_most("hermiticity.h_sys", hermiticity_deviation(sys.h_sys), 1e-12);
    at_most("hermiticity.coupling", hermiticity_deviation(sys.coupling), 1e-12);

    double kms = 0.0;
    for (double u : linspace(0.05, 10.0, 200)) {
        const double hp = h_hat(bath, u);
        if (hp > 0.0) kms = std::max(kms, std::abs(h_hat(bath, -u) - std::exp(-bath.beta * u) * hp) / hp);
    }
    at_most("bath.kms", kms, 1e-10);

    const DaviesGenerator gen = build_davies(sys, bath, lambda, cfg.bohr_tol);
    const cmat& k = gen.k_super.matrix;
    const double knorm = k.norm();
    const cmat rho_beta = gibbs(sys.h_sys, bath.beta).rho;
    at_most("davies.gibbs_stationarity", rel_fro(k * vec(rho_beta), knorm), 1e-9);
    const cmat ls = commutator_super(sys.h_sys);
    at_most("davies.commutation", rel_fro(ls * k - k * ls, ls.norm() * knorm), 1e-9);
    at_most("davies.gksl_reassembly", rel_fro(assemble_gksl(gen.jumps, gen.lamb_shift) - k, knorm), 1e-10);
    at_most("davies.lamb_shift_commutes", max_abs(gen.lamb_shift * sys.h_sys - sys.h_sys * gen.lamb_shift), 1e-10);

    const ResonanceData rd = analyze_resonances(sys, bath, lambda, cfg.bohr_tol);
    const auto grid = logspace_from_zero(rd.gamma_fgr > 0.0 && lambda > 0.0 ? 20.0 / (lambda * lambda * rd.gamma_fgr) : 10.0, 16);
    auto cpt_sweep = [&](const std::string& name, const Superoperator& g) {
        const Exponential ex(g.matrix);
        double min_eig = std::numeric_limits<double>::infinity(), tdev = 0.0;
        for (double t : grid) {
            const CptReport r = cpt_report({n, ex.at(t)});
            min_eig = std::min(min_eig, r.min_choi_eig);
            tdev = std::max(tdev, r.trace_dev);
        }
        at_least(name + ".min_choi_eig", min_eig, -1e-9);
        at_most(name + ".trace_dev", tdev, 1e-10);
    };
    cpt_sweep("davies.cpt", gen.total);

    std::vector<cplx> res;
    for (const auto& en : rd.entries) res.push_back(I * en.epsilon);
    at_most("resonance.spectrum_reassembly", spectrum_mismatch(Eigen::ComplexEigenSolver<cmat>(gen.total.matrix).eigenvalues(), res), 1e-8);

    cmat sum = cmat::Zero(n * n, n * n);
    double disjoint = 0.0;
    for (size_t a = 0; a < rd.entries.size(); ++a) {
        const cmat& qa = rd.entries[a].Q.matrix;
        sum += qa;
        for (size_t b = 0; b < rd.entries.size(); ++b) {
            const cmat prod = qa * rd.entries[b].Q.matrix;
            disjoint = std::max(disjoint, max_abs(a == b ? cmat(prod - qa) : prod));
        }
    }
    at_most("resonance.projections_disjoint", disjoint, 1e-9);
    at_most("resonance.projections_complete", max_abs(sum - cmat::Identity(n * n, n * n)), 1e-9);

    {
        std::uniform_real_distribution<double> ud(0.0, 5.0);
        const double t = ud(rng), s = ud(rng);
        const cmat lhs = w_map(rd, t + s).matrix;
        const cmat rhs = w_map(rd, s).matrix * w_map(rd, t).matrix;
        at_most("resonance.semigroup", max_abs(lhs - rhs), 1e-9);
    }

    {
        const cmat rho0 = random_density(n, rng);
        const auto traj = propagate(gen.total, rho0, grid);
        double tdev = 0.0;
        for (const auto& r : traj.states) tdev = std::max(tdev, std::abs(r.trace() - 1.0));
        at_most("dynamics.trace", tdev, 1e-10);
        if (rd.gamma_fgr > 0.0 && lambda > 0.0) {
            const double t_long = 50.0 / (lambda * lambda * rd.gamma_fgr);
            const cmat late = propagate(gen.total, rho0, {t_long}).states.front();
            at_most("dynamics.long_time_gibbs", max_abs(late - rho_beta), 1e-8);
        }
    }

    const RenormalizedGenerators rg = renormalized_generators(sys, bath, lambda);
    const cmat& rho_l = rg.rho_lambda.rho;
    at_most("equilibrium.gibbs_of_h_tilde", max_abs(gibbs(rg.renormalized.h_tilde, bath.beta).rho - rho_l), 1e-10);
    {
        const cmat x = hermitize(random_matrix(n, rng));
        const cvec omega = rg.renormalized.purification;
        const cplx lhs = omega.dot(purification_map(rg.renormalized) * vec(x));
        at_most("equilibrium.purification", std::abs(lhs - (rho_l * x).trace()), 1e-10);
    }
    at_most("renormalized.stationarity", (rg.M.matrix * vec(rho_l)).norm(), 1e-9);
    {
        const cmat lt = commutator_super(rg.renormalized.h_tilde);
        const cmat& md = rg.M_d.matrix;
        at_most("renormalized.commutation", rel_fro(lt * md - md * lt, lt.norm() * md.norm()), 1e-9);
    }
    cpt_sweep("renormalized.cpt", rg.M);
    {
        const RenormalizedGenerators r0 = renormalized_generators(sys, bath, 0.0);
        at_most("renormalized.md_at_zero", rel_fro(r0.M_d.matrix - build_davies(sys, bath, 0.0, cfg.bohr_tol).k_super.matrix, knorm), 1e-12);
    }

    {
        const Superoperator transpose = Superoperator::from_map(n, [](const cmat& r) { return cmat(r.transpose()); });
        const double e = cpt_report(transpose).min_choi_eig;
        out.push_back({"selftest.transpose_not_cp", e, -0.5, e < -0.5});
    }
    return out;
}

namespace {

struct Options {
    std::string config_path;
    std::string out_dir{"."};
    std::uint64_t seed{1234};
    int threads{1};
};

void write_text(const fs::path& p, const std::string& s) {
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << s;
}

std::string csv_row(const std::vector<double>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += fmt17(v[i]);
    }
    return s + '\n';
}

int cmd_generator(const RunConfig& cfg, const fs::path& out) {
    const double lambda = cfg.lambdas.front();
    const DaviesGenerator gen = build_davies(cfg.system, cfg.bath, lambda, cfg.bohr_tol);
    const ResonanceData rd = analyze_resonances(cfg.system, cfg.bath, lambda, cfg.bohr_tol);
    write_text(out / "generator.json", generator_to_json(cfg.system, cfg.bath, gen).dump(2) + '\n');
    const Exponential ex(gen.total.matrix);
    std::string csv = "t,min_choi_eig,trace_dev\n";
    for (double t : time_grid(cfg, lambda, rd.gamma_fgr)) {
        const CptReport r = cpt_report({cfg.system.dim, ex.at(t)});
        csv += csv_row({t, r.min_choi_eig, r.trace_dev});
    }
    write_text(out / "cpt_report.csv", csv);
    std::cout << "generator: " << gen.jumps.size() << " jump channels, wrote generator.json and cpt_report.csv\n";
    return 0;
}

int cmd_resonances(const RunConfig& cfg, const fs::path& out) {
    const double lambda = cfg.lambdas.front();
    const ResonanceData rd = analyze_resonances(cfg.system, cfg.bath, lambda, cfg.bohr_tol);
    std::string csv = "e,s,re_a,im_a,re_epsilon,im_epsilon\n";
    for (const auto& en : rd.entries)
        csv += fmt17(en.e) + ',' + std::to_string(en.s) + ',' +
               csv_row({en.a.real(), en.a.imag(), en.epsilon.real(), en.epsilon.imag()});
    csv += "# lambda=" + fmt17(lambda) + ",gamma_lambda=" + fmt17(rd.gamma_lambda) + ",gamma_fgr=" + fmt17(rd.gamma_fgr) +
           ",fgr_holds=" + (rd.fgr_holds ? "true" : "false") + '\n';
    write_text(out / "resonances.csv", csv);
    std::cout << "resonances: " << rd.entries.size() << " entries, gamma(lambda) = " << fmt17(rd.gamma_lambda)
              << ", gamma_FGR = " << fmt17(rd.gamma_fgr) << '\n';
    if (!rd.fgr_holds) std::cerr << "warning: Fermi Golden Rule condition violated\n";
    return 0;
}

int cmd_propagate(const RunConfig& cfg, const fs::path& out, std::uint64_t seed) {
    const auto& sys = cfg.system;
    const double lambda = cfg.lambdas.front();
    const cmat rho0 = resolve_state(cfg.initial_state, sys, cfg.bath.beta, seed);
    const ResonanceData rd = analyze_resonances(sys, cfg.bath, lambda, cfg.bohr_tol);
    const auto times = time_grid(cfg, lambda, rd.gamma_fgr);
    Trajectory tr;
    if (cfg.generator == "davies") {
        tr = propagate(build_davies(sys, cfg.bath, lambda, cfg.bohr_tol).total, rho0, times, GeneratorTag::davies);
    } else if (cfg.generator == "resonance") {
        tr = propagate_resonance(rd, reduced_gibbs_second_order(sys, cfg.bath, lambda).rho, rho0, times);
    } else if (cfg.generator == "M") {
        tr = propagate(renormalized_generators(sys, cfg.bath, lambda).M, rho0, times, GeneratorTag::renormalized);
    } else if (cfg.generator == "M_d") {
        tr = propagate(scaled(renormalized_generators(sys, cfg.bath, lambda).M_d, lambda * lambda), rho0, times,
                       GeneratorTag::populations);
    } else {
        const auto& opt = cfg.oracle.options;
        const double wmax = cfg.oracle.omega_max ? *cfg.oracle.omega_max : default_omega_max(cfg.bath, opt.max_omega_tail);
        tr = exact_reduced_dynamics(sys, discretize_bath(cfg.bath, cfg.oracle.n_modes, wmax, opt), lambda, rho0, times, opt);
    }
    const int n = sys.dim;
    std::string csv = "t";
    for (const char* part : {"re", "im"})
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) csv += std::string(",") + part + "_" + std::to_string(i) + "_" + std::to_string(j);
    csv += ",trace";
    for (int k = 0; k < n; ++k) csv += ",p_" + std::to_string(k);
    csv += '\n';
    const auto pops = populations(tr, sys.eigvecs);
    for (size_t r = 0; r < tr.times.size(); ++r) {
        std::vector<double> row{tr.times[r]};
        const cmat& s = tr.states[r];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) row.push_back(s(i, j).real());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) row.push_back(s(i, j).imag());
        row.push_back(s.trace().real());
        for (int k = 0; k < n; ++k) row.push_back(pops[r](k));
        csv += csv_row(row);
    }
    write_text(out / "trajectory.csv", csv);
    std::cout << "propagate: " << to_string(tr.tag) << ", " << tr.times.size() << " times, wrote trajectory.csv\n";
    return 0;
}

int cmd_equilibrium(const RunConfig& cfg, const fs::path& out) {
    const auto& sys = cfg.system;
    const double lambda = cfg.lambdas.front();
    const cmat rho0 = gibbs(sys.h_sys, cfg.bath.beta).rho;
    const cmat rho2 = second_order_correction(sys, cfg.bath);
    const RenormalizedGenerators rg = renormalized_generators(sys, cfg.bath, lambda);
    json shifts = json::array();
    for (double l : cfg.lambdas) {
        const RenormalizedSystem rs = renormalize(reduced_gibbs_second_order(sys, cfg.bath, l), cfg.bath.beta, sys.eigvecs);
        shifts.push_back({{"lambda", l}, {"h_tilde_minus_h_sys_fro", (rs.h_tilde - sys.h_sys).norm()}});
    }
    std::vector<double> et(rg.renormalized.e_tilde.data(), rg.renormalized.e_tilde.data() + rg.renormalized.e_tilde.size());
    const json j{{"lambda", lambda},
                 {"beta", cfg.bath.beta},
                 {"rho_beta", matrix_to_json(rho0)},
                 {"rho2", matrix_to_json(rho2)},
                 {"rho_lambda", matrix_to_json(rg.rho_lambda.rho)},
                 {"h_tilde", matrix_to_json(rg.renormalized.h_tilde)},
                 {"e_tilde", et},
                 {"M", matrix_to_json(rg.M.matrix)},
                 {"M_d", matrix_to_json(rg.M_d.matrix)},
                 {"phi_condition", rg.phi_condition},
                 {"h_tilde_shifts", shifts},
                 {"warnings", rg.warnings}};
    write_text(out / "equilibrium.json", j.dump(2) + '\n');
    for (const auto& w : rg.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "equilibrium: wrote equilibrium.json\n";
    return 0;
}

int cmd_compare_oracle(const RunConfig& cfg, const fs::path& out, std::uint64_t seed) {
    const cmat rho0 = resolve_state(cfg.initial_state, cfg.system, cfg.bath.beta, seed);
    const OracleStudy st = oracle_study(cfg, rho0);
    std::string csv = "lambda,t,davies,resonance,M,M_d_populations,davies_populations,floor\n";
    for (const auto& r : st.runs)
        for (size_t i = 0; i < r.times.size(); ++i)
            csv += csv_row({r.lambda, r.times[i], r.davies.per_time[i], r.resonance.per_time[i], r.renormalized.per_time[i],
                            r.md_populations.per_time[i], r.davies_populations.per_time[i],
                            r.floor.empty() ? 0.0 : r.floor[i]});
    write_text(out / "comparison.csv", csv);
    write_text(out / "scaling.json", scaling_json(st).dump(2) + '\n');
    for (const auto& w : st.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "compare-oracle: davies slope " << fmt17(st.davies_raw.slope) << " (floor-corrected "
              << fmt17(st.davies_corrected.slope) << "), wrote comparison.csv and scaling.json\n";
    return 0;
}

int cmd_validate(const RunConfig& cfg, const fs::path& out, std::uint64_t seed) {
    const auto checks = validation_suite(cfg, seed);
    std::string csv = "check,value,threshold,status\n";
    bool all = true;
    for (const auto& c : checks) {
        all = all && c.pass;
        csv += c.name + ',' + fmt17(c.value) + ',' + fmt17(c.threshold) + ',' + (c.pass ? "pass" : "FAIL") + '\n';
        std::cout << std::left << std::setw(40) << c.name << ' ' << std::setw(26) << fmt17(c.value) << ' '
                  << (c.pass ? "pass" : "FAIL") << '\n';
    }
    write_text(out / "validate.csv", csv);
    if (!all) std::cerr << "validate: invariant violated\n";
    return all ? 0 : 3;
}

} // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"oqs: Markovian approximations of open quantum system dynamics"};
    Options o;
    app.add_option("--config", o.config_path, "JSON run configuration (defaults to the built-in qubit run)");
    app.add_option("--out", o.out_dir, "output directory");
    app.add_option("--seed", o.seed, "seed for random test states");
    app.add_option("--threads", o.threads, "linear algebra threads")->check(CLI::PositiveNumber);
    app.require_subcommand(1);
    const std::vector<std::pair<const char*, const char*>> commands{
        {"generator", "Davies generator, Lamb shift, jumps and CPT report"},
        {"resonances", "resonance energies and rates"},
        {"propagate", "trajectory under the configured generator"},
        {"equilibrium", "second-order reduced Gibbs state and renormalized generators"},
        {"compare-oracle", "distances to the exact finite-mode dynamics"},
        {"validate", "invariant suite"}};
    for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        const RunConfig cfg = o.config_path.empty() ? parse_config(default_config_json()) : load_config(o.config_path);
        set_backend_threads(o.threads);
        const fs::path out(o.out_dir);
        fs::create_directories(out);
        if (cmd == "generator") return cmd_generator(cfg, out);
        if (cmd == "resonances") return cmd_resonances(cfg, out);
        if (cmd == "propagate") return cmd_propagate(cfg, out, o.seed);
        if (cmd == "equilibrium") return cmd_equilibrium(cfg, out);
        if (cmd == "compare-oracle") return cmd_compare_oracle(cfg, out, o.seed);
        return cmd_validate(cfg, out, o.seed);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    }
}

} // namespace oqs
