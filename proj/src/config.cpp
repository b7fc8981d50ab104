// config.cpp - JSON run configuration

#include "oqs/config.hpp"

#include "oqs/equilibrium.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace oqs {

using nlohmann::json;

namespace {

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            throw ConfigError((where.empty() ? "" : where + ".") + item.key() + ": unknown key");
}

std::string path_of(const std::string& where, const std::string& key) {
    return where.empty() ? key : where + "." + key;
}

double get_number(const json& j, const std::string& where, const std::string& key) {
    if (!j.contains(key)) throw ConfigError(path_of(where, key) + ": missing");
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError(path_of(where, key) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path_of(where, key) + ": not finite");
    return x;
}

double get_positive(const json& j, const std::string& where, const std::string& key) {
    const double x = get_number(j, where, key);
    if (!(x > 0.0)) throw ConfigError(path_of(where, key) + ": must be positive");
    return x;
}

int get_int(const json& j, const std::string& where, const std::string& key, int lo) {
    if (!j.contains(key)) throw ConfigError(path_of(where, key) + ": missing");
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(path_of(where, key) + ": expected an integer");
    const long x = v.get<long>();
    if (x < lo || x > 1'000'000) throw ConfigError(path_of(where, key) + ": out of range");
    return static_cast<int>(x);
}

std::string get_string(const json& j, const std::string& where, const std::string& key) {
    if (!j.contains(key)) throw ConfigError(path_of(where, key) + ": missing");
    if (!j.at(key).is_string()) throw ConfigError(path_of(where, key) + ": expected a string");
    return j.at(key).get<std::string>();
}

std::vector<double> number_array(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError(where + ": expected a non-empty array of numbers");
        out.push_back(v.get<double>());
        if (!std::isfinite(out.back())) throw ConfigError(where + ": not finite");
    }
    return out;
}

rmat real_block(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a square array of rows");
    const auto n = static_cast<Eigen::Index>(j.size());
    rmat m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto row = number_array(j[r], where);
        if (static_cast<Eigen::Index>(row.size()) != n) throw ConfigError(where + ": matrix is not square");
        for (Eigen::Index c = 0; c < n; ++c) m(r, c) = row[c];
    }
    return m;
}

cmat coupling_from(const json& j, int n, const std::string& where) {
    if (j.is_string()) {
        try {
            return named_coupling(j.get<std::string>(), n);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where + ": " + e.what());
        }
    }
    cmat g = matrix_from_json(j, where);
    if (g.rows() != n) throw ConfigError(where + ": dimension does not match the Hamiltonian");
    return g;
}

SystemSpec parse_system(const json& j) {
    const std::string w = "system";
    if (!j.is_object()) throw ConfigError("system: expected an object");
    cmat h, g;
    if (j.contains("preset")) {
        const std::string preset = get_string(j, w, "preset");
        if (preset == "qubit") {
            allow_keys(j, w, {"preset", "delta", "coupling"});
            const double delta = get_number(j, w, "delta");
            h = cmat::Zero(2, 2);
            h(1, 1) = delta;
        } else if (preset == "three_level") {
            allow_keys(j, w, {"preset", "e1", "e2", "coupling"});
            h = cmat::Zero(3, 3);
            h(1, 1) = get_number(j, w, "e1");
            h(2, 2) = get_number(j, w, "e2");
        } else {
            throw ConfigError("system.preset: unknown preset '" + preset + "'");
        }
    } else {
        allow_keys(j, w, {"h", "coupling"});
        if (!j.contains("h")) throw ConfigError("system.h: missing (or give a preset)");
        h = matrix_from_json(j.at("h"), "system.h");
    }
    if (!j.contains("coupling")) throw ConfigError("system.coupling: missing");
    g = coupling_from(j.at("coupling"), static_cast<int>(h.rows()), "system.coupling");
    try {
        return make_system(h, g);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("system: ") + e.what());
    }
}

Tabulated read_tabulated_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("bath.tabulated_path: cannot open '" + path + "'");
    std::vector<double> omega, J;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        for (char& c : line)
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        std::istringstream ls(line);
        double w = 0.0, v = 0.0;
        if (!(ls >> w >> v)) {
            if (omega.empty()) continue; // header row
            throw ConfigError("bath.tabulated_path: malformed row '" + line + "'");
        }
        omega.push_back(w);
        J.push_back(v);
    }
    try {
        return make_tabulated(std::move(omega), std::move(J));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bath.tabulated_path: ") + e.what());
    }
}

BathSpec parse_bath(const json& j, const std::string& base_dir) {
    const std::string w = "bath";
    allow_keys(j, w, {"beta", "family", "tabulated", "tabulated_path"});
    BathSpec b;
    b.beta = get_positive(j, w, "beta");
    const int forms = int(j.contains("family")) + int(j.contains("tabulated")) + int(j.contains("tabulated_path"));
    if (forms != 1) throw ConfigError("bath: exactly one of family, tabulated, tabulated_path is required");
    if (j.contains("family")) {
        const json& f = j.at("family");
        allow_keys(f, "bath.family", {"n", "m", "c1"});
        AnalyticFamily a;
        a.n = get_int(f, "bath.family", "n", 0);
        a.m = get_int(f, "bath.family", "m", 1);
        a.c1 = f.contains("c1") ? get_positive(f, "bath.family", "c1") : 1.0;
        b.form_factor = a;
    } else if (j.contains("tabulated")) {
        const json& t = j.at("tabulated");
        allow_keys(t, "bath.tabulated", {"omega", "J"});
        if (!t.contains("omega") || !t.contains("J")) throw ConfigError("bath.tabulated: omega and J are required");
        try {
            b.form_factor = make_tabulated(number_array(t.at("omega"), "bath.tabulated.omega"),
                                           number_array(t.at("J"), "bath.tabulated.J"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("bath.tabulated: ") + e.what());
        }
    } else {
        std::filesystem::path p = get_string(j, w, "tabulated_path");
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        b.form_factor = read_tabulated_csv(p.string());
    }
    try {
        validate_bath(b);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bath: ") + e.what());
    }
    return b;
}

void parse_run(const json& j, RunConfig& rc) {
    const std::string w = "run";
    allow_keys(j, w, {"lambda", "times", "tolerances", "oracle", "generator", "initial_state", "random_states"});
    if (j.contains("lambda")) {
        const json& l = j.at("lambda");
        rc.lambdas = l.is_number() ? std::vector<double>{l.get<double>()} : number_array(l, "run.lambda");
        for (double x : rc.lambdas)
            if (!std::isfinite(x) || x < 0.0) throw ConfigError("run.lambda: values must be finite and non-negative");
    }
    if (j.contains("times")) {
        const json& t = j.at("times");
        const std::string wt = "run.times";
        allow_keys(t, wt, {"spacing", "points", "t_max", "relax_multiple"});
        if (t.contains("spacing")) {
            rc.times.spacing = get_string(t, wt, "spacing");
            if (rc.times.spacing != "log" && rc.times.spacing != "linear")
                throw ConfigError("run.times.spacing: expected 'log' or 'linear'");
        }
        if (t.contains("points")) rc.times.points = get_int(t, wt, "points", 2);
        if (t.contains("t_max")) rc.times.t_max = get_positive(t, wt, "t_max");
        if (t.contains("relax_multiple")) rc.times.relax_multiple = get_positive(t, wt, "relax_multiple");
    }
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        const std::string wt = "run.tolerances";
        allow_keys(t, wt, {"bohr", "tail_tol", "max_tail_mass", "omega_tail"});
        if (t.contains("bohr")) rc.bohr_tol = get_positive(t, wt, "bohr");
        if (t.contains("tail_tol")) rc.oracle.options.tail_tol = get_positive(t, wt, "tail_tol");
        if (t.contains("max_tail_mass")) rc.oracle.options.max_tail_mass = get_positive(t, wt, "max_tail_mass");
        if (t.contains("omega_tail")) rc.oracle.options.max_omega_tail = get_positive(t, wt, "omega_tail");
    }
    if (j.contains("oracle")) {
        const json& o = j.at("oracle");
        const std::string wo = "run.oracle";
        allow_keys(o, wo, {"n_modes", "omega_max", "cutoff", "floor_modes", "points", "dim_cap"});
        if (o.contains("n_modes")) rc.oracle.n_modes = get_int(o, wo, "n_modes", 1);
        if (o.contains("omega_max")) rc.oracle.omega_max = get_positive(o, wo, "omega_max");
        if (o.contains("cutoff")) rc.oracle.options.cutoff = get_int(o, wo, "cutoff", 1);
        if (o.contains("floor_modes")) rc.oracle.floor_modes = get_int(o, wo, "floor_modes", 0);
        if (o.contains("points")) rc.oracle.points = get_int(o, wo, "points", 2);
        if (o.contains("dim_cap")) rc.oracle.options.dim_cap = get_int(o, wo, "dim_cap", 2);
    }
    if (j.contains("generator")) {
        rc.generator = get_string(j, w, "generator");
        static const std::set<std::string> tags{"davies", "resonance", "M", "M_d", "oracle"};
        if (!tags.count(rc.generator))
            throw ConfigError("run.generator: expected one of davies, resonance, M, M_d, oracle");
    }
    if (j.contains("initial_state")) rc.initial_state = j.at("initial_state");
    if (j.contains("random_states")) rc.random_states = get_int(j, w, "random_states", 1);
}

} // namespace

cmat named_coupling(const std::string& name, int n) {
    cmat g = cmat::Zero(n, n);
    if (name == "sigma_x") {
        for (int i = 0; i + 1 < n; ++i) g(i, i + 1) = g(i + 1, i) = 1.0;
    } else if (name == "sigma_z") {
        for (int i = 0; i < n; ++i) g(i, i) = n == 1 ? 1.0 : 1.0 - 2.0 * i / (n - 1);
    } else if (name == "zero") {
    } else {
        throw std::invalid_argument("unknown named coupling '" + name + "'");
    }
    return g;
}

json matrix_to_json(const cmat& m) {
    json re = json::array(), im = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json rr = json::array(), ir = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            rr.push_back(m(r, c).real());
            ir.push_back(m(r, c).imag());
        }
        re.push_back(rr);
        im.push_back(ir);
    }
    return json{{"real", re}, {"imag", im}};
}

cmat matrix_from_json(const json& j, const std::string& where) {
    if (j.is_array()) return real_block(j, where).cast<cplx>();
    allow_keys(j, where, {"real", "imag"});
    if (!j.contains("real")) throw ConfigError(where + ".real: missing");
    const rmat re = real_block(j.at("real"), where + ".real");
    rmat im = rmat::Zero(re.rows(), re.cols());
    if (j.contains("imag")) {
        im = real_block(j.at("imag"), where + ".imag");
        if (im.rows() != re.rows()) throw ConfigError(where + ".imag: shape differs from real part");
    }
    cmat m(re.rows(), re.cols());
    m.real() = re;
    m.imag() = im;
    return m;
}

cmat resolve_state(const json& spec, const SystemSpec& sys, double beta, std::uint64_t seed) {
    const int n = sys.dim;
    if (spec.is_string()) {
        const std::string s = spec.get<std::string>();
        if (s == "plus") {
            const cvec v = cvec::Constant(n, 1.0 / std::sqrt(double(n)));
            return v * v.adjoint();
        }
        if (s == "ground") return sys.eigvecs.col(0) * sys.eigvecs.col(0).adjoint();
        if (s == "excited") return sys.eigvecs.col(n - 1) * sys.eigvecs.col(n - 1).adjoint();
        if (s == "mixed") return cmat::Identity(n, n) / double(n);
        if (s == "gibbs") return gibbs(sys.h_sys, beta).rho;
        if (s == "random") {
            std::mt19937_64 rng(seed);
            return random_density(n, rng);
        }
        throw ConfigError("run.initial_state: unknown state '" + s + "'");
    }
    const cmat rho = matrix_from_json(spec, "run.initial_state");
    if (rho.rows() != n) throw ConfigError("run.initial_state: dimension mismatch");
    if (hermiticity_deviation(rho) > 1e-12) throw ConfigError("run.initial_state: hermiticity violated");
    if (std::abs(rho.trace() - 1.0) > 1e-10) throw ConfigError("run.initial_state: trace is not 1");
    if (herm_eig(hermitize(rho)).values.minCoeff() < -1e-12) throw ConfigError("run.initial_state: not positive");
    return rho;
}

RunConfig parse_config(const json& j, const std::string& base_dir) {
    allow_keys(j, "", {"system", "bath", "run", "units"});
    if (!j.contains("system")) throw ConfigError("system: missing");
    if (!j.contains("bath")) throw ConfigError("bath: missing");
    if (j.contains("units") && !j.at("units").is_string()) throw ConfigError("units: expected a string");
    RunConfig rc;
    rc.system = parse_system(j.at("system"));
    rc.bath = parse_bath(j.at("bath"), base_dir);
    if (j.contains("run")) parse_run(j.at("run"), rc);
    resolve_state(rc.initial_state, rc.system, rc.bath.beta);
    return rc;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: parse error: ") + e.what());
    }
    return parse_config(j, std::filesystem::path(path).parent_path().string());
}

json default_config_json() {
    return json::parse(R"({
  "units": "dimensionless",
  "system": {"preset": "qubit", "delta": 1.0, "coupling": "sigma_x"},
  "bath": {"beta": 1.0, "family": {"n": 0, "m": 1, "c1": 1.0}},
  "run": {
    "lambda": [0.1],
    "times": {"spacing": "log", "points": 64, "relax_multiple": 20},
    "tolerances": {"bohr": 1e-9, "tail_tol": 1e-6, "max_tail_mass": 0.05, "omega_tail": 1e-10},
    "oracle": {"n_modes": 6, "cutoff": 3, "floor_modes": 8, "points": 20},
    "generator": "davies",
    "initial_state": "plus"
  }
})");
}

} // namespace oqs
