#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "common.hpp"
#include "oqs/cli.hpp"

using namespace oqs;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "oqs");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("oqs_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_config(const fs::path& dir, const json& j) {
    const fs::path p = dir / "config.json";
    std::ofstream(p) << j.dump(2);
    return p;
}

std::string config_error(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("default config parses") {
    const RunConfig rc = parse_config(default_config_json());
    CHECK(rc.system.dim == 2);
    CHECK(rc.lambdas == std::vector<double>{0.1});
    CHECK(rc.generator == "davies");
}

TEST_CASE("schema violations name the offending key") {
    json j = default_config_json();
    j["run"]["oracle"]["modes"] = 6;
    CHECK(config_error(j).find("run.oracle.modes") != std::string::npos);

    j = default_config_json();
    j["bath"]["beta"] = "hot";
    CHECK(config_error(j).find("bath.beta") != std::string::npos);

    j = default_config_json();
    j["bath"].erase("family");
    CHECK(config_error(j).find("bath") != std::string::npos);

    j = default_config_json();
    j["run"]["tolerances"]["bohr"] = 0.0;
    CHECK(config_error(j).find("run.tolerances.bohr") != std::string::npos);

    j = default_config_json();
    j["run"]["tolerances"]["max_tail_mass"] = -1e-3;
    CHECK(config_error(j).find("must be positive") != std::string::npos);

    j = default_config_json();
    j["system"] = {{"h", {{"real", {{0.0, 1.0}, {0.5, 1.0}}}}}, {"coupling", "sigma_x"}};
    CHECK(config_error(j).find("hermiticity") != std::string::npos);

    j = default_config_json();
    j["extra"] = 1;
    CHECK(config_error(j).find("extra: unknown key") != std::string::npos);
}

TEST_CASE("presets and explicit matrices") {
    json j = default_config_json();
    j["system"] = {{"preset", "three_level"}, {"e1", 1.0}, {"e2", 2.5}, {"coupling", "sigma_z"}};
    RunConfig rc = parse_config(j);
    CHECK(rc.system.dim == 3);
    CHECK(rc.system.coupling(1, 1) == 0.0);
    CHECK(rc.system.coupling(2, 2) == -1.0);

    j["system"] = {{"h", {{"real", {{0.0, 0.0}, {0.0, 1.0}}}, {"imag", {{0.0, 0.5}, {-0.5, 0.0}}}}},
                   {"coupling", {{"real", {{0.0, 1.0}, {1.0, 0.0}}}}}};
    rc = parse_config(j);
    CHECK(rc.system.h_sys(0, 1) == cplx(0.0, 0.5));
}

TEST_CASE("tabulated bath from a file") {
    const fs::path dir = scratch("tab");
    {
        std::ofstream f(dir / "j.csv");
        f << "omega,J\n";
        for (int i = 0; i <= 200; ++i) {
            const double w = i * 0.1;
            f << w << ',' << spectral_density(oqs::testing::family(), w) << '\n';
        }
    }
    json j = default_config_json();
    j["bath"] = {{"beta", 1.0}, {"tabulated_path", "j.csv"}};
    const RunConfig rc = parse_config(j, dir.string());
    CHECK(h_hat(rc.bath, 1.0) == doctest::Approx(h_hat(oqs::testing::family(), 1.0)).epsilon(1e-3));
    j["bath"]["tabulated_path"] = "missing.csv";
    CHECK_THROWS_AS(parse_config(j, dir.string()), ConfigError);
}

TEST_CASE("fmt17 round-trips doubles") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(fmt17(x)) == x);
    CHECK(fmt17(0.1) == "0.10000000000000001");
}

TEST_CASE("generator command: files, rates, round trip, determinism") {
    const fs::path dir = scratch("gen");
    const fs::path cfg = write_config(dir, default_config_json());
    REQUIRE(run({"generator", "--config", cfg.string(), "--out", (dir / "a").string()}) == 0);
    REQUIRE(run({"generator", "--config", cfg.string(), "--out", (dir / "b").string()}) == 0);
    CHECK(slurp(dir / "a" / "generator.json") == slurp(dir / "b" / "generator.json"));
    CHECK(slurp(dir / "a" / "cpt_report.csv") == slurp(dir / "b" / "cpt_report.csv"));

    const json g = json::parse(slurp(dir / "a" / "generator.json"));
    const RunConfig rc = parse_config(default_config_json());
    const Superoperator rebuilt = generator_from_json(g);
    const DaviesGenerator direct = build_davies(rc.system, rc.bath, 0.1);
    CHECK(max_abs(rebuilt.matrix - direct.total.matrix) <= 1e-12);
    CHECK(max_abs(rebuilt.matrix - matrix_from_json(g["generator"], "generator")) <= 1e-12);

    std::vector<double> rates = g["rates"].get<std::vector<double>>();
    for (double u : {1.0, -1.0, 0.0}) {
        const double h = h_hat(rc.bath, u);
        CHECK(std::any_of(rates.begin(), rates.end(), [&](double r) { return std::abs(r - h) <= 1e-14 * h; }));
    }

    const std::string csv = slurp(dir / "a" / "cpt_report.csv");
    CHECK(csv.rfind("t,min_choi_eig,trace_dev\n", 0) == 0);
}

TEST_CASE("generator with zero coupling") {
    const fs::path dir = scratch("zero");
    json j = default_config_json();
    j["system"]["coupling"] = {{"real", {{0.0, 0.0}, {0.0, 0.0}}}};
    REQUIRE(run({"generator", "--config", write_config(dir, j).string(), "--out", dir.string()}) == 0);
    const json g = json::parse(slurp(dir / "generator.json"));
    CHECK(max_abs(matrix_from_json(g["K"], "K")) == 0.0);
}

TEST_CASE("exit codes") {
    const fs::path dir = scratch("codes");
    json j = default_config_json();
    j["bath"]["beta"] = -1.0;
    CHECK(run({"generator", "--config", write_config(dir, j).string(), "--out", dir.string()}) == 2);
    CHECK(run({"generator", "--config", (dir / "nope.json").string()}) == 2);
    CHECK(run({"frobnicate"}) == 2);
    CHECK(run({"validate", "--threads", "0"}) == 2);
}

TEST_CASE("resonances command") {
    const fs::path dir = scratch("res");
    json j = default_config_json();
    j["run"]["lambda"] = {0.0};
    REQUIRE(run({"resonances", "--config", write_config(dir, j).string(), "--out", dir.string()}) == 0);
    std::istringstream in(slurp(dir / "resonances.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "e,s,re_a,im_a,re_epsilon,im_epsilon");
    int rows = 0;
    while (std::getline(in, line)) {
        if (line[0] == '#') {
            CHECK(line.find("gamma_fgr=") != std::string::npos);
            continue;
        }
        ++rows;
        std::vector<double> v;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) v.push_back(std::stod(cell));
        CHECK(v[4] == v[0]);
        CHECK(v[5] == 0.0);
    }
    CHECK(rows == 4);
}

TEST_CASE("propagate command reaches the Gibbs state") {
    const fs::path dir = scratch("prop");
    json j = default_config_json();
    j["run"]["times"] = {{"spacing", "log"}, {"points", 12}, {"relax_multiple", 60}};
    j["run"]["initial_state"] = "excited";
    REQUIRE(run({"propagate", "--config", write_config(dir, j).string(), "--out", dir.string()}) == 0);
    std::istringstream in(slurp(dir / "trajectory.csv"));
    std::string line, last;
    std::getline(in, line);
    CHECK(line == "t,re_0_0,re_0_1,re_1_0,re_1_1,im_0_0,im_0_1,im_1_0,im_1_1,trace,p_0,p_1");
    while (std::getline(in, line)) {
        std::vector<double> v;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) v.push_back(std::stod(cell));
        CHECK(std::abs(v[9] - 1.0) < 1e-10);
        last = line;
    }
    std::vector<double> v;
    std::stringstream ls(last);
    for (std::string cell; std::getline(ls, cell, ',');) v.push_back(std::stod(cell));
    const RunConfig rc = parse_config(default_config_json());
    const cmat g = gibbs(rc.system.h_sys, 1.0).rho;
    CHECK(std::abs(v[1] - g(0, 0).real()) < 1e-8);
    CHECK(std::abs(v[4] - g(1, 1).real()) < 1e-8);
}

TEST_CASE("propagate with every generator tag") {
    const fs::path dir = scratch("tags");
    for (const char* tag : {"davies", "resonance", "M", "M_d"}) {
        json j = default_config_json();
        j["run"]["generator"] = tag;
        j["run"]["times"]["points"] = 5;
        CHECK(run({"propagate", "--config", write_config(dir, j).string(), "--out", dir.string()}) == 0);
    }
}

TEST_CASE("equilibrium and validate commands") {
    const fs::path dir = scratch("eq");
    REQUIRE(run({"equilibrium", "--out", dir.string()}) == 0);
    const json e = json::parse(slurp(dir / "equilibrium.json"));
    CHECK(e.contains("rho2"));
    CHECK(e.contains("M_d"));
    CHECK(run({"validate", "--out", dir.string(), "--seed", "7"}) == 0);
    CHECK(slurp(dir / "validate.csv").find("FAIL") == std::string::npos);
}
