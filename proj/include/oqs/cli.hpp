// cli.hpp - command dispatch and the experiment drivers behind each command

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "oqs/config.hpp"
#include "oqs/dynamics.hpp"
#include "oqs/equilibrium.hpp"
#include "oqs/oracle.hpp"
#include "oqs/resonance.hpp"

namespace oqs {

// Entry point of the `oqs` tool. Returns the process exit code (0 ok, 2 config, 3 numeric).
int run_cli(int argc, char** argv);

// %.17g
std::string fmt17(double x);

// Propagation grid of the run section; falls back to t_max = 10 when no relaxation scale exists.
std::vector<double> time_grid(const RunConfig& cfg, double lambda, double gamma_fgr);

nlohmann::json generator_to_json(const SystemSpec& sys, const BathSpec& bath, const DaviesGenerator& gen);

// Rebuilds -i[H_S, .] + lambda^2 K from the stored h_sys, jumps and Lamb shift.
Superoperator generator_from_json(const nlohmann::json& j);

// Oracle comparison at each lambda on [0, T_rec/2].
struct OracleRun {
    double lambda{0.0};
    std::vector<double> times;
    Comparison davies, resonance, renormalized, md_populations, davies_populations;
    std::vector<double> floor; // |V6 - V8| on the same grid, empty when disabled
    double floor_sup{0.0};
    long oracle_dim{0};
    std::vector<int> cutoffs;
    double t_rec{0.0};
};

struct OracleStudy {
    std::vector<OracleRun> runs;
    LinearFit davies_raw;       // sup distance vs lambda
    LinearFit davies_corrected; // after subtracting the floor
    LinearFit resonance, renormalized;
    std::vector<std::string> warnings;
    double seconds{0.0};
};

OracleStudy oracle_study(const RunConfig& cfg, const cmat& rho0);
nlohmann::json scaling_json(const OracleStudy& st);

struct Check {
    std::string name;
    double value{0.0};
    double threshold{0.0};
    bool pass{false};
};

// Invariant suite over the configured system and bath at the first lambda.
std::vector<Check> validation_suite(const RunConfig& cfg, std::uint64_t seed);

} // namespace oqs
