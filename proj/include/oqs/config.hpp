// config.hpp - run configuration: JSON schema, presets, validation

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "oqs/model.hpp"
#include "oqs/oracle.hpp"

namespace oqs {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TimeGridConfig {
    std::string spacing{"log"}; // log | linear
    int points{64};
    std::optional<double> t_max;
    double relax_multiple{20.0}; // t_max = relax_multiple / (lambda^2 gamma_FGR) when t_max is absent
};

struct OracleConfig {
    int n_modes{6};
    std::optional<double> omega_max;
    int floor_modes{8}; // rerun size used to estimate the discretization floor; 0 disables
    int points{20};
    OracleOptions options;
};

struct RunConfig {
    SystemSpec system;
    BathSpec bath;
    std::vector<double> lambdas{0.1};
    TimeGridConfig times;
    double bohr_tol{1e-9};
    OracleConfig oracle;
    std::string generator{"davies"}; // davies | resonance | M | M_d | oracle
    nlohmann::json initial_state = "plus";
    int random_states{10};
};

RunConfig parse_config(const nlohmann::json& j, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

// The default configuration used when no file is given.
nlohmann::json default_config_json();

// Named couplings: sigma_x (nearest-neighbour), sigma_z (diagonal 1 .. -1).
cmat named_coupling(const std::string& name, int n);

// Resolves "plus", "excited", "ground", "mixed", "gibbs", "random" (seeded) or an explicit matrix.
cmat resolve_state(const nlohmann::json& spec, const SystemSpec& sys, double beta, std::uint64_t seed = 1234);

nlohmann::json matrix_to_json(const cmat& m);
cmat matrix_from_json(const nlohmann::json& j, const std::string& where);

} // namespace oqs
