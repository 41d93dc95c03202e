#pragma once

#include "cgl/analysis.hpp"

#include <cmath>
#include <map>
#include <string>

namespace cgl {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Fully validated run configuration parsed from the flat key = value format
/// (see README for the schema).  `resolved` echoes every key after defaults
/// are applied and is embedded verbatim in the run manifest.
struct RunConfig {
    std::string scenario;

    int dimension = 1;
    double l1 = M_PI, l2 = M_PI;
    int n1 = 64, n2 = 64;

    EvolutionParams params;

    std::string init_kind = "eigenmode";
    std::string init_modes = "1:1:0";
    double init_amplitude = 1.0;
    std::uint64_t init_seed = 1;
    double init_decay = 1.0;
    std::string init_file;

    std::string forcing_kind = "zero";
    std::string forcing_modes = "1:1:0";
    double forcing_amplitude = 1.0;
    double forcing_t0 = 0.0, forcing_t1 = 0.0;
    std::string forcing_file;

    std::string output_dir = "out";
    std::uint64_t seed = 1;
    int threads = 1;

    double tol_fixed_point = 1e-8;
    int fp_max_iter = 50;
    double fp_s_request = 0.0;  // 0 = use params.horizon

    double blowup_theta = 1e8;
    int blowup_max_refinements = 8;

    int certify_trials = 200;
    double certify_radius_factor = 0.5;

    std::vector<double> sweep_kappa;
    std::vector<double> sweep_amplitude;

    bool verify_fast = false;

    std::map<std::string, std::string> resolved;

    Domain domain() const;
};

/// Parse and validate a config file.  Unknown keys, duplicate keys, type
/// errors and domain/parameter violations are reported with the offending
/// line; a supercritical exponent is reported as such before the dimension
/// support check.  `forced_scenario` supplies the scenario for subcommands
/// that imply one (and must agree with an explicit scenario key).
RunConfig parse_config(const std::string& path, const std::string& forced_scenario = "");
RunConfig parse_config_text(const std::string& text, const std::string& forced_scenario = "");

/// Materialize the initial condition / forcing described by a config.
ComplexField build_initial(const RunConfig& cfg);
Forcing build_forcing(const RunConfig& cfg);

/// Parse a mode combination "k:re:im;..." (1-D) or "k1xk2:re:im;..." (2-D)
/// into a field with those sine-mode coefficients on (u1, u2).
ComplexField parse_mode_field(const Domain& domain, const std::string& spec);

}  // namespace cgl
