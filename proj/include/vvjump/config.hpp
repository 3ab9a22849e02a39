#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "vvjump/mcmc.hpp"
#include "vvjump/model.hpp"

namespace vvjump {

struct JumpTestConfig {
    int window = 22;
    double alpha = 0.05;
    bool log_returns = false;
};

struct SimulationConfig {
    int paths = 1000;       // predictive simulations of the p-value study
    int days = 1991;        // simulated observation count (estimation T is days - 2)
    std::uint64_t seed = 20070103;
    double y0 = 0.0;        // 0 means start from the stationary mean
    double omega0 = 0.0;    // 0 means start from the stationary mean
    bool auto_start = true;
    double sigma_P = 0.0612;
    std::string start_date = "2007-01-03";
    // p-value study: simulate at retained posterior draws instead of the
    // posterior means.
    bool posterior_draw_predictive = false;
};

// Everything a command needs: model choice, chain settings, priors, test and
// simulation settings, and the simulation parameter values.
struct RunConfig {
    ModelVariant variant = ModelVariant::SVJJ_S;
    ChainConfig chain;
    PriorHyper priors;
    JumpTestConfig jump_test;
    SimulationConfig simulation;
    PParams p_params;   // used by the simulate command
    QParams q_params;
    std::string input_path;
    std::string output_dir = ".";

    void validate() const;
};

// Table-style defaults for the simulation parameters (the full model's
// reported posterior means).
RunConfig default_run_config();

// Plain sectioned key=value text. Unknown sections or keys are errors.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(std::istream& is, const std::string& origin);

// Canonical serialization (every key, fixed order) and its FNV-1a hash,
// embedded in output artifacts so re-runs can be compared.
std::string serialize_run_config(const RunConfig& config);
std::string config_hash(const RunConfig& config);

} // namespace vvjump
