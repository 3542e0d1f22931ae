#pragma once

#include "regsim/errors.hpp"
#include "regsim/phase_grid.hpp"
#include "regsim/simulation.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace regsim {

/// A config line that failed to parse or validate; the message names the line.
class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/**
 * Every setting of a run. Defaults are the global simulation parameters;
 * steps, runs and grid resolution default per analysis mode
 * (publication: 10000 steps, 15 runs, 40x40; exploratory: 4000, 5, 20x20).
 */
struct RunConfig {
    // run
    int steps = 10000;
    double dt = 0.01;
    StepOrdering ordering = StepOrdering::PerceptionFirst;
    AnalysisMode mode = AnalysisMode::Publication;
    double eta = 0.13;
    double mu0 = 0.08;
    std::uint64_t base_seed = 123456789;
    int runs = 15;
    double burn_in_fraction = 0.2;
    std::string output_dir = "runs/default";

    // state
    int dim = 16;
    double salience_center = 6.0;
    double salience_width = 2.0;
    double phase_noise = 0.2;

    // generator
    double energy_scale = 0.15;
    double coupling = 0.08;
    double locality = 2.0;

    // control
    double target_entropy = 0.30;
    double alpha = 2e-4;
    double mu_min = 1e-3;
    double mu_max = 1.0;
    double w_coherence = 0.0;

    double dephase_scale = 1.0;
    bool entropy_normalized = true;

    // sweep grid
    double sweep_mu_start = 0.05;
    double sweep_mu_stop = 1.0;
    int sweep_mu_points = 40;
    double sweep_eta_start = 1e-4;
    double sweep_eta_stop = 0.30;
    int sweep_eta_points = 40;

    // robustness analyses
    int robustness_seeds = 3;
    std::vector<double> robustness_burn_in_fractions{0.1, 0.2, 0.3};

    bool output_series = false;

    bool operator==(const RunConfig&) const = default;
};

/// Defaults for one analysis mode.
RunConfig default_config(AnalysisMode mode = AnalysisMode::Publication);

/// Every accepted key, sorted.
std::vector<std::string_view> config_keys();

/**
 * Parses `key = value` lines ('#' starts a comment). `overrides` are extra
 * `key=value` items applied after the file, as if edited into it. Unknown
 * keys, malformed or out-of-range values and duplicate keys throw ConfigError.
 */
RunConfig parse_config(std::string_view text, std::span<const std::string> overrides = {},
                       std::string_view source = "<config>");

RunConfig load_config(const std::filesystem::path& path, std::span<const std::string> overrides = {});

/// Canonical listing: sorted keys, shortest round-trip decimals.
std::string to_properties(const RunConfig& config);

/// Writes run.properties into `dir`; returns its path.
std::filesystem::path write_run_properties(const RunConfig& config, const std::filesystem::path& dir);

SimulationParams simulation_params(const RunConfig& config);
SweepSpec sweep_spec(const RunConfig& config);

/// Shortest decimal (non-exponent) text that parses back to exactly `value`.
std::string format_decimal(double value);

} // namespace regsim
