#pragma once

#include "regsim/control.hpp"
#include "regsim/dynamics.hpp"
#include "regsim/metrics.hpp"

#include <cstdint>
#include <vector>

namespace regsim {

/// Model and integration settings shared by every run of an experiment.
struct SimulationParams {
    int steps = 10000;
    double dt = 0.01;
    int dim = 16;
    double salience_center = 6.0;
    double salience_width = 2.0;
    double phase_noise = 0.2;
    double energy_scale = 0.15;
    double coupling = 0.08;
    double locality = 2.0;
    double dephase_scale = 1.0;
    double target_entropy = 0.30;
    double alpha = 2e-4;
    double mu_min = 1e-3;
    double mu_max = 1.0;
    double w_coherence = 0.0;
    bool normalized_entropy = true;
    StepOrdering ordering = StepOrdering::PerceptionFirst;

    GeneratorParams generator_params() const;
    NoiseParams noise_params(double eta) const;
    ControllerState controller(double mu0) const;
};

void validate(const SimulationParams& params);

/// One closed-loop run from the Gaussian initial state with initial gain mu0.
TimeSeries simulate_run(const SimulationParams& params, double mu0, double eta, std::uint64_t seed);

/// Same, reusing a prebuilt generator.
TimeSeries simulate_run(const SimulationParams& params, const GeneratorPair& gen, double mu0,
                        double eta, std::uint64_t seed);

struct TimecourseResult {
    std::vector<TimeSeries> runs;  // run r used seed base_seed + r
    TimeSeries mean;               // per-step ensemble mean of every column
    TimeSeries stddev;             // per-step population std across runs
};

/// `runs` independent trajectories, executed on `jobs` workers.
TimecourseResult run_timecourse(const SimulationParams& params, double mu0, double eta, int runs,
                                std::uint64_t base_seed, int jobs = 0);

/// Per-step mean and population std of a set of equally long series.
std::pair<TimeSeries, TimeSeries> ensemble_statistics(const std::vector<TimeSeries>& runs);

} // namespace regsim
