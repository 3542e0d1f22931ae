#include "regsim/simulation.hpp"

#include "regsim/errors.hpp"
#include "regsim/worker_pool.hpp"

#include <cmath>
#include <string>

namespace regsim {

GeneratorParams SimulationParams::generator_params() const
{
    return {dim, energy_scale, coupling, locality, salience_center, salience_width};
}

NoiseParams SimulationParams::noise_params(double eta) const
{
    return {eta, phase_noise, dephase_scale};
}

ControllerState SimulationParams::controller(double mu0) const
{
    ControllerState ctrl;
    ctrl.mu = mu0;
    ctrl.mu_min = mu_min;
    ctrl.mu_max = mu_max;
    ctrl.alpha = alpha;
    ctrl.s_target = target_entropy;
    ctrl.w_coherence = w_coherence;
    ctrl.entropy_ceiling = normalized_entropy ? 1.0 : std::log(static_cast<double>(dim));
    return ctrl;
}

void validate(const SimulationParams& p)
{
    if (p.steps < 1)
        throw ValidationError("steps must be at least 1");
    if (!(p.dt > 0.0))
        throw ValidationError("dt must be positive");
    if (p.dim < 2)
        throw ValidationError("dim must be at least 2");
    if (!(p.salience_width > 0.0))
        throw ValidationError("salience width must be positive");
    if (!(p.phase_noise >= 0.0))
        throw ValidationError("phase noise must be non-negative");
    if (!(p.locality > 0.0))
        throw ValidationError("locality must be positive");
    if (!(p.dephase_scale > 0.0))
        throw ValidationError("dephase scale must be positive");
    ControllerState probe = p.controller(p.mu_min);
    validate(probe);
}

TimeSeries simulate_run(const SimulationParams& params, double mu0, double eta, std::uint64_t seed)
{
    return simulate_run(params, build_generator(params.generator_params()), mu0, eta, seed);
}

TimeSeries simulate_run(const SimulationParams& params, const GeneratorPair& gen, double mu0,
                        double eta, std::uint64_t seed)
{
    if (!(eta >= 0.0) || !std::isfinite(eta))
        throw ValidationError("noise amplitude must be finite and non-negative");

    RandomStream rng(seed);
    DensityMatrix rho = make_initial_state(params.dim, params.salience_center, params.salience_width,
                                           params.phase_noise, rng);
    LoopState state = start_loop(std::move(rho), params.controller(mu0), params.normalized_entropy);
    const NoiseParams noise = params.noise_params(eta);

    TimeSeries series;
    series.dt = params.dt;
    series.records.reserve(static_cast<std::size_t>(params.steps));
    for (int k = 0; k < params.steps; ++k) {
        auto [next, record] = advance_step(state, gen, noise, params.ordering, params.dt,
                                           params.normalized_entropy, rng);
        series.records.push_back(record);
        state = std::move(next);
    }
    return series;
}

std::pair<TimeSeries, TimeSeries> ensemble_statistics(const std::vector<TimeSeries>& runs)
{
    if (runs.empty())
        throw ValidationError("ensemble needs at least one run");
    const std::size_t steps = runs.front().records.size();
    for (const TimeSeries& run : runs)
        if (run.records.size() != steps)
            throw ValidationError("ensemble runs differ in length");

    TimeSeries mean{runs.front().dt, runs.front().records};
    TimeSeries stddev = mean;
    std::vector<double> samples(runs.size());
    auto reduce = [&](std::size_t k, double StepRecord::*field) {
        for (std::size_t r = 0; r < runs.size(); ++r)
            samples[r] = runs[r].records[k].*field;
        const Moments m = moments(samples);
        mean.records[k].*field = m.mean;
        stddev.records[k].*field = std::sqrt(m.squares / static_cast<double>(m.n));
    };
    for (std::size_t k = 0; k < steps; ++k)
        for (double StepRecord::*field : {&StepRecord::s_vn, &StepRecord::delta_c, &StepRecord::mu,
                                          &StepRecord::delta_mu})
            reduce(k, field);
    return {std::move(mean), std::move(stddev)};
}

TimecourseResult run_timecourse(const SimulationParams& params, double mu0, double eta, int runs,
                                std::uint64_t base_seed, int jobs)
{
    validate(params);
    if (runs < 1)
        throw ValidationError("timecourse needs at least one run");
    const GeneratorPair gen = build_generator(params.generator_params());

    TimecourseResult result;
    result.runs.resize(static_cast<std::size_t>(runs));
    parallel_for(result.runs.size(), jobs, [&](std::size_t r) {
        try {
            result.runs[r] = simulate_run(params, gen, mu0, eta, base_seed + r);
        } catch (const std::exception& e) {
            throw NumericalError("run " + std::to_string(r) + ": " + e.what());
        }
    });
    auto [mean, stddev] = ensemble_statistics(result.runs);
    result.mean = std::move(mean);
    result.stddev = std::move(stddev);
    return result;
}

} // namespace regsim
