#include "regsim/dynamics.hpp"

#include "regsim/errors.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace regsim {

GeneratorPair build_generator(const GeneratorParams& p)
{
    if (p.dim < 2)
        throw ValidationError("generator needs dim >= 2");
    if (!(p.locality > 0.0))
        throw ValidationError("locality must be positive");
    if (!(p.salience_width > 0.0))
        throw ValidationError("salience width must be positive");

    const int d = p.dim;
    GeneratorPair gen{ComplexMatrix::Zero(d, d), ComplexMatrix::Zero(d, d)};
    for (int k = 0; k < d; ++k) {
        const double offset = k - p.salience_center;
        const double salience = std::exp(-offset * offset / (2.0 * p.salience_width * p.salience_width));
        gen.h0(k, k) = p.energy_scale * (static_cast<double>(k) / (d - 1) - salience);
    }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j)
                gen.h_int(i, j) = p.coupling * std::exp(-std::abs(i - j) / p.locality);
    return gen;
}

double NoiseParams::mixture_weight(double dt) const
{
    return std::clamp(eta * dephase_scale * dt, 0.0, 1.0);
}

std::string_view to_string(StepOrdering ordering)
{
    return ordering == StepOrdering::PerceptionFirst ? "pf" : "af";
}

DensityMatrix coherent_step(const DensityMatrix& rho, const GeneratorPair& gen, double mu, double dt)
{
    if (!(dt > 0.0))
        throw ValidationError("time step must be positive");
    if (!std::isfinite(mu))
        throw ValidationError("gain must be finite");
    const ComplexMatrix& m = rho.matrix();
    // For Hermitian h and m, m h = (h m)^dagger, so one product gives the commutator.
    const ComplexMatrix hm = gen.at(mu) * m;
    const ComplexMatrix increment = Complex(0.0, -dt) * (hm - hm.adjoint());
    assert(std::abs(increment.trace()) <= 1e-12);
    return repair(DensityMatrix(m + increment));
}

DensityMatrix apply_noise(const DensityMatrix& rho, const NoiseParams& noise, double dt,
                          RandomStream& rng)
{
    if (!(dt > 0.0))
        throw ValidationError("time step must be positive");
    const int d = rho.dim();
    const double lambda = noise.mixture_weight(dt);
    const double kick_std = noise.phase_noise * std::sqrt(dt);

    Eigen::VectorXcd phases(d);
    for (int k = 0; k < d; ++k)
        phases[k] = std::polar(1.0, rng.gaussian(kick_std));

    // Off-diagonal entries shrink by (1 - lambda) and pick up relative phases;
    // populations are left untouched.
    ComplexMatrix m = (1.0 - lambda) * rho.matrix().cwiseProduct(phases * phases.adjoint());
    m.diagonal() = rho.matrix().diagonal();
    return repair(DensityMatrix(std::move(m)));
}

Observation observe(const DensityMatrix& rho, bool normalized_entropy)
{
    return {von_neumann_entropy(rho, normalized_entropy), coherence_gap(rho)};
}

LoopState start_loop(DensityMatrix rho, ControllerState controller, bool normalized_entropy)
{
    validate(controller);
    const Observation first = observe(rho, normalized_entropy);
    return LoopState{std::move(rho), controller, first, 0};
}

std::pair<LoopState, StepRecord> advance_step(const LoopState& state, const GeneratorPair& gen,
                                              const NoiseParams& noise, StepOrdering ordering,
                                              double dt, bool normalized_entropy, RandomStream& rng)
{
    ControllerState controller = state.controller;
    DensityMatrix rho = state.rho;

    if (ordering == StepOrdering::PerceptionFirst) {
        rho = apply_noise(rho, noise, dt, rng);
        const Observation integrated = observe(rho, normalized_entropy);
        controller = update_mu(controller, integrated.entropy, integrated.delta_c);
        rho = coherent_step(rho, gen, controller.mu, dt);
    } else {
        controller = update_mu(controller, state.observed.entropy, state.observed.delta_c);
        rho = coherent_step(rho, gen, controller.mu, dt);
        rho = apply_noise(rho, noise, dt, rng);
    }

    const Observation final_obs = observe(rho, normalized_entropy);
    const long step = state.step + 1;
    StepRecord record{step, static_cast<double>(step) * dt, final_obs.entropy, final_obs.delta_c,
                      controller.mu, controller.last_delta_mu};
    return {LoopState{std::move(rho), controller, final_obs, step}, record};
}

} // namespace regsim
