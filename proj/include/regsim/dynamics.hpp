#pragma once

#include "regsim/control.hpp"
#include "regsim/density_matrix.hpp"
#include "regsim/random.hpp"

#include <string_view>
#include <utility>

namespace regsim {

/// Static parts of the regulation-modulated generator H(mu) = h0 + mu * h_int.
struct GeneratorPair {
    ComplexMatrix h0;     // diagonal site energies
    ComplexMatrix h_int;  // real symmetric coupling, zero diagonal

    ComplexMatrix at(double mu) const { return h0 + mu * h_int; }
};

struct GeneratorParams {
    int dim = 16;
    double energy_scale = 0.15;
    double coupling = 0.08;
    double locality = 2.0;
    double salience_center = 6.0;
    double salience_width = 2.0;
};

/**
 * h0 = energy_scale * diag(k/(d-1) - g_k), g_k = exp(-(k-center)^2 / (2 width^2));
 * h_int[i][j] = coupling * exp(-|i-j| / locality) off the diagonal.
 */
GeneratorPair build_generator(const GeneratorParams& params);

struct NoiseParams {
    double eta = 0.0;            // environmental noise amplitude
    double phase_noise = 0.0;    // phase-kick scale; per-step std is phase_noise * sqrt(dt)
    double dephase_scale = 1.0;  // converts eta to a per-unit-time dephasing weight

    /// clamp(eta * dephase_scale * dt, 0, 1)
    double mixture_weight(double dt) const;
};

enum class StepOrdering { PerceptionFirst, ActionFirst };

std::string_view to_string(StepOrdering ordering);

/// Explicit Euler step of the commutator term followed by repair().
DensityMatrix coherent_step(const DensityMatrix& rho, const GeneratorPair& gen, double mu, double dt);

/// Dephasing mixture toward diag(rho), then a random diagonal phase kick
/// (one Gaussian per basis index, ascending), then repair().
DensityMatrix apply_noise(const DensityMatrix& rho, const NoiseParams& noise, double dt,
                          RandomStream& rng);

/// Entropy (as fed to the controller) and coherence gap of one state.
struct Observation {
    double entropy = 0.0;
    double delta_c = 0.0;
};

Observation observe(const DensityMatrix& rho, bool normalized_entropy);

struct StepRecord {
    long step = 0;
    double t = 0.0;
    double s_vn = 0.0;
    double delta_c = 0.0;
    double mu = 0.0;
    double delta_mu = 0.0;

    bool operator==(const StepRecord&) const = default;
};

/// Everything one run carries from step to step. `observed` always describes
/// `rho`, i.e. the state at the end of the previous step.
struct LoopState {
    DensityMatrix rho;
    ControllerState controller;
    Observation observed;
    long step = 0;
};

LoopState start_loop(DensityMatrix rho, ControllerState controller, bool normalized_entropy);

/**
 * Advances one step.
 *
 * PerceptionFirst: noise, measure, update mu, coherent step.
 * ActionFirst: update mu from the previous step's measurement, coherent
 * step, noise, measure.
 *
 * Both record the measurement of the final state of the step.
 */
std::pair<LoopState, StepRecord> advance_step(const LoopState& state, const GeneratorPair& gen,
                                              const NoiseParams& noise, StepOrdering ordering,
                                              double dt, bool normalized_entropy, RandomStream& rng);

} // namespace regsim
