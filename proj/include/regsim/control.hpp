#pragma once

namespace regsim {

/// Adaptive regulation gain and its feedback settings.
struct ControllerState {
    double mu = 0.08;
    double mu_min = 1e-3;
    double mu_max = 1.0;
    double alpha = 2e-4;          // learning rate per step
    double s_target = 0.30;       // target entropy S*
    double w_coherence = 0.0;     // weight of the coherence-gap error term
    double last_delta_mu = 0.0;   // realized (post-clamp) increment of the last update
    double entropy_ceiling = 1.0; // upper bound of the entropy signal: 1 normalized, ln d in nats

    bool operator==(const ControllerState&) const = default;
};

/// Checks mu_min > 0, mu_max > mu_min, alpha > 0, w_coherence >= 0 and
/// mu inside the bounds. Throws ValidationError.
void validate(const ControllerState& ctrl);

/**
 * One feedback update:
 *   mu' = clamp(mu + alpha * ((s - S*) + w_coherence * delta_c), mu_min, mu_max)
 * and last_delta_mu = mu' - mu.
 *
 * entropy must lie in [0, entropy_ceiling] and delta_c in [0, 1]; values
 * outside by less than 1e-9 (round-off) are clamped, larger excursions throw.
 */
ControllerState update_mu(const ControllerState& ctrl, double entropy, double delta_c);

} // namespace regsim
