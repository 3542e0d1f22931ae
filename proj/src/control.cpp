#include "regsim/control.hpp"

#include "regsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace regsim {

namespace {

constexpr double kSignalSlack = 1e-9;

double checked_signal(double value, double upper, const char* name)
{
    if (!std::isfinite(value) || value < -kSignalSlack || value > upper + kSignalSlack)
        throw ValidationError(std::string(name) + " signal out of range: " + std::to_string(value));
    return std::clamp(value, 0.0, upper);
}

} // namespace

void validate(const ControllerState& ctrl)
{
    if (!(ctrl.mu_min > 0.0))
        throw ValidationError("mu_min must be positive");
    if (!(ctrl.mu_max > ctrl.mu_min))
        throw ValidationError("mu_max must exceed mu_min");
    if (!(ctrl.alpha > 0.0))
        throw ValidationError("learning rate alpha must be positive");
    if (!(ctrl.w_coherence >= 0.0))
        throw ValidationError("w_coherence must be non-negative");
    if (!(ctrl.entropy_ceiling > 0.0))
        throw ValidationError("entropy ceiling must be positive");
    if (!(ctrl.mu >= ctrl.mu_min && ctrl.mu <= ctrl.mu_max))
        throw ValidationError("mu " + std::to_string(ctrl.mu) + " outside [mu_min, mu_max]");
}

ControllerState update_mu(const ControllerState& ctrl, double entropy, double delta_c)
{
    const double s = checked_signal(entropy, ctrl.entropy_ceiling, "entropy");
    const double gap = checked_signal(delta_c, 1.0, "coherence gap");

    const double error = (s - ctrl.s_target) + ctrl.w_coherence * gap;
    const double raw = ctrl.mu + ctrl.alpha * error;

    ControllerState next = ctrl;
    next.mu = std::clamp(raw, ctrl.mu_min, ctrl.mu_max);
    next.last_delta_mu = next.mu - ctrl.mu;
    return next;
}

} // namespace regsim
