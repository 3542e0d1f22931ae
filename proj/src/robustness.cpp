#include "regsim/robustness.hpp"

#include "regsim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace regsim {

std::pair<std::vector<double>, std::vector<double>> curve_band(const std::vector<CriticalCurve>& curves)
{
    if (curves.empty())
        throw ValidationError("curve band needs at least one curve");
    const std::size_t rows = curves.front().mu_c.size();
    std::vector<double> mean(rows, 0.0);
    std::vector<double> stddev(rows, 0.0);
    for (const CriticalCurve& c : curves)
        if (c.mu_c.size() != rows || c.eta_values != curves.front().eta_values)
            throw ValidationError("curves do not share an eta axis");

    std::vector<double> column(curves.size());
    for (std::size_t j = 0; j < rows; ++j) {
        for (std::size_t s = 0; s < curves.size(); ++s)
            column[s] = curves[s].mu_c[j];
        const Moments m = moments(column);
        mean[j] = m.mean;
        if (m.n > 1)
            stddev[j] = std::sqrt(m.squares / static_cast<double>(m.n - 1));
    }
    return {mean, stddev};
}

SeedRobustness robustness_seeds(const SweepSpec& spec, int n_seeds, const GridOptions& options,
                                std::uint64_t seed_stride)
{
    if (n_seeds < 2)
        throw ValidationError("seed robustness needs at least 2 seeds");
    validate(spec);

    SeedRobustness out;
    out.eta_values = spec.eta_values;
    GridOptions grid_options = options;
    grid_options.keep_series = false;
    for (int s = 0; s < n_seeds; ++s) {
        SweepSpec seeded = spec;
        seeded.base_seed = spec.base_seed + static_cast<std::uint64_t>(s) * seed_stride;
        PhaseGrid grid = run_grid(seeded, grid_options).grid;
        out.curves.push_back(detect_critical(grid));
        out.grids.push_back(std::move(grid));
        out.base_seeds.push_back(seeded.base_seed);
    }
    std::tie(out.mean_curve, out.std_curve) = curve_band(out.curves);
    return out;
}

std::vector<double> WindowRobustness::envelope_width() const
{
    std::vector<double> width(envelope_min.size());
    for (std::size_t j = 0; j < width.size(); ++j)
        width[j] = envelope_max[j] - envelope_min[j];
    return width;
}

WindowRobustness robustness_windows(const StoredRuns& runs, std::span<const double> burn_in_fractions)
{
    if (burn_in_fractions.empty())
        throw ValidationError("window robustness needs at least one burn-in fraction");
    for (double f : burn_in_fractions)
        if (!(f > 0.0 && f < 0.8))
            throw ValidationError("burn-in fractions must lie in (0, 0.8)");

    WindowRobustness out;
    out.burn_in_fractions.assign(burn_in_fractions.begin(), burn_in_fractions.end());
    out.eta_values = runs.eta_values;
    for (double f : burn_in_fractions)
        out.curves.push_back(detect_critical(grid_from_runs(runs, f, Observable::CoherenceGap)));

    out.envelope_min = out.curves.front().mu_c;
    out.envelope_max = out.curves.front().mu_c;
    for (const CriticalCurve& c : out.curves)
        for (std::size_t j = 0; j < c.mu_c.size(); ++j) {
            out.envelope_min[j] = std::min(out.envelope_min[j], c.mu_c[j]);
            out.envelope_max[j] = std::max(out.envelope_max[j], c.mu_c[j]);
        }
    return out;
}

MetricCrosscheck metric_crosscheck(const StoredRuns& runs, double burn_in_fraction)
{
    MetricCrosscheck out;
    out.from_coherence_gap = detect_critical(grid_from_runs(runs, burn_in_fraction, Observable::CoherenceGap));
    out.from_entropy = detect_critical(grid_from_runs(runs, burn_in_fraction, Observable::Entropy));
    for (std::size_t j = 0; j < out.from_coherence_gap.mu_c.size(); ++j)
        out.abs_difference.push_back(std::abs(out.from_coherence_gap.mu_c[j] - out.from_entropy.mu_c[j]));
    return out;
}

} // namespace regsim
