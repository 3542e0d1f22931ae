#pragma once

#include "regsim/phase_grid.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace regsim {

inline constexpr std::uint64_t kSeedStride = 1'000'000;

struct SeedRobustness {
    std::vector<std::uint64_t> base_seeds;
    std::vector<PhaseGrid> grids;
    std::vector<CriticalCurve> curves;
    std::vector<double> eta_values;
    std::vector<double> mean_curve;  // across-seed mean of mu_c(eta)
    std::vector<double> std_curve;   // across-seed sample std
};

/// Repeats the whole sweep with base seeds base_seed + s * seed_stride.
SeedRobustness robustness_seeds(const SweepSpec& spec, int n_seeds, const GridOptions& options = {},
                                std::uint64_t seed_stride = kSeedStride);

/// Across-curve mean and sample std per eta row. Curves must share the eta axis.
std::pair<std::vector<double>, std::vector<double>> curve_band(const std::vector<CriticalCurve>& curves);

struct WindowRobustness {
    std::vector<double> burn_in_fractions;
    std::vector<CriticalCurve> curves;
    std::vector<double> eta_values;
    std::vector<double> envelope_min;
    std::vector<double> envelope_max;

    std::vector<double> envelope_width() const;
};

/// Re-estimates mu_c(eta) from stored runs for each burn-in fraction; no simulation.
WindowRobustness robustness_windows(const StoredRuns& runs, std::span<const double> burn_in_fractions);

struct MetricCrosscheck {
    CriticalCurve from_coherence_gap;
    CriticalCurve from_entropy;
    std::vector<double> abs_difference;  // per eta row
};

/// Estimates mu_c(eta) twice from the same stored runs: from chi of the
/// coherence gap and from chi of the entropy.
MetricCrosscheck metric_crosscheck(const StoredRuns& runs, double burn_in_fraction);

} // namespace regsim
