#pragma once

#include "regsim/metrics.hpp"
#include "regsim/simulation.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace regsim {

enum class AnalysisMode { Exploratory, Publication };

std::string_view to_string(AnalysisMode mode);

/// Grid of initial gains mu0 and noise amplitudes eta, plus run settings.
/// The mu axis is the INITIAL gain; the controller adapts mu within each run.
struct SweepSpec {
    std::vector<double> mu_values;   // strictly ascending, inside [mu_min, mu_max]
    std::vector<double> eta_values;  // strictly ascending, >= 0
    int runs_per_point = 15;
    AnalysisMode mode = AnalysisMode::Publication;
    std::uint64_t base_seed = 123456789;
    double burn_in_fraction = 0.2;
    SimulationParams sim;            // steps, dt, ordering and the model
};

/// Throws ValidationError. Publication mode needs runs_per_point >= 2 and a
/// positive burn-in fraction.
void validate(const SweepSpec& spec);

/// n evenly spaced values from start to stop inclusive.
std::vector<double> linspace(double start, double stop, int n);

/// Seed of run r in cell (eta_index, mu_index).
std::uint64_t grid_seed(const SweepSpec& spec, std::size_t eta_index, std::size_t mu_index, int run);

/// Cell statistics indexed [eta][mu].
struct PhaseGrid {
    std::vector<double> mu_values;
    std::vector<double> eta_values;
    Eigen::MatrixXd mean_delta_c;  // across-run mean of window means
    Eigen::MatrixXd chi;           // across-run mean of window variances
    Eigen::MatrixXi n_runs;

    bool operator==(const PhaseGrid& other) const;
};

/// Per-run series of a completed sweep, in global run-index order.
struct StoredRuns {
    std::vector<double> mu_values;
    std::vector<double> eta_values;
    int runs_per_point = 0;
    std::vector<TimeSeries> series;

    std::size_t index(std::size_t eta_index, std::size_t mu_index, int run) const;
    const TimeSeries& at(std::size_t eta_index, std::size_t mu_index, int run) const
    {
        return series[index(eta_index, mu_index, run)];
    }
};

struct GridOptions {
    int jobs = 0;              // 0: hardware concurrency
    bool keep_series = false;  // retain every run for re-analysis
    std::function<void(std::size_t done, std::size_t total)> progress;
};

struct GridResult {
    PhaseGrid grid;
    std::optional<StoredRuns> runs;
};

/**
 * Runs every cell of the sweep. Run r of cell (j, i) uses seed
 * base_seed + ((j * |mu|) + i) * runs_per_point + r, so the result does not
 * depend on the worker count. A failing run aborts with its cell named.
 */
GridResult run_grid(const SweepSpec& spec, const GridOptions& options = {});

/// Recomputes cell statistics of `observable` from stored runs under the
/// given burn-in fraction.
PhaseGrid grid_from_runs(const StoredRuns& runs, double burn_in_fraction,
                         Observable observable = Observable::CoherenceGap);

/// Susceptibility peak mu_c(eta) per noise row plus its noise average.
struct CriticalCurve {
    std::vector<double> eta_values;
    std::vector<double> mu_c;
    std::vector<bool> degenerate_rows;  // chi row all equal and zero
    double mean_mu_c = 0.0;
    std::optional<double> std_mu_c;     // sample std; needs >= 2 rows

    bool any_degenerate() const;
    bool operator==(const CriticalCurve&) const = default;
};

/**
 * Per eta row, the mu grid value maximizing chi, ties going to the smallest
 * mu. Needs >= 2 mu values and >= 1 eta row. With one row std_mu_c is empty.
 */
CriticalCurve detect_critical(const PhaseGrid& grid);

/// Mean and sample (N - 1) standard deviation of a list of mu_c values.
std::pair<double, std::optional<double>> noise_average(const std::vector<double>& mu_c);

} // namespace regsim
