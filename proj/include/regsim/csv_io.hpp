#pragma once

#include "regsim/metrics.hpp"
#include "regsim/phase_grid.hpp"
#include "regsim/robustness.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace regsim {

inline constexpr const char* kTimeseriesHeader = "step,t,s_vn,delta_c,mu,delta_mu";
inline constexpr const char* kGridHeader = "eta,mu,mean_delta_c,chi,n_runs";
inline constexpr const char* kCurveHeader = "eta,mu_c";

/// Value formatting used by every CSV: 12 significant digits.
std::string format_csv_number(double value);

/// The double that format_csv_number(value) parses back to. Grid axes are
/// snapped to this so they survive a CSV round trip exactly.
double csv_round_trip(double value);

void write_timeseries_csv(const TimeSeries& series, const std::filesystem::path& path);
void write_grid_csv(const PhaseGrid& grid, const std::filesystem::path& path);
/// Rows `eta,mu_c`, then `# mu_c_mean = ...` and `# mu_c_std = ...` (`nan` when undefined).
void write_curve_csv(const CriticalCurve& curve, const std::filesystem::path& path);

TimeSeries read_timeseries_csv(const std::filesystem::path& path);
/// Rows must form a complete (eta, mu) grid in ascending order.
PhaseGrid read_grid_csv(const std::filesystem::path& path);
CriticalCurve read_curve_csv(const std::filesystem::path& path);

/// `eta,mu_c_mean,mu_c_std`
void write_seed_summary_csv(const SeedRobustness& result, const std::filesystem::path& path);
/// `eta,mu_c_min,mu_c_max,width`
void write_window_envelope_csv(const WindowRobustness& result, const std::filesystem::path& path);
/// `eta,mu_c_delta_c,mu_c_entropy,abs_diff`
void write_crosscheck_csv(const MetricCrosscheck& result, const std::filesystem::path& path);

/// Relative path of the stored series of one run, e.g. series/eta003_mu011_run02.csv.
std::filesystem::path stored_series_name(std::size_t eta_index, std::size_t mu_index, int run);

/// Writes one timeseries CSV per stored run under dir/series/; returns paths relative to dir.
std::vector<std::filesystem::path> write_stored_runs(const StoredRuns& runs, const std::filesystem::path& dir);

/// Reads grid.csv (axes and run counts) and the series/ files of a sweep directory.
StoredRuns load_stored_runs(const std::filesystem::path& dir);

} // namespace regsim
