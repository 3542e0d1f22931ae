#pragma once

#include "regsim/dynamics.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace regsim {

/// Per-step records of one run; record k (0-based) sits at t = (k + 1) * dt.
struct TimeSeries {
    double dt = 0.0;
    std::vector<StepRecord> records;

    double total_time() const { return records.empty() ? 0.0 : records.back().t; }
    double first_time() const { return records.empty() ? 0.0 : records.front().t; }

    bool operator==(const TimeSeries&) const = default;
};

enum class Observable { CoherenceGap, Entropy };

std::vector<double> column(const TimeSeries& series, Observable observable);

/// Closed statistics window [t1, t2].
struct Window {
    double t1 = 0.0;
    double t2 = 0.0;
};

/// Drops the first `burn_in_fraction` of the run: [fraction * T, T].
Window burn_in_window(const TimeSeries& series, double burn_in_fraction);

/// Mean and sum of squared deviations, two-pass with a mean-correction pass
/// so that identical values give that value and exactly zero spread.
struct Moments {
    double mean = 0.0;
    double squares = 0.0;
    std::size_t n = 0;
};

Moments moments(std::span<const double> values);

struct WindowStats {
    double mean = 0.0;
    double variance_population = 0.0;
    std::size_t n = 0;
};

/**
 * Mean and population variance of the samples whose time lies in the window.
 * Sample k is at t_first + k * dt and counts as inside when it is within dt/2
 * of [t1, t2]. Two-pass. Throws EmptyWindowError for fewer than two samples.
 */
WindowStats window_stats(std::span<const double> values, double t_first, double dt, Window window);

/// Population variance of one observable over the window.
double susceptibility(const TimeSeries& series, Window window, Observable observable);

WindowStats observable_stats(const TimeSeries& series, Window window, Observable observable);

struct DeltaMuTail {
    double mean_abs = 0.0;
    double mean = 0.0;
};

/// Mean and mean |delta mu| over the final tail_fraction of the steps (at least one step).
DeltaMuTail delta_mu_convergence(const TimeSeries& series, double tail_fraction);

/// Mean of mu over the same tail.
double tail_mean_mu(const TimeSeries& series, double tail_fraction);

} // namespace regsim
