#include "regsim/metrics.hpp"

#include "regsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace regsim {

std::vector<double> column(const TimeSeries& series, Observable observable)
{
    std::vector<double> out;
    out.reserve(series.records.size());
    for (const StepRecord& r : series.records)
        out.push_back(observable == Observable::CoherenceGap ? r.delta_c : r.s_vn);
    return out;
}

Moments moments(std::span<const double> values)
{
    if (values.empty())
        return {};
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values)
        sum += v;
    double mean = sum / n;
    double residual = 0.0;
    for (double v : values)
        residual += v - mean;
    mean += residual / n;
    double squares = 0.0;
    for (double v : values)
        squares += (v - mean) * (v - mean);
    return {mean, squares, values.size()};
}

Window burn_in_window(const TimeSeries& series, double burn_in_fraction)
{
    if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0))
        throw ValidationError("burn-in fraction must lie in [0, 1)");
    const double total = series.total_time();
    return {burn_in_fraction * total, total};
}

WindowStats window_stats(std::span<const double> values, double t_first, double dt, Window window)
{
    if (!(dt > 0.0))
        throw ValidationError("sample spacing must be positive");
    if (!(window.t1 >= 0.0 && window.t1 < window.t2))
        throw ValidationError("window needs 0 <= t1 < t2");

    const double half = 0.5 * dt;
    std::size_t begin = values.size();
    std::size_t end = 0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double t = t_first + static_cast<double>(k) * dt;
        if (t > window.t1 - half && t < window.t2 + half) {
            begin = std::min(begin, k);
            end = k + 1;
        }
    }
    if (begin >= end || end - begin < 2)
        throw EmptyWindowError("window [" + std::to_string(window.t1) + ", " +
                               std::to_string(window.t2) + "] holds fewer than two samples");

    const Moments m = moments(values.subspan(begin, end - begin));
    return {m.mean, m.squares / static_cast<double>(m.n), m.n};
}

WindowStats observable_stats(const TimeSeries& series, Window window, Observable observable)
{
    const std::vector<double> values = column(series, observable);
    return window_stats(values, series.first_time(), series.dt, window);
}

double susceptibility(const TimeSeries& series, Window window, Observable observable)
{
    return observable_stats(series, window, observable).variance_population;
}

namespace {

std::size_t tail_begin(const TimeSeries& series, double tail_fraction)
{
    if (!(tail_fraction > 0.0 && tail_fraction <= 0.5))
        throw ValidationError("tail fraction must lie in (0, 0.5]");
    if (series.records.empty())
        throw ValidationError("empty time series");
    const std::size_t n = series.records.size();
    const auto tail = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(tail_fraction * n)));
    return n - std::min(tail, n);
}

} // namespace

DeltaMuTail delta_mu_convergence(const TimeSeries& series, double tail_fraction)
{
    const std::size_t begin = tail_begin(series, tail_fraction);
    double sum = 0.0;
    double sum_abs = 0.0;
    for (std::size_t k = begin; k < series.records.size(); ++k) {
        sum += series.records[k].delta_mu;
        sum_abs += std::abs(series.records[k].delta_mu);
    }
    const double n = static_cast<double>(series.records.size() - begin);
    return {sum_abs / n, sum / n};
}

double tail_mean_mu(const TimeSeries& series, double tail_fraction)
{
    const std::size_t begin = tail_begin(series, tail_fraction);
    double sum = 0.0;
    for (std::size_t k = begin; k < series.records.size(); ++k)
        sum += series.records[k].mu;
    return sum / static_cast<double>(series.records.size() - begin);
}

} // namespace regsim
