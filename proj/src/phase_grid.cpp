#include "regsim/phase_grid.hpp"

#include "regsim/errors.hpp"
#include "regsim/worker_pool.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

namespace regsim {

std::string_view to_string(AnalysisMode mode)
{
    return mode == AnalysisMode::Publication ? "publication" : "exploratory";
}

namespace {

void check_ascending(const std::vector<double>& values, const char* name)
{
    if (values.empty())
        throw ValidationError(std::string(name) + " grid is empty");
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k]))
            throw ValidationError(std::string(name) + " grid holds a non-finite value");
        if (k > 0 && !(values[k] > values[k - 1]))
            throw ValidationError(std::string(name) + " grid must be strictly ascending");
    }
}

struct RunSummary {
    double mean = 0.0;
    double variance = 0.0;
};

RunSummary summarize(const TimeSeries& series, double burn_in_fraction, Observable observable)
{
    const WindowStats stats =
        observable_stats(series, burn_in_window(series, burn_in_fraction), observable);
    return {stats.mean, stats.variance_population};
}

PhaseGrid aggregate(const std::vector<double>& mu_values, const std::vector<double>& eta_values,
                    int runs_per_point, const std::vector<RunSummary>& summaries)
{
    const auto n_mu = static_cast<Eigen::Index>(mu_values.size());
    const auto n_eta = static_cast<Eigen::Index>(eta_values.size());
    PhaseGrid grid{mu_values, eta_values, Eigen::MatrixXd::Zero(n_eta, n_mu),
                   Eigen::MatrixXd::Zero(n_eta, n_mu), Eigen::MatrixXi::Constant(n_eta, n_mu, runs_per_point)};
    std::size_t k = 0;
    for (Eigen::Index j = 0; j < n_eta; ++j)
        for (Eigen::Index i = 0; i < n_mu; ++i) {
            double mean_sum = 0.0;
            double var_sum = 0.0;
            for (int r = 0; r < runs_per_point; ++r, ++k) {
                mean_sum += summaries[k].mean;
                var_sum += summaries[k].variance;
            }
            grid.mean_delta_c(j, i) = mean_sum / runs_per_point;
            grid.chi(j, i) = var_sum / runs_per_point;
        }
    return grid;
}

std::string describe_cell(const SweepSpec& spec, std::size_t j, std::size_t i, int r)
{
    std::ostringstream out;
    out << "cell (eta=" << spec.eta_values[j] << ", mu0=" << spec.mu_values[i] << ") run " << r;
    return out.str();
}

} // namespace

void validate(const SweepSpec& spec)
{
    validate(spec.sim);
    check_ascending(spec.mu_values, "mu");
    check_ascending(spec.eta_values, "eta");
    if (spec.mu_values.front() < spec.sim.mu_min || spec.mu_values.back() > spec.sim.mu_max)
        throw ValidationError("mu grid must lie inside [mu_min, mu_max]");
    if (spec.eta_values.front() < 0.0)
        throw ValidationError("eta grid must be non-negative");
    if (spec.runs_per_point < 1)
        throw ValidationError("runs per point must be at least 1");
    if (!(spec.burn_in_fraction >= 0.0 && spec.burn_in_fraction < 0.8))
        throw ValidationError("burn-in fraction must lie in [0, 0.8)");
    if (spec.mode == AnalysisMode::Publication) {
        if (spec.runs_per_point < 2)
            throw ValidationError("publication mode requires at least 2 runs per point");
        if (!(spec.burn_in_fraction > 0.0))
            throw ValidationError("publication mode requires a burn-in window");
    }
}

std::vector<double> linspace(double start, double stop, int n)
{
    if (n < 1)
        throw ValidationError("grid needs at least one point");
    if (n == 1)
        return {start};
    std::vector<double> out(static_cast<std::size_t>(n));
    const double step = (stop - start) / (n - 1);
    for (int k = 0; k < n; ++k)
        out[static_cast<std::size_t>(k)] = start + k * step;
    out.back() = stop;
    return out;
}

std::uint64_t grid_seed(const SweepSpec& spec, std::size_t eta_index, std::size_t mu_index, int run)
{
    const std::uint64_t cell = eta_index * spec.mu_values.size() + mu_index;
    return spec.base_seed + cell * static_cast<std::uint64_t>(spec.runs_per_point) +
           static_cast<std::uint64_t>(run);
}

bool PhaseGrid::operator==(const PhaseGrid& other) const
{
    return mu_values == other.mu_values && eta_values == other.eta_values &&
           mean_delta_c == other.mean_delta_c && chi == other.chi && n_runs == other.n_runs;
}

std::size_t StoredRuns::index(std::size_t eta_index, std::size_t mu_index, int run) const
{
    return (eta_index * mu_values.size() + mu_index) * static_cast<std::size_t>(runs_per_point) +
           static_cast<std::size_t>(run);
}

GridResult run_grid(const SweepSpec& spec, const GridOptions& options)
{
    validate(spec);
    const GeneratorPair gen = build_generator(spec.sim.generator_params());
    const std::size_t n_mu = spec.mu_values.size();
    const std::size_t per_cell = static_cast<std::size_t>(spec.runs_per_point);
    const std::size_t total = spec.eta_values.size() * n_mu * per_cell;

    std::vector<RunSummary> summaries(total);
    std::vector<TimeSeries> kept(options.keep_series ? total : 0);
    std::atomic<std::size_t> done{0};

    parallel_for(total, options.jobs, [&](std::size_t k) {
        const std::size_t cell = k / per_cell;
        const std::size_t j = cell / n_mu;
        const std::size_t i = cell % n_mu;
        const int r = static_cast<int>(k % per_cell);
        try {
            TimeSeries series = simulate_run(spec.sim, gen, spec.mu_values[i], spec.eta_values[j],
                                             grid_seed(spec, j, i, r));
            summaries[k] = summarize(series, spec.burn_in_fraction, Observable::CoherenceGap);
            if (options.keep_series)
                kept[k] = std::move(series);
        } catch (const std::exception& e) {
            throw NumericalError(describe_cell(spec, j, i, r) + ": " + e.what());
        }
        const std::size_t finished = ++done;
        if (options.progress)
            options.progress(finished, total);
    });

    GridResult result{aggregate(spec.mu_values, spec.eta_values, spec.runs_per_point, summaries), {}};
    if (options.keep_series)
        result.runs = StoredRuns{spec.mu_values, spec.eta_values, spec.runs_per_point, std::move(kept)};
    return result;
}

PhaseGrid grid_from_runs(const StoredRuns& runs, double burn_in_fraction, Observable observable)
{
    const std::size_t expected =
        runs.mu_values.size() * runs.eta_values.size() * static_cast<std::size_t>(runs.runs_per_point);
    if (runs.runs_per_point < 1 || runs.series.size() != expected)
        throw ValidationError("stored runs do not cover the grid");
    std::vector<RunSummary> summaries;
    summaries.reserve(expected);
    for (const TimeSeries& series : runs.series)
        summaries.push_back(summarize(series, burn_in_fraction, observable));
    return aggregate(runs.mu_values, runs.eta_values, runs.runs_per_point, summaries);
}

bool CriticalCurve::any_degenerate() const
{
    for (bool flag : degenerate_rows)
        if (flag)
            return true;
    return false;
}

std::pair<double, std::optional<double>> noise_average(const std::vector<double>& mu_c)
{
    if (mu_c.empty())
        throw ValidationError("noise average of an empty curve");
    const Moments m = moments(mu_c);
    if (m.n < 2)
        return {m.mean, std::nullopt};
    return {m.mean, std::sqrt(m.squares / static_cast<double>(m.n - 1))};
}

CriticalCurve detect_critical(const PhaseGrid& grid)
{
    const auto n_mu = static_cast<Eigen::Index>(grid.mu_values.size());
    const auto n_eta = static_cast<Eigen::Index>(grid.eta_values.size());
    if (n_mu < 2)
        throw ValidationError("critical-point detection needs at least 2 mu values");
    if (n_eta < 1)
        throw ValidationError("critical-point detection needs at least 1 eta value");
    if (grid.chi.rows() != n_eta || grid.chi.cols() != n_mu)
        throw ValidationError("chi matrix shape does not match the grid axes");

    CriticalCurve curve;
    curve.eta_values = grid.eta_values;
    for (Eigen::Index j = 0; j < n_eta; ++j) {
        Eigen::Index best = 0;
        bool all_equal = true;
        for (Eigen::Index i = 1; i < n_mu; ++i) {
            if (grid.chi(j, i) > grid.chi(j, best))
                best = i;
            if (grid.chi(j, i) != grid.chi(j, 0))
                all_equal = false;
        }
        curve.mu_c.push_back(grid.mu_values[static_cast<std::size_t>(best)]);
        curve.degenerate_rows.push_back(all_equal && grid.chi(j, 0) == 0.0);
    }
    std::tie(curve.mean_mu_c, curve.std_mu_c) = noise_average(curve.mu_c);
    return curve;
}

} // namespace regsim
