#include "regsim/errors.hpp"
#include "regsim/robustness.hpp"

#include <doctest.h>

#include <cmath>

using namespace regsim;

namespace {

SweepSpec small_spec()
{
    SweepSpec spec;
    spec.sim.dim = 4;
    spec.sim.steps = 200;
    spec.sim.salience_center = 1.5;
    spec.sim.salience_width = 1.0;
    spec.mu_values = {0.1, 0.4, 0.8};
    spec.eta_values = {0.0, 0.2};
    spec.runs_per_point = 2;
    spec.mode = AnalysisMode::Exploratory;
    spec.base_seed = 3;
    return spec;
}

// Stored runs whose series are built from a per-run function f(cell, k).
template <typename F>
StoredRuns synthetic_runs(F value)
{
    StoredRuns runs;
    runs.mu_values = {0.1, 0.2, 0.3};
    runs.eta_values = {0.01, 0.02};
    runs.runs_per_point = 2;
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < 3; ++i)
            for (int r = 0; r < 2; ++r) {
                TimeSeries s;
                s.dt = 0.01;
                for (int k = 0; k < 100; ++k) {
                    StepRecord rec;
                    rec.step = k + 1;
                    rec.t = (k + 1) * 0.01;
                    rec.mu = 0.2;
                    const auto [dc, sv] = value(j, i, r, k);
                    rec.delta_c = dc;
                    rec.s_vn = sv;
                    s.records.push_back(rec);
                }
                runs.series.push_back(std::move(s));
            }
    return runs;
}

} // namespace

TEST_CASE("seed robustness: forced identical seeds give zero spread")
{
    const SeedRobustness r = robustness_seeds(small_spec(), 2, {1, false, {}}, 0);
    CHECK(r.curves[0] == r.curves[1]);
    for (double s : r.std_curve)
        CHECK(s == 0.0);
    CHECK(r.base_seeds == std::vector<std::uint64_t>{3, 3});
}

TEST_CASE("seed robustness: default stride and noise-free rows")
{
    SweepSpec spec = small_spec();
    spec.sim.phase_noise = 0.0;
    const SeedRobustness r = robustness_seeds(spec, 3, {2, false, {}});
    CHECK(r.base_seeds == std::vector<std::uint64_t>{3, 1'000'003, 2'000'003});
    // eta = 0 and no phase noise: nothing stochastic, so the row agrees across seeds
    CHECK(r.curves[0].mu_c[0] == r.curves[1].mu_c[0]);
    CHECK(r.curves[1].mu_c[0] == r.curves[2].mu_c[0]);
    CHECK(r.std_curve[0] == 0.0);
    CHECK(r.grids[0].chi.row(0) == r.grids[2].chi.row(0));
    CHECK_THROWS_AS(robustness_seeds(spec, 1), ValidationError);
}

TEST_CASE("curve band")
{
    CriticalCurve a, b;
    a.eta_values = b.eta_values = {0.1};
    a.mu_c = {0.2};
    b.mu_c = {0.4};
    const auto [mean, sd] = curve_band({a, b});
    CHECK(mean[0] == doctest::Approx(0.3));
    CHECK(std::abs(sd[0] - std::sqrt(0.02)) < 1e-15);
}

TEST_CASE("window robustness")
{
    SUBCASE("identical fractions give identical curves")
    {
        const GridResult g = run_grid(small_spec(), {1, true, {}});
        const std::vector<double> fractions{0.3, 0.3};
        const WindowRobustness w = robustness_windows(*g.runs, fractions);
        CHECK(w.curves[0] == w.curves[1]);
        for (double width : w.envelope_width())
            CHECK(width == 0.0);
        CHECK(detect_critical(grid_from_runs(*g.runs, 0.3)) == w.curves[0]);
    }
    SUBCASE("constant coherence gap ties to the smallest mu")
    {
        const StoredRuns runs = synthetic_runs([](auto, auto, auto, int) { return std::pair{0.25, 0.5}; });
        const std::vector<double> fractions{0.1, 0.2, 0.3};
        const WindowRobustness w = robustness_windows(runs, fractions);
        for (const CriticalCurve& c : w.curves) {
            CHECK(c.mu_c == std::vector<double>{0.1, 0.1});
            CHECK(c.any_degenerate());
        }
    }
    SUBCASE("envelope spans the per-window estimates")
    {
        // the peak cell moves once the window excludes an early burst
        const StoredRuns runs = synthetic_runs([](std::size_t, std::size_t i, int, int k) {
            double v = 0.1 + (k % 2) * 0.01 * (i == 1 ? 1.0 : 0.5);
            if (i == 2 && k < 25)
                v += (k % 2) * 0.5;
            return std::pair{v, 0.5};
        });
        const std::vector<double> fractions{0.1, 0.3};
        const WindowRobustness w = robustness_windows(runs, fractions);
        CHECK(w.curves[0].mu_c == std::vector<double>{0.3, 0.3});
        CHECK(w.curves[1].mu_c == std::vector<double>{0.2, 0.2});
        CHECK(w.envelope_min == std::vector<double>{0.2, 0.2});
        CHECK(w.envelope_max == std::vector<double>{0.3, 0.3});
        CHECK(w.envelope_width()[0] == doctest::Approx(0.1));
    }
    SUBCASE("fractions outside (0, 0.8) are rejected")
    {
        const StoredRuns runs = synthetic_runs([](auto, auto, auto, int) { return std::pair{0.25, 0.5}; });
        CHECK_THROWS_AS(robustness_windows(runs, std::vector<double>{0.0}), ValidationError);
        CHECK_THROWS_AS(robustness_windows(runs, std::vector<double>{0.8}), ValidationError);
    }
}

TEST_CASE("metric crosscheck on an affine entropy gives identical curves")
{
    const StoredRuns runs = synthetic_runs([](std::size_t j, std::size_t i, int r, int k) {
        const double dc = 0.1 + 0.05 * std::sin(0.3 * k * (1 + i + j) + r) * (i + 1) / 3.0;
        return std::pair{dc, 0.7 * dc + 0.2};
    });
    const MetricCrosscheck x = metric_crosscheck(runs, 0.2);
    CHECK(x.from_coherence_gap.mu_c == x.from_entropy.mu_c);
    for (double d : x.abs_difference)
        CHECK(d == 0.0);
}

TEST_CASE("metric crosscheck on a simulated grid reports per-row differences")
{
    const GridResult g = run_grid(small_spec(), {1, true, {}});
    const MetricCrosscheck x = metric_crosscheck(*g.runs, 0.2);
    REQUIRE(x.abs_difference.size() == 2);
    for (std::size_t j = 0; j < 2; ++j)
        CHECK(x.abs_difference[j] == std::abs(x.from_coherence_gap.mu_c[j] - x.from_entropy.mu_c[j]));
}
