#include "regsim/csv_io.hpp"
#include "regsim/errors.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>

using namespace regsim;

namespace {

int count_lines(const std::string& text)
{
    return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

SweepSpec small_spec()
{
    SweepSpec spec;
    spec.sim.dim = 4;
    spec.sim.steps = 150;
    spec.sim.salience_center = 1.5;
    spec.sim.salience_width = 1.0;
    spec.mu_values = linspace(0.05, 1.0, 3);
    spec.eta_values = linspace(1e-4, 0.3, 3);
    for (double& v : spec.eta_values)
        v = csv_round_trip(v);
    spec.runs_per_point = 2;
    spec.mode = AnalysisMode::Exploratory;
    spec.base_seed = 11;
    return spec;
}

} // namespace

TEST_CASE("number formatting")
{
    CHECK(format_csv_number(0.1) == "0.1");
    CHECK(format_csv_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_csv_number(2e-4) == "0.0002");
    CHECK(csv_round_trip(1.0 / 3.0) == 0.333333333333);
}

TEST_CASE("empty grid writes only the header")
{
    const auto dir = test::scratch_dir("csv_empty");
    PhaseGrid empty;
    write_grid_csv(empty, dir / "grid.csv");
    CHECK(test::read_file(dir / "grid.csv") == "eta,mu,mean_delta_c,chi,n_runs\n");
}

TEST_CASE("1-cell grid has exactly two lines")
{
    const auto dir = test::scratch_dir("csv_one");
    PhaseGrid g;
    g.mu_values = {0.5};
    g.eta_values = {0.1};
    g.mean_delta_c = Eigen::MatrixXd::Constant(1, 1, 0.25);
    g.chi = Eigen::MatrixXd::Constant(1, 1, 1e-5);
    g.n_runs = Eigen::MatrixXi::Constant(1, 1, 3);
    write_grid_csv(g, dir / "grid.csv");
    const std::string text = test::read_file(dir / "grid.csv");
    CHECK(count_lines(text) == 2);
    CHECK(text == "eta,mu,mean_delta_c,chi,n_runs\n0.1,0.5,0.25,1e-05,3\n");
    CHECK(read_grid_csv(dir / "grid.csv") == g);
}

TEST_CASE("grid and curve survive a CSV round trip")
{
    const auto dir = test::scratch_dir("csv_roundtrip");
    const GridResult result = run_grid(small_spec(), {1, true, {}});
    const CriticalCurve curve = detect_critical(result.grid);
    write_grid_csv(result.grid, dir / "grid.csv");
    write_curve_csv(curve, dir / "curve.csv");

    const PhaseGrid reread = read_grid_csv(dir / "grid.csv");
    CHECK(reread.mu_values == result.grid.mu_values);
    CHECK(reread.eta_values == result.grid.eta_values);
    CHECK(detect_critical(reread) == curve);
    const CriticalCurve back = read_curve_csv(dir / "curve.csv");
    CHECK(back.eta_values == curve.eta_values);
    CHECK(back.mu_c == curve.mu_c);
    CHECK(back.mean_mu_c == csv_round_trip(curve.mean_mu_c));
    CHECK(*back.std_mu_c == csv_round_trip(*curve.std_mu_c));

    const std::string text = test::read_file(dir / "curve.csv");
    CHECK(text.rfind("eta,mu_c\n", 0) == 0);
    CHECK(text.find("# mu_c_mean = ") != std::string::npos);
    CHECK(text.find("# mu_c_std = ") != std::string::npos);

    // the grid reader is ascending (eta, mu)
    const std::string grid_text = test::read_file(dir / "grid.csv");
    const auto second = grid_text.find('\n') + 1;
    CHECK(grid_text.substr(second, grid_text.find(',', second) - second) == format_csv_number(0.0001));
    write_grid_csv(result.grid, dir / "grid2.csv");
    CHECK(test::read_file(dir / "grid2.csv") == grid_text);
}

TEST_CASE("one-row curve writes nan for the undefined std")
{
    const auto dir = test::scratch_dir("csv_curve1");
    CriticalCurve c;
    c.eta_values = {0.1};
    c.mu_c = {0.4};
    c.degenerate_rows = {false};
    c.mean_mu_c = 0.4;
    write_curve_csv(c, dir / "curve.csv");
    CHECK(test::read_file(dir / "curve.csv") == "eta,mu_c\n0.1,0.4\n# mu_c_mean = 0.4\n# mu_c_std = nan\n");
    const CriticalCurve back = read_curve_csv(dir / "curve.csv");
    CHECK_FALSE(back.std_mu_c.has_value());
    CHECK(back.mu_c == c.mu_c);
}

TEST_CASE("timeseries CSV round trip")
{
    const auto dir = test::scratch_dir("csv_series");
    SimulationParams p;
    p.dim = 4;
    p.steps = 50;
    p.salience_center = 1.0;
    const TimeSeries s = simulate_run(p, 0.3, 0.2, 1);
    write_timeseries_csv(s, dir / "ts.csv");
    const std::string text = test::read_file(dir / "ts.csv");
    CHECK(text.rfind("step,t,s_vn,delta_c,mu,delta_mu\n", 0) == 0);
    CHECK(count_lines(text) == 51);
    const TimeSeries back = read_timeseries_csv(dir / "ts.csv");
    REQUIRE(back.records.size() == 50);
    CHECK(back.dt == doctest::Approx(0.01));
    for (std::size_t k = 0; k < 50; ++k) {
        CHECK(back.records[k].step == s.records[k].step);
        CHECK(std::abs(back.records[k].s_vn - s.records[k].s_vn) <= 1e-12);
        CHECK(back.records[k].mu == csv_round_trip(s.records[k].mu));
    }
}

TEST_CASE("malformed CSVs are rejected")
{
    const auto dir = test::scratch_dir("csv_bad");
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream(dir / name) << text;
        return dir / name;
    };
    CHECK_THROWS_AS(read_grid_csv(write("a.csv", "wrong,header\n")), ValidationError);
    CHECK_THROWS_AS(read_grid_csv(write("b.csv", "eta,mu,mean_delta_c,chi,n_runs\n0.1,0.5,x,1,1\n")), ValidationError);
    CHECK_THROWS_AS(read_grid_csv(write("c.csv", "eta,mu,mean_delta_c,chi,n_runs\n0.1,0.5,0.1,0.1,1\n"
                                                 "0.1,0.4,0.1,0.1,1\n")),
                    ValidationError);
    CHECK_THROWS_AS(read_grid_csv(write("d.csv", "eta,mu,mean_delta_c,chi,n_runs\n0.1,0.4,0.1,0.1,1\n"
                                                 "0.1,0.5,0.1,0.1,1\n0.2,0.4,0.1,0.1,1\n")),
                    ValidationError);
    CHECK_THROWS(read_grid_csv(dir / "missing.csv"));
}

TEST_CASE("stored runs reload from CSVs alone")
{
    const auto dir = test::scratch_dir("csv_stored");
    const GridResult result = run_grid(small_spec(), {1, true, {}});
    write_grid_csv(result.grid, dir / "grid.csv");
    const auto files = write_stored_runs(*result.runs, dir);
    CHECK(files.size() == 18);
    CHECK(files.front() == std::filesystem::path("series/eta000_mu000_run00.csv"));

    const StoredRuns back = load_stored_runs(dir);
    CHECK(back.mu_values == result.runs->mu_values);
    CHECK(back.eta_values == result.runs->eta_values);
    CHECK(back.runs_per_point == 2);
    REQUIRE(back.series.size() == 18);
    const PhaseGrid regrid = grid_from_runs(back, 0.2);
    CHECK(detect_critical(regrid) == detect_critical(result.grid));
    for (Eigen::Index j = 0; j < 3; ++j)
        for (Eigen::Index i = 0; i < 3; ++i)
            CHECK(std::abs(regrid.chi(j, i) - result.grid.chi(j, i)) <= 1e-9 * (1 + result.grid.chi(j, i)));
}

TEST_CASE("robustness summaries have the documented headers")
{
    const auto dir = test::scratch_dir("csv_robust");
    MetricCrosscheck x;
    x.from_coherence_gap.eta_values = x.from_entropy.eta_values = {0.1};
    x.from_coherence_gap.mu_c = {0.2};
    x.from_entropy.mu_c = {0.3};
    x.abs_difference = {0.1};
    write_crosscheck_csv(x, dir / "x.csv");
    CHECK(test::read_file(dir / "x.csv") == "eta,mu_c_delta_c,mu_c_entropy,abs_diff\n0.1,0.2,0.3,0.1\n");

    WindowRobustness w;
    w.eta_values = {0.1};
    w.envelope_min = {0.2};
    w.envelope_max = {0.5};
    write_window_envelope_csv(w, dir / "w.csv");
    CHECK(test::read_file(dir / "w.csv") == "eta,mu_c_min,mu_c_max,width\n0.1,0.2,0.5,0.3\n");

    SeedRobustness s;
    s.eta_values = {0.1};
    s.mean_curve = {0.3};
    s.std_curve = {0.0};
    write_seed_summary_csv(s, dir / "s.csv");
    CHECK(test::read_file(dir / "s.csv") == "eta,mu_c_mean,mu_c_std\n0.1,0.3,0\n");
}
