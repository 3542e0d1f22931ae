#include "regsim/config.hpp"
#include "regsim/random.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

using namespace regsim;

TEST_CASE("empty config gives the global defaults")
{
    const RunConfig c = parse_config("");
    CHECK(c.steps == 10000);
    CHECK(c.dt == 0.01);
    CHECK(c.dim == 16);
    CHECK(c.target_entropy == 0.30);
    CHECK(c.alpha == 2e-4);
    CHECK(c.mu_min == 1e-3);
    CHECK(c.mu_max == 1.0);
    CHECK(c.base_seed == 123456789u);
    CHECK(c.salience_center == 6.0);
    CHECK(c.salience_width == 2.0);
    CHECK(c.phase_noise == 0.2);
    CHECK(c.energy_scale == 0.15);
    CHECK(c.coupling == 0.08);
    CHECK(c.locality == 2.0);
    CHECK(c.mode == AnalysisMode::Publication);
    CHECK(c.runs == 15);
    CHECK(c.sweep_mu_points == 40);
    CHECK(c.sweep_mu_start == 0.05);
    CHECK(c.sweep_mu_stop == 1.0);
    CHECK(c.sweep_eta_start == 1e-4);
    CHECK(c.sweep_eta_stop == 0.30);
    CHECK(c == default_config());
}

TEST_CASE("exploratory mode switches the paired defaults")
{
    const RunConfig c = parse_config("mode = exploratory\n");
    CHECK(c.steps == 4000);
    CHECK(c.runs == 5);
    CHECK(c.sweep_mu_points == 20);
    CHECK(c.sweep_eta_points == 20);
    const RunConfig explicit_steps = parse_config("steps = 123\nmode = exploratory\n");
    CHECK(explicit_steps.steps == 123);
}

TEST_CASE("validation errors name the line")
{
    auto message = [](std::string_view text) {
        try {
            parse_config(text, {}, "fig.properties");
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("mode = publication\nruns = 1\n").find("fig.properties:2") != std::string::npos);
    CHECK(message("# c\nbogus = 3\n").find("fig.properties:2: unknown key 'bogus'") != std::string::npos);
    CHECK(message("dt = abc\n").find("fig.properties:1") != std::string::npos);
    CHECK(message("dt = -0.1\n").find("fig.properties:1") != std::string::npos);
    CHECK(message("dt = 0.1\ndt = 0.2\n").find("duplicate") != std::string::npos);
    CHECK(message("steps = 1.5\n").find("steps") != std::string::npos);
    CHECK(message("control.mu_min = 0.5\ncontrol.mu_max = 0.4\n").find("mu_max") != std::string::npos);
    CHECK(message("control.target_entropy = 1.5\n").find("target entropy") != std::string::npos);
    CHECK(message("no equals sign\n").find("fig.properties:1") != std::string::npos);
    CHECK(message("eta =\n").find("missing value") != std::string::npos);
    CHECK(message("ordering = sideways\n").find("pf or af") != std::string::npos);
    CHECK(message("entropy.normalized = maybe\n").find("true or false") != std::string::npos);
    CHECK(message("eta = nan\n") != "");
    CHECK(message("eta = inf\n") != "");
}

TEST_CASE("numbers accept decimal and scientific notation")
{
    const RunConfig c = parse_config("control.alpha = 2e-4\neta = 1.3E-1\nmu0 = .08\n");
    CHECK(c.alpha == 2e-4);
    CHECK(c.eta == 0.13);
    CHECK(c.mu0 == 0.08);
}

TEST_CASE("time-course configuration round-trips through save and load")
{
    const RunConfig c = parse_config("eta = 0.13\nmu0 = 0.08\nordering = pf\n");
    const auto dir = test::scratch_dir("config_fig1");
    const auto path = write_run_properties(c, dir);
    CHECK(load_config(path) == c);
    const std::string first = test::read_file(path);
    write_run_properties(c, dir);
    CHECK(test::read_file(path) == first);
    CHECK(first.find("control.alpha = 0.0002\n") != std::string::npos);
    CHECK(first.find("eta = 0.13\n") != std::string::npos);
    CHECK(first.find("ordering = pf\n") != std::string::npos);
}

TEST_CASE("canonical listing has every key once, sorted")
{
    const std::string text = to_properties(default_config());
    std::vector<std::string> keys;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string line = text.substr(pos, nl - pos);
        keys.push_back(line.substr(0, line.find(" = ")));
        pos = nl + 1;
    }
    const std::vector<std::string_view> expected = config_keys();
    REQUIRE(keys.size() == expected.size());
    for (std::size_t k = 0; k < keys.size(); ++k)
        CHECK(keys[k] == expected[k]);
    CHECK(std::is_sorted(keys.begin(), keys.end()));
}

TEST_CASE("format_decimal is shortest and exact")
{
    CHECK(format_decimal(2e-4) == "0.0002");
    CHECK(format_decimal(0.1) == "0.1");
    CHECK(format_decimal(10000.0) == "10000");
    CHECK(format_decimal(1e-4) == "0.0001");
    RandomStream rng(8);
    for (int k = 0; k < 2000; ++k) {
        const double v = std::ldexp(rng.uniform(), static_cast<int>(rng.uniform() * 40) - 30);
        CHECK(std::stod(format_decimal(v)) == v);
    }
}

TEST_CASE("an override is equivalent to editing the file")
{
    const std::string base = "mode = exploratory\neta = 0.2\n";
    const std::vector<std::string> overrides{"eta=0.05", "ordering = af", "steps=77"};
    const RunConfig overridden = parse_config(base, overrides);
    const RunConfig edited = parse_config("mode = exploratory\neta = 0.05\nordering = af\nsteps = 77\n");
    CHECK(overridden == edited);
    CHECK(to_properties(overridden) == to_properties(edited));

    const std::vector<std::string> mode_override{"mode=exploratory"};
    const RunConfig fast = parse_config("", mode_override);
    CHECK(fast.sweep_mu_points == 20);
    CHECK(fast.runs == 5);

    const std::vector<std::string> bad{"nonsense=1"};
    CHECK_THROWS_AS(parse_config("", bad), ConfigError);
}

TEST_CASE("property: random valid configs round-trip exactly")
{
    RandomStream rng(4242);
    const auto dir = test::scratch_dir("config_roundtrip");
    for (int trial = 0; trial < 300; ++trial) {
        RunConfig c = default_config(trial % 2 ? AnalysisMode::Exploratory : AnalysisMode::Publication);
        c.steps = 1 + static_cast<int>(rng.uniform() * 50000);
        c.dt = 1e-4 + 0.1 * rng.uniform();
        c.dim = 2 + static_cast<int>(rng.uniform() * 30);
        c.eta = rng.uniform();
        c.mu_min = 1e-4 + 0.01 * rng.uniform();
        c.mu_max = 0.5 + rng.uniform();
        c.mu0 = c.mu_min + (c.mu_max - c.mu_min) * rng.uniform();
        c.alpha = 1e-5 * (1 + 100 * rng.uniform());
        c.target_entropy = rng.uniform();
        c.w_coherence = rng.uniform();
        c.runs = 2 + static_cast<int>(rng.uniform() * 20);
        c.burn_in_fraction = 0.01 + 0.7 * rng.uniform();
        c.base_seed = static_cast<std::uint64_t>(rng.uniform() * 1e18);
        c.ordering = rng.uniform() < 0.5 ? StepOrdering::PerceptionFirst : StepOrdering::ActionFirst;
        c.salience_center = 10 * rng.uniform() - 2;
        c.salience_width = 0.1 + 5 * rng.uniform();
        c.phase_noise = rng.uniform();
        c.coupling = rng.uniform() - 0.5;
        c.energy_scale = rng.uniform();
        c.locality = 0.1 + 4 * rng.uniform();
        c.dephase_scale = 0.1 + 3 * rng.uniform();
        c.sweep_mu_start = c.mu_min;
        c.sweep_mu_stop = c.mu_max;
        c.sweep_eta_start = 1e-5 * rng.uniform();
        c.sweep_eta_stop = 0.1 + rng.uniform();
        c.robustness_burn_in_fractions = {0.05 + 0.3 * rng.uniform(), 0.4 + 0.3 * rng.uniform()};
        c.output_series = rng.uniform() < 0.5;
        c.output_dir = "runs/trial" + std::to_string(trial);
        const RunConfig back = parse_config(to_properties(c));
        CHECK(back == c);
        if (trial < 10)
            CHECK(load_config(write_run_properties(c, dir)) == c);
    }
}

TEST_CASE("property: fuzzed lines fail cleanly")
{
    RandomStream rng(13);
    const std::vector<std::string_view> keys = config_keys();
    const std::string alphabet = "=# .,-+eE0123456789abcxyz_\t\r\x01\xff";
    int accepted = 0;
    for (int trial = 0; trial < 5000; ++trial) {
        std::string line;
        if (rng.uniform() < 0.7)
            line = std::string(keys[static_cast<std::size_t>(rng.uniform() * keys.size())]) + " = ";
        const int len = static_cast<int>(rng.uniform() * 12);
        for (int k = 0; k < len; ++k)
            line += alphabet[static_cast<std::size_t>(rng.uniform() * alphabet.size())];
        try {
            parse_config(line + "\n" + line);
            ++accepted;
        } catch (const ConfigError&) {
        }
        try {
            parse_config(line);
            ++accepted;
        } catch (const ConfigError&) {
        }
    }
    CHECK(accepted > 0);
}

TEST_CASE("derived simulation and sweep settings")
{
    RunConfig c = parse_config("mode = exploratory\nsweep.mu_points = 3\nsweep.eta_points = 2\n");
    const SweepSpec spec = sweep_spec(c);
    CHECK(spec.mu_values == std::vector<double>{0.05, 0.525, 1.0});
    CHECK(spec.eta_values.size() == 2);
    CHECK(spec.runs_per_point == 5);
    CHECK(spec.sim.steps == 4000);
    const SimulationParams p = simulation_params(c);
    CHECK(p.alpha == c.alpha);
    CHECK(p.dim == c.dim);
}
