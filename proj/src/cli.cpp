#include "regsim/cli.hpp"

#include "regsim/config.hpp"
#include "regsim/csv_io.hpp"
#include "regsim/errors.hpp"
#include "regsim/manifest.hpp"
#include "regsim/phase_grid.hpp"
#include "regsim/robustness.hpp"
#include "regsim/simulation.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace regsim {

namespace fs = std::filesystem;

namespace {

constexpr double kSummaryTail = 0.1;

struct Options {
    std::string verb;
    std::string config_path;
    std::string out_dir;
    std::string input;
    std::vector<std::string> overrides;
    std::string mode;
    std::string ordering;
    int jobs = 0;
};

// Files written by one command, relative to its output directory.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    const fs::path& dir() const { return dir_; }
    fs::path path(const fs::path& name)
    {
        files_.push_back(name);
        return dir_ / name;
    }
    void add(const std::vector<fs::path>& names) { files_.insert(files_.end(), names.begin(), names.end()); }
    const std::vector<fs::path>& files() const { return files_; }

private:
    fs::path dir_;
    std::vector<fs::path> files_;
};

std::string fraction_label(double f)
{
    return format_decimal(f);
}

void print(std::ostream& out, const std::string& key, const std::string& value)
{
    out << key << " = " << value << '\n';
}

void print(std::ostream& out, const std::string& key, double value)
{
    print(out, key, format_csv_number(value));
}

GridOptions grid_options(const Options& opt, std::ostream& err, bool keep_series)
{
    GridOptions g;
    g.jobs = opt.jobs;
    g.keep_series = keep_series;
    g.progress = [&err](std::size_t done, std::size_t total) {
        const std::size_t step = std::max<std::size_t>(1, total / 20);
        if (done % step == 0 || done == total)
            err << "progress: " << done << "/" << total << " runs\n";
    };
    return g;
}

void print_curve(std::ostream& out, const std::string& prefix, const CriticalCurve& curve)
{
    print(out, prefix + "mu_c_mean", curve.mean_mu_c);
    print(out, prefix + "mu_c_std", curve.std_mu_c ? format_csv_number(*curve.std_mu_c) : std::string("nan"));
    std::size_t degenerate = 0;
    for (bool flag : curve.degenerate_rows)
        degenerate += flag ? 1 : 0;
    print(out, prefix + "degenerate_rows", std::to_string(degenerate));
}

void warn_curve(std::ostream& err, const CriticalCurve& curve)
{
    for (std::size_t j = 0; j < curve.degenerate_rows.size(); ++j)
        if (curve.degenerate_rows[j])
            err << "warning: chi row eta=" << format_csv_number(curve.eta_values[j])
                << " is identically zero; mu_c falls back to the smallest mu\n";
    if (!curve.std_mu_c)
        err << "warning: mu_c_std undefined with fewer than two eta rows\n";
}

long timecourse(const Options& opt, const RunConfig& cfg, OutputSet& files, std::ostream& out, std::ostream& err)
{
    err << "timecourse: " << cfg.runs << " runs x " << cfg.steps << " steps, eta=" << cfg.eta
        << ", mu0=" << cfg.mu0 << ", ordering=" << to_string(cfg.ordering) << '\n';
    const TimecourseResult result =
        run_timecourse(simulation_params(cfg), cfg.mu0, cfg.eta, cfg.runs, cfg.base_seed, opt.jobs);

    for (std::size_t r = 0; r < result.runs.size(); ++r) {
        char name[64];
        std::snprintf(name, sizeof(name), "timeseries_run%03zu.csv", r);
        write_timeseries_csv(result.runs[r], files.path(name));
    }
    write_timeseries_csv(result.mean, files.path("ensemble_mean.csv"));
    write_timeseries_csv(result.stddev, files.path("ensemble_std.csv"));

    print(out, "runs", std::to_string(result.runs.size()));
    const DeltaMuTail tail = delta_mu_convergence(result.mean, kSummaryTail);
    print(out, "tail_mean_delta_mu", tail.mean);
    print(out, "tail_mean_abs_delta_mu", tail.mean_abs);
    print(out, "tail_mean_mu", tail_mean_mu(result.mean, kSummaryTail));
    print(out, "final_s_vn", result.mean.records.back().s_vn);
    print(out, "final_delta_c", result.mean.records.back().delta_c);
    return static_cast<long>(result.runs.size());
}

long sweep(const Options& opt, const RunConfig& cfg, OutputSet& files, std::ostream& out, std::ostream& err)
{
    const SweepSpec spec = sweep_spec(cfg);
    err << "sweep: " << spec.eta_values.size() << "x" << spec.mu_values.size() << " grid, "
        << spec.runs_per_point << " runs/point, " << spec.sim.steps << " steps, mode=" << to_string(spec.mode)
        << ", ordering=" << to_string(spec.sim.ordering) << '\n';
    GridResult result = run_grid(spec, grid_options(opt, err, cfg.output_series));
    write_grid_csv(result.grid, files.path("grid.csv"));
    if (result.runs)
        files.add(write_stored_runs(*result.runs, files.dir()));
    if (spec.mu_values.size() >= 2) {
        const CriticalCurve curve = detect_critical(result.grid);
        write_curve_csv(curve, files.path("curve.csv"));
        warn_curve(err, curve);
        print_curve(out, "", curve);
    }
    return static_cast<long>(spec.eta_values.size() * spec.mu_values.size()) * spec.runs_per_point;
}

long critical(const Options& opt, OutputSet& files, std::ostream& out, std::ostream& err)
{
    if (opt.input.empty())
        throw ValidationError("critical needs --input GRID_CSV");
    const PhaseGrid grid = read_grid_csv(opt.input);
    const CriticalCurve curve = detect_critical(grid);
    write_curve_csv(curve, files.path("curve.csv"));
    warn_curve(err, curve);
    print_curve(out, "", curve);
    return 0;
}

long robustness_seeds_verb(const Options& opt, const RunConfig& cfg, OutputSet& files, std::ostream& out,
                           std::ostream& err)
{
    const SweepSpec spec = sweep_spec(cfg);
    err << "robustness-seeds: " << cfg.robustness_seeds << " seeds\n";
    const SeedRobustness result = robustness_seeds(spec, cfg.robustness_seeds, grid_options(opt, err, false));
    for (std::size_t s = 0; s < result.curves.size(); ++s) {
        write_grid_csv(result.grids[s], files.path("grid_seed" + std::to_string(s) + ".csv"));
        write_curve_csv(result.curves[s], files.path("curve_seed" + std::to_string(s) + ".csv"));
        print(out, "seed" + std::to_string(s) + ".mu_c_mean", result.curves[s].mean_mu_c);
    }
    write_seed_summary_csv(result, files.path("seed_summary.csv"));
    double widest = 0.0;
    for (double s : result.std_curve)
        widest = std::max(widest, s);
    print(out, "max_across_seed_std", widest);
    return static_cast<long>(result.curves.size() * spec.eta_values.size() * spec.mu_values.size()) *
           spec.runs_per_point;
}

// Stored runs for the re-analysis verbs: from --input, or from a fresh sweep
// that is written to disk first and then read back.
std::pair<StoredRuns, long> stored_runs_for(const Options& opt, const RunConfig& cfg, OutputSet& files,
                                            std::ostream& err)
{
    if (!opt.input.empty()) {
        err << "loading stored runs from " << opt.input << '\n';
        return {load_stored_runs(opt.input), 0};
    }
    const SweepSpec spec = sweep_spec(cfg);
    err << "simulating " << spec.eta_values.size() << "x" << spec.mu_values.size() << " grid with stored series\n";
    GridResult result = run_grid(spec, grid_options(opt, err, true));
    write_grid_csv(result.grid, files.path("grid.csv"));
    files.add(write_stored_runs(*result.runs, files.dir()));
    const long total = static_cast<long>(result.runs->series.size());
    return {load_stored_runs(files.dir()), total};
}

long robustness_windows_verb(const Options& opt, const RunConfig& cfg, OutputSet& files, std::ostream& out,
                             std::ostream& err)
{
    auto [runs, total] = stored_runs_for(opt, cfg, files, err);
    const WindowRobustness result = robustness_windows(runs, cfg.robustness_burn_in_fractions);
    for (std::size_t k = 0; k < result.curves.size(); ++k) {
        const std::string label = fraction_label(result.burn_in_fractions[k]);
        write_curve_csv(result.curves[k], files.path("curve_window_" + label + ".csv"));
        print(out, "window_" + label + ".mu_c_mean", result.curves[k].mean_mu_c);
    }
    write_window_envelope_csv(result, files.path("window_envelope.csv"));
    double widest = 0.0;
    for (double w : result.envelope_width())
        widest = std::max(widest, w);
    print(out, "max_envelope_width", widest);
    return total;
}

long metric_crosscheck_verb(const Options& opt, const RunConfig& cfg, OutputSet& files, std::ostream& out,
                            std::ostream& err)
{
    auto [runs, total] = stored_runs_for(opt, cfg, files, err);
    const MetricCrosscheck result = metric_crosscheck(runs, cfg.burn_in_fraction);
    write_curve_csv(result.from_coherence_gap, files.path("curve_delta_c.csv"));
    write_curve_csv(result.from_entropy, files.path("curve_entropy.csv"));
    write_crosscheck_csv(result, files.path("crosscheck.csv"));
    warn_curve(err, result.from_coherence_gap);
    print_curve(out, "delta_c.", result.from_coherence_gap);
    print_curve(out, "entropy.", result.from_entropy);
    double largest = 0.0;
    for (double d : result.abs_difference)
        largest = std::max(largest, d);
    print(out, "max_abs_difference", largest);
    return total;
}

int verify(const Options& opt, std::ostream& out, std::ostream& err)
{
    const std::string dir = !opt.input.empty() ? opt.input : opt.out_dir;
    if (dir.empty())
        throw ValidationError("verify-manifest needs --input DIR or --out DIR");
    const VerifyReport report = verify_manifest(dir);
    for (const std::string& problem : report.problems)
        err << "mismatch: " << problem << '\n';
    print(out, "checked", std::to_string(report.checked));
    print(out, "status", report.ok() ? "ok" : "failed");
    return report.ok() ? kExitOk : kExitRuntime;
}

int execute(const Options& opt, std::ostream& out, std::ostream& err)
{
    if (opt.verb == "verify-manifest")
        return verify(opt, out, err);

    std::vector<std::string> overrides = opt.overrides;
    if (!opt.mode.empty())
        overrides.push_back("mode=" + opt.mode);
    if (!opt.ordering.empty())
        overrides.push_back("ordering=" + opt.ordering);
    const RunConfig cfg = opt.config_path.empty() ? parse_config("", overrides, "<defaults>")
                                                  : load_config(opt.config_path, overrides);

    const auto start = std::chrono::steady_clock::now();
    OutputSet files(opt.out_dir.empty() ? fs::path(cfg.output_dir) : fs::path(opt.out_dir));

    long total_runs = 0;
    if (opt.verb == "timecourse")
        total_runs = timecourse(opt, cfg, files, out, err);
    else if (opt.verb == "sweep")
        total_runs = sweep(opt, cfg, files, out, err);
    else if (opt.verb == "critical")
        total_runs = critical(opt, files, out, err);
    else if (opt.verb == "robustness-seeds")
        total_runs = robustness_seeds_verb(opt, cfg, files, out, err);
    else if (opt.verb == "robustness-windows")
        total_runs = robustness_windows_verb(opt, cfg, files, out, err);
    else if (opt.verb == "metric-crosscheck")
        total_runs = metric_crosscheck_verb(opt, cfg, files, out, err);
    else
        throw ValidationError("unknown verb " + opt.verb);

    write_run_properties(cfg, files.dir());
    files.path("run.properties");
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(build_manifest(files.dir(), files.files(), opt.verb, to_properties(cfg), total_runs, seconds),
                   files.dir());
    print(out, "output_dir", files.dir().generic_string());
    print(out, "total_runs", std::to_string(total_runs));
    err << "done in " << seconds << " s\n";
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Options opt;
    CLI::App app{"Closed-loop adaptive regulation simulator", "regsim"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", opt.config_path, "Config file of key = value lines");
    app.add_option("--out", opt.out_dir, "Output directory");
    app.add_option("--input", opt.input, "Grid CSV (critical) or sweep directory (re-analysis, verify-manifest)");
    app.add_option("--override", opt.overrides, "Config override K=V (repeatable)")->allow_extra_args(false);
    app.add_option("--jobs", opt.jobs, "Worker threads (default: hardware concurrency)")->check(CLI::NonNegativeNumber);
    app.add_option("--mode", opt.mode, "exploratory|publication")->check(CLI::IsMember({"exploratory", "publication"}));
    app.add_option("--ordering", opt.ordering, "pf|af")->check(CLI::IsMember({"pf", "af"}));

    const std::vector<std::pair<std::string, std::string>> verbs{
        {"timecourse", "Independent trajectories plus ensemble mean and std"},
        {"sweep", "(mu0, eta) phase grid and its critical curve"},
        {"critical", "Critical curve from an existing grid CSV"},
        {"robustness-seeds", "Repeat the sweep across seeds"},
        {"robustness-windows", "Critical curves under several burn-in windows, from stored series"},
        {"metric-crosscheck", "Critical curves from coherence-gap and entropy susceptibility"},
        {"verify-manifest", "Recompute and compare manifest checksums"},
    };
    for (const auto& [name, help] : verbs)
        app.add_subcommand(name, help)->callback([&opt, name = name] { opt.verb = name; });

    if (argc <= 1) {
        err << app.help();
        return kExitValidation;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitValidation;
    }

    try {
        return execute(opt, out, err);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "runtime failure: " << e.what() << '\n';
        return kExitRuntime;
    }
}

} // namespace regsim
