#include "regsim/csv_io.hpp"

#include "regsim/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace regsim {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

void finish(std::ofstream& out, const fs::path& path)
{
    out.flush();
    if (!out)
        throw std::runtime_error("failed writing " + path.string());
}

struct CsvTable {
    std::vector<std::vector<double>> rows;
    std::map<std::string, std::string> comments;  // `# key = value` lines
};

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
        if (comma == std::string_view::npos)
            return cells;
        start = comma + 1;
    }
}

double parse_cell(std::string_view cell, const fs::path& path, int line_number)
{
    double value = 0.0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || end != cell.data() + cell.size())
        throw ValidationError(path.string() + ":" + std::to_string(line_number) + ": malformed number '" +
                              std::string(cell) + "'");
    return value;
}

CsvTable read_table(const fs::path& path, std::string_view header)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != header)
        throw ValidationError(path.string() + ": expected header '" + std::string(header) + "'");
    const std::size_t width = split(header).size();

    CsvTable table;
    int line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty())
            continue;
        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                auto key = line.substr(1, eq - 1);
                auto value = line.substr(eq + 1);
                key.erase(0, key.find_first_not_of(' '));
                key.erase(key.find_last_not_of(' ') + 1);
                value.erase(0, value.find_first_not_of(' '));
                table.comments[key] = value;
            }
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != width)
            throw ValidationError(path.string() + ":" + std::to_string(line_number) + ": expected " +
                                  std::to_string(width) + " columns");
        std::vector<double> row;
        row.reserve(width);
        for (std::string_view cell : cells)
            row.push_back(parse_cell(cell, path, line_number));
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::vector<double> unique_sorted(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

} // namespace

std::string format_csv_number(double value)
{
    char buffer[64];
    const int n = std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return std::string(buffer, static_cast<std::size_t>(n));
}

double csv_round_trip(double value)
{
    const std::string text = format_csv_number(value);
    double out = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), out);
    return out;
}

void write_timeseries_csv(const TimeSeries& series, const fs::path& path)
{
    std::ofstream out = open_output(path);
    out << kTimeseriesHeader << '\n';
    for (const StepRecord& r : series.records)
        out << r.step << ',' << format_csv_number(r.t) << ',' << format_csv_number(r.s_vn) << ','
            << format_csv_number(r.delta_c) << ',' << format_csv_number(r.mu) << ','
            << format_csv_number(r.delta_mu) << '\n';
    finish(out, path);
}

void write_grid_csv(const PhaseGrid& grid, const fs::path& path)
{
    std::ofstream out = open_output(path);
    out << kGridHeader << '\n';
    for (std::size_t j = 0; j < grid.eta_values.size(); ++j)
        for (std::size_t i = 0; i < grid.mu_values.size(); ++i) {
            const auto row = static_cast<Eigen::Index>(j);
            const auto col = static_cast<Eigen::Index>(i);
            out << format_csv_number(grid.eta_values[j]) << ',' << format_csv_number(grid.mu_values[i]) << ','
                << format_csv_number(grid.mean_delta_c(row, col)) << ',' << format_csv_number(grid.chi(row, col))
                << ',' << grid.n_runs(row, col) << '\n';
        }
    finish(out, path);
}

void write_curve_csv(const CriticalCurve& curve, const fs::path& path)
{
    std::ofstream out = open_output(path);
    out << kCurveHeader << '\n';
    for (std::size_t j = 0; j < curve.mu_c.size(); ++j)
        out << format_csv_number(curve.eta_values[j]) << ',' << format_csv_number(curve.mu_c[j]) << '\n';
    out << "# mu_c_mean = " << format_csv_number(curve.mean_mu_c) << '\n';
    out << "# mu_c_std = " << (curve.std_mu_c ? format_csv_number(*curve.std_mu_c) : std::string("nan")) << '\n';
    finish(out, path);
}

TimeSeries read_timeseries_csv(const fs::path& path)
{
    const CsvTable table = read_table(path, kTimeseriesHeader);
    TimeSeries series;
    for (const auto& row : table.rows)
        series.records.push_back(
            StepRecord{static_cast<long>(std::llround(row[0])), row[1], row[2], row[3], row[4], row[5]});
    if (series.records.size() >= 2)
        series.dt = series.records[1].t - series.records[0].t;
    else if (series.records.size() == 1 && series.records[0].step > 0)
        series.dt = series.records[0].t / static_cast<double>(series.records[0].step);
    return series;
}

PhaseGrid read_grid_csv(const fs::path& path)
{
    const CsvTable table = read_table(path, kGridHeader);
    std::vector<double> etas;
    std::vector<double> mus;
    for (const auto& row : table.rows) {
        etas.push_back(row[0]);
        mus.push_back(row[1]);
    }
    PhaseGrid grid;
    grid.eta_values = unique_sorted(etas);
    grid.mu_values = unique_sorted(mus);
    const auto n_eta = static_cast<Eigen::Index>(grid.eta_values.size());
    const auto n_mu = static_cast<Eigen::Index>(grid.mu_values.size());
    if (table.rows.size() != static_cast<std::size_t>(n_eta * n_mu))
        throw ValidationError(path.string() + ": rows do not form a complete grid");
    grid.mean_delta_c = Eigen::MatrixXd::Zero(n_eta, n_mu);
    grid.chi = Eigen::MatrixXd::Zero(n_eta, n_mu);
    grid.n_runs = Eigen::MatrixXi::Zero(n_eta, n_mu);
    std::size_t k = 0;
    for (Eigen::Index j = 0; j < n_eta; ++j)
        for (Eigen::Index i = 0; i < n_mu; ++i, ++k) {
            const auto& row = table.rows[k];
            if (row[0] != grid.eta_values[static_cast<std::size_t>(j)] ||
                row[1] != grid.mu_values[static_cast<std::size_t>(i)])
                throw ValidationError(path.string() + ": rows are not in ascending (eta, mu) order");
            grid.mean_delta_c(j, i) = row[2];
            grid.chi(j, i) = row[3];
            grid.n_runs(j, i) = static_cast<int>(std::lround(row[4]));
        }
    return grid;
}

CriticalCurve read_curve_csv(const fs::path& path)
{
    const CsvTable table = read_table(path, kCurveHeader);
    CriticalCurve curve;
    for (const auto& row : table.rows) {
        curve.eta_values.push_back(row[0]);
        curve.mu_c.push_back(row[1]);
        curve.degenerate_rows.push_back(false);
    }
    const auto mean = table.comments.find("mu_c_mean");
    const auto stddev = table.comments.find("mu_c_std");
    if (mean == table.comments.end() || stddev == table.comments.end())
        throw ValidationError(path.string() + ": missing mu_c summary lines");
    curve.mean_mu_c = parse_cell(mean->second, path, 0);
    if (stddev->second != "nan")
        curve.std_mu_c = parse_cell(stddev->second, path, 0);
    return curve;
}

void write_seed_summary_csv(const SeedRobustness& result, const fs::path& path)
{
    std::ofstream out = open_output(path);
    out << "eta,mu_c_mean,mu_c_std\n";
    for (std::size_t j = 0; j < result.eta_values.size(); ++j)
        out << format_csv_number(result.eta_values[j]) << ',' << format_csv_number(result.mean_curve[j]) << ','
            << format_csv_number(result.std_curve[j]) << '\n';
    finish(out, path);
}

void write_window_envelope_csv(const WindowRobustness& result, const fs::path& path)
{
    std::ofstream out = open_output(path);
    out << "eta,mu_c_min,mu_c_max,width\n";
    const std::vector<double> width = result.envelope_width();
    for (std::size_t j = 0; j < result.eta_values.size(); ++j)
        out << format_csv_number(result.eta_values[j]) << ',' << format_csv_number(result.envelope_min[j]) << ','
            << format_csv_number(result.envelope_max[j]) << ',' << format_csv_number(width[j]) << '\n';
    finish(out, path);
}

void write_crosscheck_csv(const MetricCrosscheck& result, const fs::path& path)
{
    std::ofstream out = open_output(path);
    out << "eta,mu_c_delta_c,mu_c_entropy,abs_diff\n";
    const CriticalCurve& a = result.from_coherence_gap;
    for (std::size_t j = 0; j < a.eta_values.size(); ++j)
        out << format_csv_number(a.eta_values[j]) << ',' << format_csv_number(a.mu_c[j]) << ','
            << format_csv_number(result.from_entropy.mu_c[j]) << ',' << format_csv_number(result.abs_difference[j])
            << '\n';
    finish(out, path);
}

fs::path stored_series_name(std::size_t eta_index, std::size_t mu_index, int run)
{
    char name[64];
    std::snprintf(name, sizeof(name), "eta%03zu_mu%03zu_run%02d.csv", eta_index, mu_index, run);
    return fs::path("series") / name;
}

std::vector<fs::path> write_stored_runs(const StoredRuns& runs, const fs::path& dir)
{
    std::vector<fs::path> written;
    for (std::size_t j = 0; j < runs.eta_values.size(); ++j)
        for (std::size_t i = 0; i < runs.mu_values.size(); ++i)
            for (int r = 0; r < runs.runs_per_point; ++r) {
                const fs::path name = stored_series_name(j, i, r);
                write_timeseries_csv(runs.at(j, i, r), dir / name);
                written.push_back(name);
            }
    return written;
}

StoredRuns load_stored_runs(const fs::path& dir)
{
    const PhaseGrid grid = read_grid_csv(dir / "grid.csv");
    if (grid.n_runs.size() == 0)
        throw ValidationError((dir / "grid.csv").string() + ": empty grid");
    const int runs_per_point = grid.n_runs(0, 0);
    if ((grid.n_runs.array() != runs_per_point).any() || runs_per_point < 1)
        throw ValidationError((dir / "grid.csv").string() + ": cells disagree on the run count");

    StoredRuns runs{grid.mu_values, grid.eta_values, runs_per_point, {}};
    for (std::size_t j = 0; j < runs.eta_values.size(); ++j)
        for (std::size_t i = 0; i < runs.mu_values.size(); ++i)
            for (int r = 0; r < runs_per_point; ++r) {
                const fs::path file = dir / stored_series_name(j, i, r);
                if (!fs::exists(file))
                    throw ValidationError("missing stored series " + file.string());
                runs.series.push_back(read_timeseries_csv(file));
            }
    return runs;
}

} // namespace regsim
