#include "regsim/config.hpp"

#include "regsim/csv_io.hpp"
#include "regsim/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace regsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text)
{
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value))
        throw ValidationError("'" + std::string(text) + "' is not a finite number");
    return value;
}

template <typename Int>
Int parse_integer(std::string_view text)
{
    Int value{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size())
        throw ValidationError("'" + std::string(text) + "' is not an integer in range");
    return value;
}

bool parse_bool(std::string_view text)
{
    if (text == "true")
        return true;
    if (text == "false")
        return false;
    throw ValidationError("'" + std::string(text) + "' is not true or false");
}

// Closed or half-open numeric ranges for single-key validation.
struct Range {
    double lo = -kInf;
    double hi = kInf;
    bool lo_open = false;
    bool hi_open = false;

    void check(double v) const
    {
        const bool above = lo_open ? v > lo : v >= lo;
        const bool below = hi_open ? v < hi : v <= hi;
        if (!above || !below) {
            std::ostringstream msg;
            msg << "value " << v << " outside " << (lo_open ? "(" : "[") << lo << ", " << hi
                << (hi_open ? ")" : "]");
            throw ValidationError(msg.str());
        }
    }
};

struct KeySpec {
    std::string_view name;
    std::function<void(RunConfig&, std::string_view)> parse;
    std::function<std::string(const RunConfig&)> format;
};

KeySpec real_key(std::string_view name, double RunConfig::*member, Range range)
{
    return {name,
            [member, range](RunConfig& c, std::string_view v) {
                const double value = parse_double(v);
                range.check(value);
                c.*member = value;
            },
            [member](const RunConfig& c) { return format_decimal(c.*member); }};
}

KeySpec int_key(std::string_view name, int RunConfig::*member, int lo, int hi)
{
    return {name,
            [member, lo, hi](RunConfig& c, std::string_view v) {
                const int value = parse_integer<int>(v);
                if (value < lo || value > hi)
                    throw ValidationError("value " + std::to_string(value) + " outside [" +
                                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
                c.*member = value;
            },
            [member](const RunConfig& c) { return std::to_string(c.*member); }};
}

KeySpec bool_key(std::string_view name, bool RunConfig::*member)
{
    return {name, [member](RunConfig& c, std::string_view v) { c.*member = parse_bool(v); },
            [member](const RunConfig& c) { return std::string(c.*member ? "true" : "false"); }};
}

const std::vector<KeySpec>& key_table()
{
    static const std::vector<KeySpec> table = [] {
        const Range positive{0.0, kInf, true};
        const Range non_negative{0.0};
        std::vector<KeySpec> keys{
            {"base_seed",
             [](RunConfig& c, std::string_view v) { c.base_seed = parse_integer<std::uint64_t>(v); },
             [](const RunConfig& c) { return std::to_string(c.base_seed); }},
            real_key("burn_in_fraction", &RunConfig::burn_in_fraction, {0.0, 0.8, false, true}),
            real_key("control.alpha", &RunConfig::alpha, {0.0, 1.0, true}),
            real_key("control.mu_max", &RunConfig::mu_max, positive),
            real_key("control.mu_min", &RunConfig::mu_min, positive),
            real_key("control.target_entropy", &RunConfig::target_entropy, non_negative),
            real_key("control.w_coherence", &RunConfig::w_coherence, {0.0, 1e3}),
            real_key("dt", &RunConfig::dt, {0.0, 1.0, true}),
            bool_key("entropy.normalized", &RunConfig::entropy_normalized),
            real_key("eta", &RunConfig::eta, {0.0, 1e3}),
            real_key("hamiltonian.coupling", &RunConfig::coupling, {-1e3, 1e3}),
            real_key("hamiltonian.energy_scale", &RunConfig::energy_scale, {-1e3, 1e3}),
            real_key("hamiltonian.locality", &RunConfig::locality, {0.0, 1e6, true}),
            {"mode",
             [](RunConfig& c, std::string_view v) {
                 if (v == "publication")
                     c.mode = AnalysisMode::Publication;
                 else if (v == "exploratory")
                     c.mode = AnalysisMode::Exploratory;
                 else
                     throw ValidationError("mode must be exploratory or publication");
             },
             [](const RunConfig& c) { return std::string(to_string(c.mode)); }},
            real_key("mu0", &RunConfig::mu0, positive),
            real_key("noise.dephase_scale", &RunConfig::dephase_scale, {0.0, 1e6, true}),
            {"ordering",
             [](RunConfig& c, std::string_view v) {
                 if (v == "pf")
                     c.ordering = StepOrdering::PerceptionFirst;
                 else if (v == "af")
                     c.ordering = StepOrdering::ActionFirst;
                 else
                     throw ValidationError("ordering must be pf or af");
             },
             [](const RunConfig& c) { return std::string(to_string(c.ordering)); }},
            {"output_dir",
             [](RunConfig& c, std::string_view v) { c.output_dir = std::string(v); },
             [](const RunConfig& c) { return c.output_dir; }},
            bool_key("output.series", &RunConfig::output_series),
            {"robustness.burn_in_fractions",
             [](RunConfig& c, std::string_view v) {
                 std::vector<double> values;
                 std::size_t start = 0;
                 while (start <= v.size()) {
                     const auto comma = v.find(',', start);
                     const auto item = trim(v.substr(start, comma == std::string_view::npos ? v.npos : comma - start));
                     const double f = parse_double(item);
                     Range{0.0, 0.8, true, true}.check(f);
                     values.push_back(f);
                     if (comma == std::string_view::npos)
                         break;
                     start = comma + 1;
                 }
                 c.robustness_burn_in_fractions = std::move(values);
             },
             [](const RunConfig& c) {
                 std::string out;
                 for (std::size_t k = 0; k < c.robustness_burn_in_fractions.size(); ++k)
                     out += (k ? "," : "") + format_decimal(c.robustness_burn_in_fractions[k]);
                 return out;
             }},
            int_key("robustness.seeds", &RunConfig::robustness_seeds, 2, 1000),
            int_key("runs", &RunConfig::runs, 1, 1000000),
            int_key("state.dim", &RunConfig::dim, 2, 256),
            real_key("state.phase_noise", &RunConfig::phase_noise, {0.0, 100.0}),
            real_key("state.salience_center", &RunConfig::salience_center, {-1e6, 1e6}),
            real_key("state.salience_width", &RunConfig::salience_width, {0.0, 1e12, true}),
            int_key("steps", &RunConfig::steps, 1, 100000000),
            real_key("sweep.eta_start", &RunConfig::sweep_eta_start, {0.0, 1e3}),
            real_key("sweep.eta_stop", &RunConfig::sweep_eta_stop, {0.0, 1e3}),
            int_key("sweep.eta_points", &RunConfig::sweep_eta_points, 1, 10000),
            real_key("sweep.mu_start", &RunConfig::sweep_mu_start, positive),
            real_key("sweep.mu_stop", &RunConfig::sweep_mu_stop, positive),
            int_key("sweep.mu_points", &RunConfig::sweep_mu_points, 1, 10000),
        };
        std::sort(keys.begin(), keys.end(), [](const KeySpec& a, const KeySpec& b) { return a.name < b.name; });
        return keys;
    }();
    return table;
}

const KeySpec* find_key(std::string_view name)
{
    for (const KeySpec& k : key_table())
        if (k.name == name)
            return &k;
    return nullptr;
}

struct Entry {
    std::string value;
    std::string location;
};

[[noreturn]] void fail(const std::string& location, const std::string& message)
{
    throw ConfigError(location + ": " + message);
}

void add_entry(std::map<std::string, Entry>& entries, std::string_view line, const std::string& location,
               bool allow_replace)
{
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
        fail(location, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty())
        fail(location, "missing key");
    if (!find_key(key))
        fail(location, "unknown key '" + key + "'");
    if (value.empty())
        fail(location, "missing value for '" + key + "'");
    if (!allow_replace && entries.contains(key))
        fail(location, "duplicate key '" + key + "'");
    entries[key] = Entry{value, location};
}

std::string location_of(const std::map<std::string, Entry>& entries, std::initializer_list<std::string_view> keys,
                        std::string_view source)
{
    for (std::string_view k : keys) {
        const auto it = entries.find(std::string(k));
        if (it != entries.end())
            return it->second.location;
    }
    return std::string(source);
}

void check_cross_fields(const RunConfig& c, const std::map<std::string, Entry>& entries, std::string_view source)
{
    auto where = [&](std::initializer_list<std::string_view> keys) { return location_of(entries, keys, source); };

    if (!(c.mu_max > c.mu_min))
        fail(where({"control.mu_max", "control.mu_min"}), "control.mu_max must exceed control.mu_min");
    if (c.mu0 < c.mu_min || c.mu0 > c.mu_max)
        fail(where({"mu0", "control.mu_min", "control.mu_max"}), "mu0 must lie in [mu_min, mu_max]");
    if (c.entropy_normalized && c.target_entropy > 1.0)
        fail(where({"control.target_entropy", "entropy.normalized"}),
             "normalized target entropy must lie in [0, 1]");
    if (!c.entropy_normalized && c.target_entropy > std::log(static_cast<double>(c.dim)))
        fail(where({"control.target_entropy", "entropy.normalized"}), "target entropy exceeds ln(dim)");
    if (c.mode == AnalysisMode::Publication) {
        if (c.runs < 2)
            fail(where({"runs", "mode"}), "publication mode requires runs >= 2");
        if (!(c.burn_in_fraction > 0.0))
            fail(where({"burn_in_fraction", "mode"}), "publication mode requires burn_in_fraction > 0");
    }
    if (c.sweep_mu_start < c.mu_min || c.sweep_mu_stop > c.mu_max)
        fail(where({"sweep.mu_start", "sweep.mu_stop"}), "mu sweep must lie inside [mu_min, mu_max]");
    const bool mu_ok = c.sweep_mu_points == 1 ? c.sweep_mu_start <= c.sweep_mu_stop : c.sweep_mu_start < c.sweep_mu_stop;
    if (!mu_ok)
        fail(where({"sweep.mu_stop", "sweep.mu_start"}), "sweep.mu_start must be below sweep.mu_stop");
    const bool eta_ok =
        c.sweep_eta_points == 1 ? c.sweep_eta_start <= c.sweep_eta_stop : c.sweep_eta_start < c.sweep_eta_stop;
    if (!eta_ok)
        fail(where({"sweep.eta_stop", "sweep.eta_start"}), "sweep.eta_start must be below sweep.eta_stop");
    if (c.output_dir.find('#') != std::string::npos)
        fail(where({"output_dir"}), "output_dir may not contain '#'");
}

} // namespace

std::string format_decimal(double value)
{
    char buffer[512];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::fixed);
    if (ec != std::errc())
        throw ValidationError("number too long to format");
    return std::string(buffer, end);
}

RunConfig default_config(AnalysisMode mode)
{
    RunConfig c;
    c.mode = mode;
    if (mode == AnalysisMode::Exploratory) {
        c.steps = 4000;
        c.runs = 5;
        c.sweep_mu_points = 20;
        c.sweep_eta_points = 20;
    }
    return c;
}

std::vector<std::string_view> config_keys()
{
    std::vector<std::string_view> names;
    for (const KeySpec& k : key_table())
        names.push_back(k.name);
    return names;
}

RunConfig parse_config(std::string_view text, std::span<const std::string> overrides, std::string_view source)
{
    std::map<std::string, Entry> entries;
    int line_number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto newline = text.find('\n', pos);
        std::string_view line = text.substr(pos, newline == std::string_view::npos ? text.npos : newline - pos);
        ++line_number;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (!line.empty())
            add_entry(entries, line, std::string(source) + ":" + std::to_string(line_number), false);
        if (newline == std::string_view::npos)
            break;
        pos = newline + 1;
    }
    for (const std::string& item : overrides)
        add_entry(entries, trim(item), "--override '" + item + "'", true);

    AnalysisMode mode = AnalysisMode::Publication;
    if (const auto it = entries.find("mode"); it != entries.end()) {
        RunConfig probe;
        try {
            find_key("mode")->parse(probe, it->second.value);
        } catch (const ValidationError& e) {
            fail(it->second.location, e.what());
        }
        mode = probe.mode;
    }

    RunConfig config = default_config(mode);
    for (const auto& [key, entry] : entries) {
        try {
            find_key(key)->parse(config, entry.value);
        } catch (const ConfigError&) {
            throw;
        } catch (const ValidationError& e) {
            fail(entry.location, key + ": " + e.what());
        }
    }
    check_cross_fields(config, entries, source);
    return config;
}

RunConfig load_config(const std::filesystem::path& path, std::span<const std::string> overrides)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(path.string() + ": cannot open config file");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), overrides, path.string());
}

std::string to_properties(const RunConfig& config)
{
    std::string out;
    for (const KeySpec& k : key_table())
        out += std::string(k.name) + " = " + k.format(config) + "\n";
    return out;
}

std::filesystem::path write_run_properties(const RunConfig& config, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    const std::filesystem::path path = dir / "run.properties";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << to_properties(config);
    if (!out)
        throw std::runtime_error("failed to write " + path.string());
    return path;
}

SimulationParams simulation_params(const RunConfig& c)
{
    SimulationParams p;
    p.steps = c.steps;
    p.dt = c.dt;
    p.dim = c.dim;
    p.salience_center = c.salience_center;
    p.salience_width = c.salience_width;
    p.phase_noise = c.phase_noise;
    p.energy_scale = c.energy_scale;
    p.coupling = c.coupling;
    p.locality = c.locality;
    p.dephase_scale = c.dephase_scale;
    p.target_entropy = c.target_entropy;
    p.alpha = c.alpha;
    p.mu_min = c.mu_min;
    p.mu_max = c.mu_max;
    p.w_coherence = c.w_coherence;
    p.normalized_entropy = c.entropy_normalized;
    p.ordering = c.ordering;
    return p;
}

SweepSpec sweep_spec(const RunConfig& c)
{
    SweepSpec spec;
    spec.mu_values = linspace(c.sweep_mu_start, c.sweep_mu_stop, c.sweep_mu_points);
    spec.eta_values = linspace(c.sweep_eta_start, c.sweep_eta_stop, c.sweep_eta_points);
    for (double& v : spec.mu_values)
        v = csv_round_trip(v);
    for (double& v : spec.eta_values)
        v = csv_round_trip(v);
    spec.runs_per_point = c.runs;
    spec.mode = c.mode;
    spec.base_seed = c.base_seed;
    spec.burn_in_fraction = c.burn_in_fraction;
    spec.sim = simulation_params(c);
    return spec;
}

} // namespace regsim
