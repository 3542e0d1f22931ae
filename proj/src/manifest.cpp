#include "regsim/manifest.hpp"

#include "regsim/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#ifndef REGSIM_VERSION
#define REGSIM_VERSION "0.0.0"
#endif

namespace regsim {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(std::uint64_t hash, const char* data, std::size_t size)
{
    for (std::size_t k = 0; k < size; ++k) {
        hash ^= static_cast<unsigned char>(data[k]);
        hash *= kFnvPrime;
    }
    return hash;
}

std::string hex64(std::uint64_t value)
{
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(value));
    return buffer;
}

} // namespace

std::uint64_t content_checksum(std::string_view bytes)
{
    return fnv1a(kFnvOffset, bytes.data(), bytes.size());
}

std::uint64_t file_checksum(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    std::uint64_t hash = kFnvOffset;
    char buffer[1 << 16];
    while (in) {
        in.read(buffer, sizeof(buffer));
        hash = fnv1a(hash, buffer, static_cast<std::size_t>(in.gcount()));
    }
    return hash;
}

std::string software_version()
{
    return std::string("regsim ") + REGSIM_VERSION;
}

Manifest build_manifest(const fs::path& dir, std::vector<fs::path> files, std::string command,
                        std::string config_echo, long total_runs, double wall_clock_seconds)
{
    Manifest manifest{software_version(), std::move(command), std::move(config_echo), total_runs, {},
                      wall_clock_seconds};
    std::vector<std::string> names;
    for (const fs::path& f : files)
        names.push_back(f.generic_string());
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    for (const std::string& name : names) {
        const fs::path full = dir / name;
        manifest.files.push_back({name, fs::file_size(full), file_checksum(full)});
    }
    return manifest;
}

std::string render_manifest(const Manifest& m)
{
    std::ostringstream out;
    out << "# provenance manifest\n";
    out << "version = " << m.version << '\n';
    out << "command = " << m.command << '\n';
    out << "total_runs = " << m.total_runs << '\n';
    out << "\n[config]\n" << m.config_echo;
    out << "\n[files]\n";
    for (const ManifestEntry& e : m.files)
        out << hex64(e.checksum) << "  " << e.name << '\n';
    out << "\n[sizes]\n";
    for (const ManifestEntry& e : m.files)
        out << e.name << " = " << e.bytes << '\n';
    out << "\n[non-deterministic]\n";
    char seconds[64];
    std::snprintf(seconds, sizeof(seconds), "%.3f", m.wall_clock_seconds);
    out << "wall_clock_seconds = " << seconds << '\n';
    return out.str();
}

fs::path write_manifest(const Manifest& manifest, const fs::path& dir)
{
    fs::create_directories(dir);
    const fs::path path = dir / "manifest.txt";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << render_manifest(manifest);
    if (!out)
        throw std::runtime_error("failed to write " + path.string());
    return path;
}

Manifest read_manifest(const fs::path& dir)
{
    const fs::path path = dir / "manifest.txt";
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("missing manifest " + path.string());

    Manifest m;
    std::map<std::string, std::uint64_t> checksums;
    std::map<std::string, std::uintmax_t> sizes;
    std::vector<std::string> order;
    std::string section;
    std::string line;
    int line_number = 0;
    auto bad = [&](const std::string& why) {
        throw ValidationError(path.string() + ":" + std::to_string(line_number) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || (section.empty() && line.front() == '#'))
            continue;
        if (line.front() == '[') {
            section = line;
            continue;
        }
        if (section == "[config]") {
            m.config_echo += line + "\n";
        } else if (section == "[files]") {
            const auto gap = line.find("  ");
            if (gap != 16)
                bad("malformed checksum line");
            std::uint64_t value = 0;
            const auto [end, ec] = std::from_chars(line.data(), line.data() + 16, value, 16);
            if (ec != std::errc() || end != line.data() + 16)
                bad("malformed checksum");
            const std::string name = line.substr(18);
            checksums[name] = value;
            order.push_back(name);
        } else if (section == "[sizes]") {
            const auto eq = line.rfind(" = ");
            if (eq == std::string::npos)
                bad("malformed size line");
            std::uintmax_t value = 0;
            const std::string digits = line.substr(eq + 3);
            const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
            if (ec != std::errc() || end != digits.data() + digits.size())
                bad("malformed size");
            sizes[line.substr(0, eq)] = value;
        } else if (section.empty() || section == "[non-deterministic]") {
            const auto eq = line.find(" = ");
            if (eq == std::string::npos)
                bad("malformed header line");
            const std::string key = line.substr(0, eq);
            const std::string value = line.substr(eq + 3);
            if (key == "version")
                m.version = value;
            else if (key == "command")
                m.command = value;
            else if (key == "total_runs")
                m.total_runs = std::stol(value);
            else if (key == "wall_clock_seconds")
                m.wall_clock_seconds = std::stod(value);
        }
    }
    for (const std::string& name : order) {
        const auto size = sizes.find(name);
        if (size == sizes.end())
            throw ValidationError(path.string() + ": no size recorded for " + name);
        m.files.push_back({name, size->second, checksums[name]});
    }
    return m;
}

VerifyReport verify_manifest(const fs::path& dir)
{
    const Manifest manifest = read_manifest(dir);
    VerifyReport report;
    for (const ManifestEntry& e : manifest.files) {
        ++report.checked;
        const fs::path full = dir / e.name;
        if (!fs::exists(full)) {
            report.problems.push_back(e.name + ": missing");
            continue;
        }
        const auto bytes = fs::file_size(full);
        const auto checksum = file_checksum(full);
        if (bytes != e.bytes)
            report.problems.push_back(e.name + ": size " + std::to_string(bytes) + " != " + std::to_string(e.bytes));
        else if (checksum != e.checksum)
            report.problems.push_back(e.name + ": checksum " + hex64(checksum) + " != " + hex64(e.checksum));
    }
    return report;
}

} // namespace regsim
