#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace regsim {

/// 64-bit FNV-1a over raw bytes.
std::uint64_t content_checksum(std::string_view bytes);
std::uint64_t file_checksum(const std::filesystem::path& path);

struct ManifestEntry {
    std::string name;  // path relative to the output directory, '/' separated
    std::uintmax_t bytes = 0;
    std::uint64_t checksum = 0;
};

/**
 * Provenance record written as manifest.txt. Everything above the
 * [non-deterministic] footer is a pure function of the outputs and the
 * configuration; wall-clock time lives only in the footer.
 */
struct Manifest {
    std::string version;
    std::string command;
    std::string config_echo;  // canonical run.properties text
    long total_runs = 0;
    std::vector<ManifestEntry> files;
    double wall_clock_seconds = 0.0;
};

std::string software_version();

/// Hashes each listed file (relative to dir) and fills a manifest.
Manifest build_manifest(const std::filesystem::path& dir, std::vector<std::filesystem::path> files,
                        std::string command, std::string config_echo, long total_runs,
                        double wall_clock_seconds);

std::string render_manifest(const Manifest& manifest);
std::filesystem::path write_manifest(const Manifest& manifest, const std::filesystem::path& dir);
Manifest read_manifest(const std::filesystem::path& dir);

struct VerifyReport {
    std::vector<std::string> problems;  // one line per missing or mismatching file
    std::size_t checked = 0;

    bool ok() const { return problems.empty(); }
};

/// Recomputes sizes and checksums of every file listed in dir/manifest.txt.
VerifyReport verify_manifest(const std::filesystem::path& dir);

} // namespace regsim
