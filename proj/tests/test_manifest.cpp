#include "regsim/manifest.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <fstream>

using namespace regsim;

namespace {

std::filesystem::path populated_dir(const std::string& name)
{
    const auto dir = test::scratch_dir(name);
    std::filesystem::create_directories(dir / "series");
    std::ofstream(dir / "a.csv") << "eta,mu_c\n0.1,0.2\n";
    std::ofstream(dir / "series" / "b.csv") << "step,t\n1,0.01\n";
    std::ofstream(dir / "run.properties") << "eta = 0.1\n";
    return dir;
}

} // namespace

TEST_CASE("FNV-1a 64 reference vectors")
{
    CHECK(content_checksum("") == 0xcbf29ce484222325ull);
    CHECK(content_checksum("a") == 0xaf63dc4c8601ec8cull);
    CHECK(content_checksum("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("write, read and verify a manifest")
{
    const auto dir = populated_dir("manifest_ok");
    const Manifest m = build_manifest(dir, {"a.csv", "series/b.csv", "run.properties"}, "sweep", "eta = 0.1\n",
                                      8, 1.25);
    write_manifest(m, dir);
    const std::string text = test::read_file(dir / "manifest.txt");
    CHECK(text.find(software_version()) != std::string::npos);
    CHECK(text.find(std::string("c6b8516d04f3c8e8") + "  a.csv\n") != std::string::npos);
    CHECK(text.find("[non-deterministic]") != std::string::npos);

    const Manifest back = read_manifest(dir);
    CHECK(back.files.size() == 3);
    CHECK(back.total_runs == 8);
    CHECK(back.command == "sweep");
    CHECK(back.config_echo == "eta = 0.1\n");
    CHECK(back.wall_clock_seconds == 1.25);
    const auto entry = std::find_if(back.files.begin(), back.files.end(),
                                [](const ManifestEntry& e) { return e.name == "series/b.csv"; });
    REQUIRE(entry != back.files.end());
    CHECK(entry->bytes == 14);
    CHECK(entry->checksum == content_checksum("step,t\n1,0.01\n"));

    const VerifyReport report = verify_manifest(dir);
    CHECK(report.ok());
    CHECK(report.checked == 3);

    // the wall clock is the only difference between two renders of the same outputs
    Manifest later = m;
    later.wall_clock_seconds = 99.0;
    const std::string a = render_manifest(m), b = render_manifest(later);
    CHECK(a.substr(0, a.find("[non-deterministic]")) == b.substr(0, b.find("[non-deterministic]")));
}

TEST_CASE("a corrupted byte fails verification on that file")
{
    const auto dir = populated_dir("manifest_corrupt");
    write_manifest(build_manifest(dir, {"a.csv", "series/b.csv"}, "sweep", "", 1, 0.0), dir);
    {
        std::fstream f(dir / "series" / "b.csv", std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(3);
        f.put('X');
    }
    const VerifyReport report = verify_manifest(dir);
    REQUIRE(report.problems.size() == 1);
    CHECK(report.problems[0].find("series/b.csv") != std::string::npos);
}

TEST_CASE("a missing file fails verification naming it")
{
    const auto dir = populated_dir("manifest_missing");
    write_manifest(build_manifest(dir, {"a.csv", "series/b.csv"}, "sweep", "", 1, 0.0), dir);
    std::filesystem::remove(dir / "a.csv");
    const VerifyReport report = verify_manifest(dir);
    REQUIRE(report.problems.size() == 1);
    CHECK(report.problems[0].find("a.csv") != std::string::npos);
    CHECK(report.problems[0].find("missing") != std::string::npos);
}

TEST_CASE("a missing manifest is an error")
{
    const auto dir = test::scratch_dir("manifest_none");
    CHECK_THROWS(read_manifest(dir));
}
