// End-to-end tests for the gmla command-line tool: exit codes, report
// contents, determinism of the written reports, and config-file handling.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

const std::string kCli = GMLA_CLI_PATH;

int run(const std::string& args) {
  std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
#ifdef _WIN32
  return rc;
#else
  return WEXITSTATUS(rc);
#endif
}

fs::path freshDir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() / ("gmla_cli_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

json readReport(const fs::path& dir, const std::string& name) {
  std::ifstream in(dir / (name + "_report.json"));
  REQUIRE(in.good());
  return json::parse(in);
}

// Reports are deterministic up to the timing field.
std::string stripTiming(json j) {
  j.erase("timing_ms");
  return j.dump();
}

}  // namespace

TEST_CASE("wf reports plane-wave singular directions, exit 0") {
  fs::path d = freshDir("wf");
  CHECK(run("--out " + d.string() + " wf --signal \"planewave(5)\"") == 0);
  json rep = readReport(d, "wf");
  CHECK(rep["schema_version"] == "1");
  CHECK(rep["command"] == "wf");
  auto dirs = rep["payload"]["in_directions_deg"].get<std::vector<double>>();
  bool near0 = false, near180 = false;
  for (double a : dirs) {
    if (std::abs(a) <= 4 || a >= 356) near0 = true;
    if (std::abs(a - 180) <= 4) near180 = true;
    // Nothing far from the horizontal axis.
    CHECK((std::min(std::abs(a), std::abs(a - 360)) <= 25 ||
           std::abs(a - 180) <= 25));
  }
  CHECK(near0);
  CHECK(near180);
  CHECK(fs::exists(d / "wf_polar.csv"));
}

TEST_CASE("check moyal passes on the default window, exit 0") {
  fs::path d = freshDir("moyal");
  CHECK(run("--out " + d.string() + " check moyal --signal \"hermite(3)\"") ==
        0);
  json rep = readReport(d, "check_moyal");
  CHECK(rep["payload"]["pass"] == true);
  CHECK(rep["payload"]["residual"].get<double>() < 1e-6);
}

TEST_CASE("symcheck exit code reflects the seminorm screen") {
  fs::path d = freshDir("symcheck");
  CHECK(run("--out " + d.string() +
            " symcheck --symbol \"bracket(2)\" --m 2") == 0);
  CHECK(run("--out " + d.string() +
            " symcheck --symbol \"bracket(2)\" --m 1") == 1);
  json rep = readReport(d, "symcheck");
  CHECK(rep["payload"]["seminorms"]["pass"] == false);
}

TEST_CASE("usage and parse errors exit 2") {
  fs::path d = freshDir("err");
  CHECK(run("--out " + d.string() + " wf --signal \"planewave(\"") == 2);
  CHECK(run("--out " + d.string() + " wf --no-such-flag") == 2);
  CHECK(run("nosuchcommand") == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE("repeated runs write byte-identical payloads") {
  fs::path d1 = freshDir("det1");
  fs::path d2 = freshDir("det2");
  std::string args = " stft --signal \"chirp(2)\" --N 128";
  CHECK(run("--out " + d1.string() + args) == 0);
  CHECK(run("--out " + d2.string() + args) == 0);
  CHECK(stripTiming(readReport(d1, "stft")) ==
        stripTiming(readReport(d2, "stft")));
  // Side files carry no timestamps, so they match exactly.
  std::ifstream a(d1 / "stft_field.csv"), b(d2 / "stft_field.csv");
  std::string sa((std::istreambuf_iterator<char>(a)), {});
  std::string sb((std::istreambuf_iterator<char>(b)), {});
  CHECK(sa == sb);
  CHECK(!sa.empty());
}

TEST_CASE("config file sets options and flags override it") {
  fs::path d = freshDir("cfg");
  fs::path ini = d / "run.ini";
  {
    std::ofstream out(ini);
    out << "out=" << (d / "fromcfg").string() << "\n"
        << "[wf]\n"
        << "signal=\"dirac()\"\n"
        << "N=128\n";
  }
  CHECK(run("--config " + ini.string() + " wf") == 0);
  json rep = readReport(d / "fromcfg", "wf");
  CHECK(rep["config"]["N"] == 128);
  CHECK(rep["config"]["signal"] == "dirac()");

  // Command-line flags take precedence over the config file.
  CHECK(run("--config " + ini.string() + " --out " + (d / "cli").string() +
            " wf --N 256 --signal \"planewave(5)\"") == 0);
  json rep2 = readReport(d / "cli", "wf");
  CHECK(rep2["config"]["N"] == 256);
  CHECK(rep2["config"]["signal"] == "planewave(5)");
}
