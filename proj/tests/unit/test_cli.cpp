#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

TEST_SUITE_BEGIN("cli");

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code = -1;
  std::string out;
};

int counter = 0;

fs::path fresh_dir() {
  auto d = fs::temp_directory_path() / ("wlantcp_cli_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter++));
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

CliResult run_cli(const std::string& args) {
  const fs::path out = fresh_dir() / "stdout.txt";
  const std::string cmd =
      std::string(WLANTCP_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WEXITSTATUS(status);
  r.out = slurp(out);
  return r;
}

fs::path write_scenario(const std::string& body) {
  const fs::path p = fresh_dir() / "scenario.json";
  std::ofstream(p) << body;
  return p;
}

const char* kSmall = R"({
  "classes": [ {"rate_mbps": 5.5, "count": 2}, {"rate_mbps": 11, "count": 3} ],
  "w_conn": 60,
  "rtpd_ms": [10, 50],
  "sim": {"duration_ms": 4000, "warmup_ms": 500, "seeds": [1, 2]}
})";

std::string main_scenario() {
  return (fs::path(WLANTCP_SOURCE_DIR) / "scenarios" / "multirate_w60.json").string();
}

}  // namespace

TEST_CASE("analyze: success, stable bytes, expected shape") {
  const std::string cmd = "analyze --scenario " + main_scenario();
  auto first = run_cli(cmd);
  REQUIRE(first.exit_code == 0);
  CHECK(first.out.rfind("rtpd_ms,phi_ap,phi_sta_11,phi_sta_5.5,n_ap,", 0) == 0);
  int lines = 0;
  for (char c : first.out) lines += c == '\n';
  CHECK(lines == 10);  // header + 9 sweep points
  CHECK(first.out == run_cli(cmd).out);
}

TEST_CASE("simulate: deterministic bytes for pinned seeds") {
  const auto sc = write_scenario(kSmall);
  const std::string cmd = "simulate --scenario " + sc.string();
  auto first = run_cli(cmd);
  REQUIRE(first.exit_code == 0);
  CHECK(first.out == run_cli(cmd).out);
  CHECK(first.out.rfind("rtpd_ms,n_ap_mean,n_ap_min,n_ap_max,n_ap_ci95,", 0) == 0);
}

TEST_CASE("simulate: single seed leaves the CI cells empty") {
  const auto sc = write_scenario(kSmall);
  auto r = run_cli("simulate --scenario " + sc.string() + " --seeds 42");
  REQUIRE(r.exit_code == 0);
  std::istringstream in(r.out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(row.size() > 0);
  CHECK(row.find(",,") != std::string::npos);  // empty ci95 cell
}

TEST_CASE("usage and schema failures exit with 2") {
  CHECK(run_cli("analyze --scenario /nonexistent.json").exit_code == 2);
  CHECK(run_cli("analyze").exit_code == 2);               // missing required option
  CHECK(run_cli("frobnicate --scenario x").exit_code == 2);
  const auto bad = write_scenario(R"({"classes": [], "w_conn": 1, "rtpd_ms": [1]})");
  CHECK(run_cli("analyze --scenario " + bad.string()).exit_code == 2);
  const auto empty_rtpd = write_scenario(
      R"({"classes": [{"rate_mbps": 11, "count": 1}], "w_conn": 1, "rtpd_ms": []})");
  CHECK(run_cli("analyze --scenario " + empty_rtpd.string()).exit_code == 2);
}

TEST_CASE("numerical failure exits with 3; approximate mode rescues it") {
  // three classes at window 400 => 401^3 lattice points, far past the budget
  const auto big = write_scenario(R"({
    "classes": [ {"rate_mbps": 11, "count": 1}, {"rate_mbps": 5.5, "count": 1},
                 {"rate_mbps": 2, "count": 1} ],
    "w_conn": 400,
    "rtpd_ms": [10]
  })");
  CHECK(run_cli("analyze --scenario " + big.string()).exit_code == 3);
  CHECK(run_cli("analyze --scenario " + big.string() + " --approx-mva").exit_code == 0);
}

TEST_CASE("--out writes files and refuses to clobber without --force") {
  const auto sc = write_scenario(kSmall);
  const auto out = fresh_dir();
  const std::string base = "analyze --scenario " + sc.string() + " --out " + out.string();
  REQUIRE(run_cli(base).exit_code == 0);
  CHECK(fs::exists(out / "analyze.csv"));
  CHECK(run_cli(base).exit_code == 2);  // collision
  CHECK(run_cli(base + " --force").exit_code == 0);
}

TEST_CASE("plotdata emits one series per source") {
  const auto sc = write_scenario(R"({
    "classes": [ {"rate_mbps": 11, "count": 2} ],
    "w_conn": 10,
    "rtpd_ms": [20],
    "sim": {"duration_ms": 2000, "warmup_ms": 200, "seeds": [3]}
  })");
  const auto out = fresh_dir();
  auto r = run_cli("plotdata --scenario " + sc.string() + " --out " + out.string());
  REQUIRE(r.exit_code == 0);
  const std::string analysis = slurp(out / "throughput_analysis.csv");
  const std::string sim = slurp(out / "throughput_simulation.csv");
  CHECK(analysis.rfind("rtpd_ms,throughput\n20,", 0) == 0);
  CHECK(sim.rfind("rtpd_ms,throughput\n20,", 0) == 0);
  int lines = 0;
  for (char c : analysis) lines += c == '\n';
  CHECK(lines == 2);  // single-point series
}

TEST_CASE("compare: zero threshold flags every joined row") {
  const auto sc = write_scenario(kSmall);
  auto r = run_cli("compare --scenario " + sc.string() + " --threshold 0");
  REQUIRE(r.exit_code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "rtpd_ms,metric,analysis,simulation,rel_err_pct,flagged");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.substr(line.size() - 2) == ",1");
  }
  CHECK(rows == 2 * 7);  // two sweep points x seven metrics
}

TEST_CASE("compare: disabled simulation leaves explicit gaps") {
  const auto sc = write_scenario(R"({
    "classes": [ {"rate_mbps": 11, "count": 1} ],
    "w_conn": 5,
    "rtpd_ms": [10],
    "sim": {"enabled": false}
  })");
  auto r = run_cli("compare --scenario " + sc.string());
  REQUIRE(r.exit_code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.substr(line.size() - 3) == ",,,");  // no simulation, error, flag
  }
  CHECK(rows > 0);
}

TEST_SUITE_END();
