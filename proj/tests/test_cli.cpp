#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "cmbeam/cli.hpp"
#include "cmbeam/config_io.hpp"

using namespace cmbeam;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("cmbeam");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::path("/tmp/cmbeam_cli_tests") / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str(const std::string& child = "") const {
    return child.empty() ? path.string() : (path / child).string();
  }
};

const char* kSolveConfig = R"({
  "scenario": {
    "geometry": {"ula": {"elements": 8}},
    "sources": [
      {"angle_deg": 20.0, "kind": "constant_modulus_qpsk", "power": 1.0},
      {"angle_deg": -40.0, "kind": "gaussian_interferer", "power": 1.0}
    ],
    "noise_variance": 0.1,
    "num_snapshots": 100,
    "seed": 11
  }
})";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("help and parse failures") {
    CHECK(run_cli({"--help"}) == 0);
    CHECK(run_cli({"solve", "--help"}) == 0);
    CHECK(run_cli({}) == 1);              // a subcommand is required
    CHECK(run_cli({"solve"}) == 1);       // --config is required
    CHECK(run_cli({"frobnicate"}) == 1);  // unknown subcommand
    CHECK(run_cli({"solve", "--config", "x.json", "--bogus"}) == 1);
  }

  TEST_CASE("solve writes its three outputs deterministically") {
    TempDir dir("solve");
    write_text_file(dir.str("cfg.json"), kSolveConfig);
    CHECK(run_cli({"solve", "--config", dir.str("cfg.json"), "--out",
                   dir.str("a"), "--quiet"}) == 0);
    CHECK(run_cli({"solve", "--config", dir.str("cfg.json"), "--out",
                   dir.str("b"), "--quiet"}) == 0);
    for (const char* name :
         {"solution.json", "beampattern.csv", "w_matrix.csv"}) {
      INFO(name);
      REQUIRE(fs::exists(dir.path / "a" / name));
      CHECK(read_text_file(dir.str("a") + "/" + name) ==
            read_text_file(dir.str("b") + "/" + name));
    }
    const std::string solution = read_text_file(dir.str("a/solution.json"));
    CHECK(solution.find("\"converged\": true") != std::string::npos);
  }

  TEST_CASE("seed flag overrides the config seed") {
    TempDir dir("seed");
    write_text_file(dir.str("cfg.json"), kSolveConfig);
    std::string reseeded = kSolveConfig;
    const auto pos = reseeded.find("\"seed\": 11");
    reseeded.replace(pos, 10, "\"seed\": 77");
    write_text_file(dir.str("cfg77.json"), reseeded);

    CHECK(run_cli({"solve", "--config", dir.str("cfg.json"), "--seed", "77",
                   "--out", dir.str("flag"), "--quiet"}) == 0);
    CHECK(run_cli({"solve", "--config", dir.str("cfg77.json"), "--out",
                   dir.str("file"), "--quiet"}) == 0);
    CHECK(read_text_file(dir.str("flag/solution.json")) ==
          read_text_file(dir.str("file/solution.json")));
    // and differs from the original seed
    CHECK(run_cli({"solve", "--config", dir.str("cfg.json"), "--out",
                   dir.str("orig"), "--quiet"}) == 0);
    CHECK(read_text_file(dir.str("flag/solution.json")) !=
          read_text_file(dir.str("orig/solution.json")));
  }

  TEST_CASE("pattern reproduces the solve-time beampattern") {
    TempDir dir("pattern");
    write_text_file(dir.str("cfg.json"), kSolveConfig);
    REQUIRE(run_cli({"solve", "--config", dir.str("cfg.json"), "--out",
                     dir.str("s"), "--quiet"}) == 0);
    CHECK(run_cli({"pattern", "--config", dir.str("s/solution.json"),
                   "--out", dir.str("p"), "--quiet"}) == 0);
    CHECK(read_text_file(dir.str("p/beampattern.csv")) ==
          read_text_file(dir.str("s/beampattern.csv")));
  }

  TEST_CASE("simulate emits unit-modulus samples for a clean source") {
    TempDir dir("simulate");
    write_text_file(dir.str("cfg.json"), R"({
      "scenario": {
        "geometry": {"ula": {"elements": 1}},
        "sources": [{"angle_deg": 0.0, "kind": "constant_modulus_qpsk", "power": 1.0}],
        "noise_variance": 0.0,
        "num_snapshots": 32,
        "seed": 5
      }
    })");
    CHECK(run_cli({"simulate", "--config", dir.str("cfg.json"), "--out",
                   dir.str(), "--quiet"}) == 0);
    std::istringstream csv(read_text_file(dir.str("snapshots.csv")));
    std::string line;
    REQUIRE(std::getline(csv, line));
    CHECK(line == "re_x1,im_x1");
    std::size_t rows = 0;
    while (std::getline(csv, line)) {
      const auto comma = line.find(',');
      REQUIRE(comma != std::string::npos);
      const double re = std::strtod(line.substr(0, comma).c_str(), nullptr);
      const double im = std::strtod(line.substr(comma + 1).c_str(), nullptr);
      CHECK(re * re + im * im == doctest::Approx(1.0).epsilon(1e-12));
      ++rows;
    }
    CHECK(rows == 32);
  }

  TEST_CASE("quiet flag silences the progress note") {
    TempDir dir("quiet");
    write_text_file(dir.str("cfg.json"), kSolveConfig);
    std::ostringstream captured;
    std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
    const int quiet_rc = run_cli({"simulate", "--config", dir.str("cfg.json"),
                                  "--out", dir.str("q"), "--quiet"});
    const std::string quiet_out = captured.str();
    captured.str("");
    const int loud_rc = run_cli({"simulate", "--config", dir.str("cfg.json"),
                                 "--out", dir.str("l")});
    const std::string loud_out = captured.str();
    std::cout.rdbuf(old);
    CHECK(quiet_rc == 0);
    CHECK(loud_rc == 0);
    CHECK(quiet_out.empty());
    CHECK(loud_out.find("snapshots.csv") != std::string::npos);
  }

  TEST_CASE("experiment honors the out override") {
    TempDir dir("experiment");
    write_text_file(dir.str("cfg.json"), R"({
      "name": "cli-exp",
      "scenario": {
        "geometry": {"ula": {"elements": 4}},
        "sources": [
          {"angle_deg": 15.0, "kind": "constant_modulus_qpsk", "power": 1.0},
          {"angle_deg": -30.0, "kind": "gaussian_interferer", "power": 1.0}
        ],
        "noise_variance": 0.1,
        "num_snapshots": 30,
        "seed": 3
      },
      "trials": 2,
      "methods": ["trace_norm", "sgd_cma"],
      "output_dir": "should_not_be_used"
    })");
    CHECK(run_cli({"experiment", "--config", dir.str("cfg.json"), "--out",
                   dir.str("out"), "--quiet"}) == 0);
    CHECK(fs::exists(dir.path / "out" / "report.csv"));
    CHECK(fs::exists(dir.path / "out" / "summary.csv"));
    CHECK(fs::exists(dir.path / "out" / "pattern_trace_norm.csv"));
    CHECK(fs::exists(dir.path / "out" / "pattern_sgd_cma.csv"));
    CHECK(!fs::exists("should_not_be_used"));
  }

  TEST_CASE("exit codes distinguish the failure families") {
    TempDir dir("errors");
    // 1: config rejected
    write_text_file(dir.str("bad.json"), "{\"scenario\": 42}");
    CHECK(run_cli({"solve", "--config", dir.str("bad.json"), "--quiet"}) ==
          1);
    // 2: unreadable config path
    CHECK(run_cli({"solve", "--config", dir.str("missing.json"),
                   "--quiet"}) == 2);
    // 3: degenerate solution (no sources, no noise -> zero snapshots)
    write_text_file(dir.str("zero.json"), R"({
      "scenario": {
        "geometry": {"ula": {"elements": 2}},
        "sources": [],
        "noise_variance": 0.0,
        "num_snapshots": 8,
        "seed": 1
      }
    })");
    CHECK(run_cli({"solve", "--config", dir.str("zero.json"), "--out",
                   dir.str(), "--quiet"}) == 3);
  }

  TEST_CASE("a capped solve still writes outputs and reports non-convergence") {
    TempDir dir("cap");
    std::string cfg = kSolveConfig;
    const auto pos = cfg.rfind('}');
    REQUIRE(pos != std::string::npos);
    std::string with_solver = cfg.substr(0, pos);
    // splice a solver section into the root object
    const auto scen_end = with_solver.rfind('}');
    with_solver =
        with_solver.substr(0, scen_end + 1) +
        ",\n  \"solver\": {\"max_iterations\": 3}\n}";
    write_text_file(dir.str("cfg.json"), with_solver);
    CHECK(run_cli({"solve", "--config", dir.str("cfg.json"), "--out",
                   dir.str("o"), "--quiet"}) == 0);
    const std::string solution = read_text_file(dir.str("o/solution.json"));
    CHECK(solution.find("\"converged\": false") != std::string::npos);
    CHECK(solution.find("\"iterations\": 3") != std::string::npos);
  }
}
