#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "habitpath/cli.hpp"
#include "habitpath/config_io.hpp"
#include "habitpath/error.hpp"
#include "habitpath/presets.hpp"
#include "habitpath/report.hpp"

using namespace habitpath;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("habitpath_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write_config(const fs::path& dir, const ScenarioConfig& cfg) {
  const fs::path file = dir / "config.json";
  std::ofstream(file) << config_to_json(cfg).dump(2);
  return file;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int rows(const std::string& csv) {
  return static_cast<int>(std::count(csv.begin(), csv.end(), '\n')) - 1;
}

}  // namespace

TEST_CASE("solve writes path, result and plot") {
  TempDir tmp;
  ScenarioConfig cfg = paper_baseline(UtilityFamily::kMultHabit);
  const fs::path config = write_config(tmp.path, cfg);
  std::ostringstream out, err;
  CHECK(cmd_solve(config, tmp.path / "run", {true}, out, err) == kExitOk);
  CHECK(rows(slurp(tmp.path / "run" / "path.csv")) == 20);
  const json result = json::parse(slurp(tmp.path / "run" / "result.json"));
  CHECK(result.at("result").at("converged") == true);
  CHECK(result.contains("shape"));
  CHECK(fs::exists(tmp.path / "run" / "plot.svg"));
  const std::string svg = slurp(tmp.path / "run" / "plot.svg");

  // A second run reproduces every file byte for byte.
  CHECK(cmd_solve(config, tmp.path / "again", {true}, out, err) == kExitOk);
  CHECK(slurp(tmp.path / "again" / "plot.svg") == svg);
  CHECK(slurp(tmp.path / "again" / "result.json") == slurp(tmp.path / "run" / "result.json"));
  CHECK(slurp(tmp.path / "again" / "path.csv") == slurp(tmp.path / "run" / "path.csv"));
}

TEST_CASE("solve exit codes") {
  TempDir tmp;
  ScenarioConfig cfg = paper_baseline(UtilityFamily::kMultHabit);
  cfg.horizon_N = 0;
  std::ostringstream out, err;
  CHECK(cmd_solve(write_config(tmp.path, cfg), tmp.path / "a", {}, out, err) == kExitConfig);
  CHECK(err.str().find("horizon_N") != std::string::npos);

  cfg = paper_baseline(UtilityFamily::kAddHabitCrra);
  cfg.utility.b = 5.0;
  CHECK(cmd_solve(write_config(tmp.path, cfg), tmp.path / "b", {}, out, err) ==
        kExitNotConverged);
  const json result = json::parse(slurp(tmp.path / "b" / "result.json"));
  CHECK(result.at("result").at("domain_hits").get<int>() > 0);

  std::ostringstream err2;
  CHECK(cmd_solve(tmp.path / "missing.json", tmp.path / "c", {}, out, err2) == kExitConfig);
  std::ofstream(tmp.path / "garbage.json") << "{not json";
  CHECK(cmd_solve(tmp.path / "garbage.json", tmp.path / "c", {}, out, err2) == kExitConfig);
}

TEST_CASE("sweep over beta") {
  TempDir tmp;
  const fs::path config = write_config(tmp.path, paper_baseline(UtilityFamily::kMultHabit));
  std::ostringstream out, err;
  CHECK(cmd_sweep(config, "beta", {0.0, 0.5, 1.0, 2.0}, tmp.path / "s", out, err) == kExitOk);
  const std::string csv = slurp(tmp.path / "s" / "sweep.csv");
  CHECK(rows(csv) == 4);
  CHECK(csv.rfind("value,status,converged,objective,kkt_residual", 0) == 0);
  for (int i = 0; i < 4; ++i) {
    char dir[16];
    std::snprintf(dir, sizeof dir, "run_%03d", i);
    CHECK(fs::exists(tmp.path / "s" / dir / "path.csv"));
  }
}

TEST_CASE("single-value sweep matches solve") {
  TempDir tmp;
  const fs::path config = write_config(tmp.path, paper_baseline(UtilityFamily::kMultHabit));
  std::ostringstream out, err;
  REQUIRE(cmd_solve(config, tmp.path / "solo", {}, out, err) == kExitOk);
  REQUIRE(cmd_sweep(config, "utility.beta", {1.0}, tmp.path / "s", out, err) == kExitOk);
  CHECK(slurp(tmp.path / "s" / "run_000" / "path.csv") == slurp(tmp.path / "solo" / "path.csv"));
  CHECK(slurp(tmp.path / "s" / "run_000" / "result.json") ==
        slurp(tmp.path / "solo" / "result.json"));
}

TEST_CASE("sweep over D orders later years") {
  TempDir tmp;
  const fs::path config = write_config(tmp.path, paper_baseline(UtilityFamily::kCujMult));
  std::ostringstream out, err;
  REQUIRE(cmd_sweep(config, "D", {0.0, 0.5, 1.0}, tmp.path / "s", out, err) == kExitOk);
  std::vector<ConsumptionPath> paths;
  for (const char* dir : {"run_000", "run_001", "run_002"}) {
    std::ifstream in(tmp.path / "s" / dir / "path.csv");
    paths.push_back(read_path_csv(in));
  }
  for (int t = 10; t < 20; ++t) {
    CHECK(paths[1][t] < paths[0][t]);
    CHECK(paths[2][t] < paths[1][t]);
  }
}

TEST_CASE("sweep validates every value before solving") {
  TempDir tmp;
  const fs::path config = write_config(tmp.path, paper_baseline(UtilityFamily::kMultHabit));
  std::ostringstream out, err;
  CHECK(cmd_sweep(config, "beta", {1.0, -1.0}, tmp.path / "s", out, err) == kExitConfig);
  CHECK(err.str().find("utility.beta") != std::string::npos);
  CHECK_FALSE(fs::exists(tmp.path / "s"));
  CHECK(cmd_sweep(config, "utility.nope", {1.0}, tmp.path / "s", out, err) == kExitConfig);
  CHECK(cmd_sweep(config, "beta", {}, tmp.path / "s", out, err) == kExitConfig);
  CHECK(cmd_sweep(config, "horizon_N", {10, 15}, tmp.path / "n", out, err) == kExitOk);
  CHECK(rows(slurp(tmp.path / "n" / "run_001" / "path.csv")) == 15);
}

TEST_CASE("figure presets validate and report") {
  for (int id = 1; id <= 7; ++id) {
    const FigurePreset p = figure_preset(id);
    CHECK(p.id == id);
    CHECK_FALSE(p.description.empty());
    for (const auto& c : p.curves) CHECK_NOTHROW(validate_config(c.config));
  }
  CHECK_THROWS_AS(figure_preset(0), Error);
  CHECK_THROWS_AS(figure_preset(8), Error);

  TempDir tmp;
  std::ostringstream out, err;
  for (int id : {4, 6, 7}) {
    const fs::path dir = tmp.path / std::to_string(id);
    CHECK(cmd_figure(id, dir, out, err) == kExitOk);
    const json summary = json::parse(slurp(dir / "summary.json"));
    CHECK(summary.at("pass") == true);
    CHECK(summary.at("curves").size() == figure_preset(id).curves.size());
    CHECK(fs::exists(dir / "figure.svg"));
  }
  CHECK(cmd_figure(9, tmp.path / "bad", out, err) == kExitConfig);

  // Figure 2 reports the intermediate-year comparison, pass or fail.
  CHECK(cmd_figure(2, tmp.path / "2", out, err) != kExitConfig);
  const json summary = json::parse(slurp(tmp.path / "2" / "summary.json"));
  bool reported = false;
  for (const auto& curve : summary.at("curves")) {
    for (const auto& check : curve.at("checks")) {
      reported = reported || check.at("name") == "intermediate years within 5%";
    }
  }
  CHECK(reported);
}

TEST_CASE("non-pathological preset curves converge") {
  for (int id = 1; id <= 7; ++id) {
    for (const auto& c : figure_preset(id).curves) {
      if (c.pathological) continue;
      CAPTURE(c.label);
      CHECK(solve(validate_config(c.config)).converged);
    }
  }
}

TEST_CASE("self check passes") {
  std::ostringstream out, err;
  CHECK(cmd_check(out, err) == kExitOk);
  CHECK(out.str().find("FAIL") == std::string::npos);
  CHECK(out.str().find("lifetime gradient") != std::string::npos);
}
