#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eitgap/cli.hpp"
#include "eitgap/output.hpp"
#include "fixtures.hpp"

using namespace eitgap;
using fixtures::config_path;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

json read_json(const std::string& name) {
  std::ifstream in(config_path(name));
  return json::parse(in);
}

/// Scratch directory holding one edited config.
struct Workspace {
  fs::path dir;

  explicit Workspace(const std::string& name)
      : dir(fs::temp_directory_path() / ("eitgap_test_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }

  std::string write(const json& j, const std::string& file = "config.json") const {
    const fs::path p = dir / file;
    std::ofstream(p) << j.dump(2);
    return p.string();
  }
};

}  // namespace

TEST_CASE("band without a standing wave has no gap") {
  Workspace ws("band");
  json j = read_json("band_structure.json");
  j["drive"]["standing_wave_hz"] = 0.0;
  j["spectrum"]["points"] = 41;
  const Run r = run({"band", ws.write(j), "-o", ws.dir.string(), "-p", "flat"});
  REQUIRE(r.code == exit_success);
  const CsvTable t = CsvTable::read(ws.dir / "flat_band.csv");
  CHECK(t.rows.size() == 41);
  const std::size_t gap = t.column("in_gap");
  for (const auto& row : t.rows) CHECK(row[gap] == "0");
  CHECK(r.out.find("in_gap_points = 0") != std::string::npos);
}

TEST_CASE("band with the bundled config reports both edges") {
  Workspace ws("band_edges");
  json j = read_json("band_structure.json");
  j["spectrum"]["points"] = 81;
  const Run r = run({"band", ws.write(j), "-o", ws.dir.string(), "--svg"});
  REQUIRE(r.code == exit_success);
  const CsvTable t = CsvTable::read(ws.dir / "band_band.csv");
  CHECK(t.meta("numeric_gap_rad_per_s") != "none");
  CHECK(fs::exists(ws.dir / "band_band.svg"));
  CHECK(json::parse(std::string(t.meta("config")))["spectrum"]["points"] == 81);
}

TEST_CASE("missing key exits with a config error naming it") {
  Workspace ws("missing");
  json j = read_json("reflect_spectrum.json");
  j["drive"].erase("detuning_hz");
  const Run r = run({"reflect", ws.write(j), "-o", ws.dir.string()});
  CHECK(r.code == exit_config_error);
  CHECK(r.err.find("drive.detuning_hz") != std::string::npos);

  const Run absent = run({"reflect", (ws.dir / "nope.json").string()});
  CHECK(absent.code == exit_config_error);
}

TEST_CASE("reflect writes the spectrum with run metadata") {
  Workspace ws("reflect");
  json j = read_json("reflect_spectrum.json");
  j["spectrum"]["points"] = 101;
  const Run r = run({"reflect", ws.write(j), "-o", ws.dir.string(), "-p", "r"});
  REQUIRE(r.code == exit_success);
  const CsvTable t = CsvTable::read(ws.dir / "r_reflect.csv");
  CHECK(t.rows.size() == 101);
  CHECK(t.meta("command") == "reflect");
  CHECK(std::stoull(std::string(t.meta("periods"))) > 0);
  CHECK(!t.meta("peak_reflectivity").empty());
  CHECK(!t.meta("light_shift_rad_per_s").empty());
  CHECK(r.out.find("peak_reflectivity") != std::string::npos);
  for (const auto& row : t.rows) {
    const double R = std::stod(row[t.column("reflectivity")]);
    CHECK(R >= 0.0);
    CHECK(R <= 1.0);
  }
}

TEST_CASE("check exit status follows the validity report") {
  Workspace ws("check");
  const std::string pass = config_path("regression/bragg_pass.json").string();
  const std::string fail = config_path("regression/bragg_fail.json").string();
  CHECK(run({"check", pass, "-o", ws.dir.string()}).code == exit_success);
  CHECK(run({"check", fail, "-o", ws.dir.string()}).code == exit_success);
  const Run strict_fail = run({"check", fail, "--strict", "-o", ws.dir.string()});
  CHECK(strict_fail.code == exit_validity_failure);
  CHECK(strict_fail.out.find("validity: FAIL") != std::string::npos);
  const Run strict_pass = run({"check", pass, "--strict", "-o", ws.dir.string(), "-p", "ok"});
  CHECK(strict_pass.code == exit_success);
  const CsvTable t = CsvTable::read(ws.dir / "ok_validity.csv");
  CHECK(t.rows.size() == 6);
  for (const auto& row : t.rows) CHECK(row[t.column("status")] == "pass");
}

TEST_CASE("evolve writes a binary trajectory that reads back") {
  Workspace ws("evolve");
  json j = read_json("evolve_gaussian.json");
  j["grid"]["points"] = 256;
  j["evolve"]["t1_s"] = 2e-8;
  j["evolve"]["snapshot_stride"] = 50;
  const Run r = run({"evolve", ws.write(j), "-o", ws.dir.string(), "-p", "e", "--binary"});
  REQUIRE(r.code == exit_success);
  const TrajectoryFile f = read_trajectory(ws.dir / "e_trajectory.bin");
  CHECK(f.grid.n_points == 256);
  CHECK(f.records.size() == 5);
  CHECK(f.records.back().time == doctest::Approx(2e-8));
  const CsvTable csv = CsvTable::read(ws.dir / "e_trajectory.csv");
  CHECK(csv.rows.size() == 5 * 256);
  CHECK(fs::exists(ws.dir / "e_diagnostics.csv"));
  CHECK(r.out.find("final_norm") != std::string::npos);
}

TEST_CASE("bad invocations are config errors") {
  CHECK(run({"frobnicate"}).code == exit_config_error);
  CHECK(run({}).code == exit_config_error);
  CHECK(run({"band"}).code == exit_config_error);
  CHECK(run({"--version"}).code == exit_success);
}

TEST_CASE("overflowing light shift is a numerical failure") {
  Workspace ws("overflow");
  json j = read_json("reflect_spectrum.json");
  j["drive"]["standing_wave_hz"] = 1e200;
  j["drive"]["detuning_hz"] = 1e-200;
  j["spectrum"]["points"] = 5;
  const Run r = run({"reflect", ws.write(j), "-o", ws.dir.string()});
  CHECK(r.code == exit_numerical_failure);
  CHECK_FALSE(r.err.empty());
}
