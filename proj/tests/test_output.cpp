#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "eitgap/output.hpp"
#include "eitgap/version.hpp"

using namespace eitgap;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("eitgap_test_output_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("format_number round-trips doubles") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> exponent(-300.0, 300.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = (i % 2 ? -1.0 : 1.0) * std::pow(10.0, exponent(rng));
    CHECK(std::stod(format_number(x)) == x);
  }
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("csv tables render and parse back") {
  CsvTable t;
  t.columns = {"omega", "reflectivity"};
  t.add_meta("light_shift_rad_s", 2.5e6);
  t.add_meta("note", "lossless");
  t.add_row(std::vector<double>{-1.0, 0.25});
  t.add_row(std::vector<double>{1.0, 1.0 / 3.0});
  const std::string text = t.render();
  CHECK(text.rfind("# tool: eitgap " + std::string(version), 0) == 0);
  CHECK(text.find("# columns: omega,reflectivity\nomega,reflectivity\n") != std::string::npos);

  const CsvTable back = CsvTable::parse(text);
  CHECK(back.columns == t.columns);
  CHECK(back.rows == t.rows);
  CHECK(back.meta("note") == "lossless");
  CHECK(std::stod(std::string(back.meta("light_shift_rad_s"))) == 2.5e6);
  CHECK(back.column("reflectivity") == 1);
  CHECK(std::stod(back.rows[1][1]) == 1.0 / 3.0);
  CHECK_THROWS(back.column("missing"));
  CHECK_THROWS_AS(t.add_row(std::vector<double>{1.0}), std::logic_error);
}

TEST_CASE("atomic writes leave no temporary files") {
  const fs::path dir = scratch_dir("atomic");
  const fs::path file = dir / "table.csv";
  write_atomic(file, "first\n");
  write_atomic(file, "second\n");
  int entries = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    ++entries;
    CHECK(e.path().filename() == "table.csv");
  }
  CHECK(entries == 1);
  CHECK(CsvTable::read(file).rows.empty());
  CHECK(fs::file_size(file) == 7);
  write_atomic(dir / "nested" / "x.csv", "data");
  CHECK(fs::exists(dir / "nested" / "x.csv"));
  fs::remove_all(dir);
}

TEST_CASE("binary trajectories round-trip exactly") {
  const GridSpec grid{-0.5, 0.25, 64};
  std::vector<Snapshot> snaps(3);
  for (std::size_t s = 0; s < snaps.size(); ++s) {
    snaps[s].state = PolaritonState::gaussian(grid, 0.01 * s, 0.05);
    snaps[s].state.psi_minus[3] = {1.5, -2.5};
    snaps[s].state.time = 1e-7 * s;
    snaps[s].omega_c = 3.0 + s;
    snaps[s].omega_s = 7.0 * s;
  }
  const std::string bytes = encode_trajectory(grid, snaps);
  CHECK(bytes.size() == 8 + 4 + 4 + 8 + 16 + 8 + 3 * (24 + 2 * 64 * 16));
  CHECK(bytes.compare(0, 8, trajectory_magic) == 0);

  const TrajectoryFile back = decode_trajectory(bytes);
  CHECK(back.grid == grid);
  REQUIRE(back.records.size() == 3);
  for (std::size_t s = 0; s < 3; ++s) {
    CHECK(back.records[s].time == snaps[s].state.time);
    CHECK(back.records[s].omega_c == snaps[s].omega_c);
    CHECK(back.records[s].omega_s == snaps[s].omega_s);
    CHECK(back.records[s].psi_plus == snaps[s].state.psi_plus);
    CHECK(back.records[s].psi_minus == snaps[s].state.psi_minus);
  }

  CHECK_THROWS(decode_trajectory(bytes.substr(0, bytes.size() - 1)));
  CHECK_THROWS(decode_trajectory(bytes + "x"));
  std::string bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS(decode_trajectory(bad));

  const fs::path dir = scratch_dir("binary");
  write_atomic(dir / "t.bin", bytes);
  CHECK(read_trajectory(dir / "t.bin").records.size() == 3);
  fs::remove_all(dir);
}

TEST_CASE("svg charts are well-formed documents") {
  const std::vector<Series> series{{"R", {0.0, 1.0, 2.0}, {0.1, 0.9, 0.2}},
                                   {"T", {0.0, 1.0, 2.0}, {0.9, 0.1, 0.8}}};
  const std::string line = svg_line_chart("spectrum", "omega", "R", series);
  CHECK(line.rfind("<svg", 0) == 0);
  CHECK(line.find("</svg>") != std::string::npos);
  CHECK(line.find("<polyline") != std::string::npos);
  CHECK(line.find("spectrum") != std::string::npos);

  std::vector<std::vector<double>> values(500, std::vector<double>(300));
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = 0; j < values[i].size(); ++j) values[i][j] = double(i * j);
  const std::string map = svg_heatmap("intensity", "z", "t", 0.0, 1.0, 0.0, 2.0, values);
  CHECK(map.rfind("<svg", 0) == 0);
  std::size_t rects = 0;
  for (std::size_t p = map.find("<rect"); p != std::string::npos; p = map.find("<rect", p + 1))
    ++rects;
  CHECK(rects <= 200 * 200 + 2);
  CHECK(rects > 100);
}
