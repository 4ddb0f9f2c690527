#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eitgap/dynamics.hpp"

namespace eitgap {

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

/// Comma-separated table preceded by '#' metadata lines:
///   # tool: eitgap <version>
///   # <key>: <value>          (one per metadata entry)
///   # columns: a,b,c
///   a,b,c
///   rows...
struct CsvTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_meta(std::string key, std::string value);
  void add_meta(std::string key, double value);
  void add_row(std::vector<std::string> row);
  void add_row(const std::vector<double>& row);

  std::string render() const;
  void write(const std::filesystem::path& path) const { write_atomic(path, render()); }

  /// Inverse of render(); quoted fields are not supported.
  static CsvTable parse(std::string_view text);
  static CsvTable read(const std::filesystem::path& path);

  std::size_t column(std::string_view name) const;
  std::string_view meta(std::string_view key) const;
};

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Static line chart.
std::string svg_line_chart(std::string_view title, std::string_view x_label,
                           std::string_view y_label, const std::vector<Series>& series);

/// Static heatmap of values[row][col], rows along y (time), columns along x.
std::string svg_heatmap(std::string_view title, std::string_view x_label,
                        std::string_view y_label, double x_min, double x_max, double y_min,
                        double y_max, const std::vector<std::vector<double>>& values);

/// Binary trajectory layout, all little-endian:
///   char[8]  magic "EITPBG01"
///   uint32   format version (1)
///   uint32   reserved (0)
///   uint64   n_points
///   float64  z_min, z_max
///   uint64   n_snapshots
///   per snapshot:
///     float64 t, omega_c, omega_s
///     float64[2 n_points] psi_plus as (re, im) pairs
///     float64[2 n_points] psi_minus as (re, im) pairs
inline constexpr std::string_view trajectory_magic = "EITPBG01";
inline constexpr std::uint32_t trajectory_format_version = 1;

struct TrajectoryRecord {
  double time = 0.0;
  double omega_c = 0.0;
  double omega_s = 0.0;
  ComplexField psi_plus;
  ComplexField psi_minus;
};

struct TrajectoryFile {
  GridSpec grid;
  std::vector<TrajectoryRecord> records;
};

std::string encode_trajectory(const GridSpec& grid, const std::vector<Snapshot>& snapshots);
TrajectoryFile decode_trajectory(std::string_view bytes);
TrajectoryFile read_trajectory(const std::filesystem::path& path);

}  // namespace eitgap
