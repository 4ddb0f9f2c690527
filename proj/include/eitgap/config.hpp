#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eitgap/dynamics.hpp"
#include "eitgap/medium.hpp"
#include "eitgap/protocol.hpp"
#include "eitgap/schedule.hpp"

namespace eitgap {

// Every field is stored in the units written in the file: frequencies in Hz
// (converted by 2 pi on use), lengths in m, times in s.

struct MediumConfig {
  double coupling_hz = 0.0;
  double gamma_ab_hz = 0.0;
  double gamma_bc_hz = 0.0;
  double length_m = 0.0;
  double wavelength_m = 0.0;

  MediumParams params() const;
  bool operator==(const MediumConfig&) const = default;
};

struct SegmentConfig {
  double t_start_s = 0.0;
  double t_end_s = 0.0;
  double from_hz = 0.0;
  double to_hz = 0.0;
  RampShape shape = RampShape::smoothstep;

  bool operator==(const SegmentConfig&) const = default;
};

/// A constant in Hz or a list of segments.
using RampConfig = std::variant<double, std::vector<SegmentConfig>>;

Ramp to_ramp(const RampConfig& ramp);

struct DriveConfig {
  double detuning_hz = 0.0;
  double delta_k_per_m = 0.0;
  std::optional<RampConfig> control_hz;
  std::optional<RampConfig> standing_wave_hz;

  bool has_segments() const;
  /// Throws ConfigError if either field is absent.
  DriveSchedule schedule() const;
  bool operator==(const DriveConfig&) const = default;
};

struct SpectrumConfig {
  double omega_min_hz = 0.0;
  double omega_max_hz = 0.0;
  std::size_t points = 0;
  int slabs = 64;
  double time_s = 0.0;

  /// Uniform grid in rad/s, endpoints included.
  std::vector<double> omega_grid() const;
  bool operator==(const SpectrumConfig&) const = default;
};

struct GridConfig {
  double z_min_m = 0.0;
  double z_max_m = 0.0;
  std::size_t points = 0;

  GridSpec spec() const { return {z_min_m, z_max_m, points}; }
  bool operator==(const GridConfig&) const = default;
};

struct PulseConfig {
  double center_m = 0.0;
  double rms_width_m = 0.0;
  Direction direction = Direction::forward;
  std::optional<double> duration_s;

  bool operator==(const PulseConfig&) const = default;
};

struct EvolveConfig {
  double t0_s = 0.0;
  double t1_s = 0.0;
  double dt_s = 0.0;
  std::size_t snapshot_stride = 1;
  PulseConfig pulse;

  bool operator==(const EvolveConfig&) const = default;
};

struct ScenarioConfig {
  PulseConfig pulse;
  double t_store_s = 0.0;
  double t_hold_s = 0.0;
  double t_release_s = 0.0;
  double t_trap_end_s = 0.0;
  double t_final_s = 0.0;
  // Required unless the drive block carries segment lists, forbidden otherwise.
  std::optional<double> omega_c_in_hz;
  std::optional<double> omega_c_0_hz;
  std::optional<double> omega_s_hz;
  double ramp_time_s = 0.0;
  double dt_s = 0.0;
  std::size_t snapshot_stride = 100;

  bool operator==(const ScenarioConfig&) const = default;
};

struct ChecksConfig {
  double much_greater = 10.0;
  double much_less = 0.1;
  double at_most_slack = 10.0;

  bool operator==(const ChecksConfig&) const = default;
};

struct OutputConfig {
  std::string directory = ".";
  std::string prefix = "eitgap";
  bool svg = false;
  bool binary = false;

  bool operator==(const OutputConfig&) const = default;
};

struct Config {
  std::optional<std::string> description;
  std::optional<MediumConfig> medium;
  std::optional<DriveConfig> drive;
  std::optional<SpectrumConfig> spectrum;
  std::optional<GridConfig> grid;
  std::optional<EvolveConfig> evolve;
  std::optional<ScenarioConfig> scenario;
  ChecksConfig checks;
  OutputConfig output;

  /// Accessors that throw ConfigError naming the missing block.
  const MediumConfig& require_medium() const;
  const DriveConfig& require_drive() const;
  const SpectrumConfig& require_spectrum() const;
  const GridConfig& require_grid() const;
  const EvolveConfig& require_evolve() const;
  const ScenarioConfig& require_scenario() const;

  bool operator==(const Config&) const = default;
};

/// Parses JSON text. Unknown keys, wrong types, missing required keys and
/// out-of-range values raise ConfigError with the dotted key path.
Config parse_config(std::string_view text);
Config load_config(const std::filesystem::path& path);

/// Canonical JSON; parse_config(serialize_config(c)) == c.
std::string serialize_config(const Config& config);

/// Frozen drive constants at spectrum.time_s, angular units.
StaticDrive static_drive(const Config& config);

/// Protocol scenario. Without segment lists in the drive block the schedule
/// is built by staged_schedule. With them, the lists are used as given and
/// the scenario amplitudes are read off the schedule.
Scenario build_scenario(const Config& config);

}  // namespace eitgap
