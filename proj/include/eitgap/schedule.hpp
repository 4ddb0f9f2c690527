#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace eitgap {

struct MediumParams;

enum class RampShape { hold, linear, smoothstep };

std::string_view to_string(RampShape shape);
RampShape ramp_shape_from_string(std::string_view name);

/// One piece of a time-dependent Rabi frequency. Smoothstep uses
/// 3s^2 - 2s^3 in the normalized segment time s.
struct RampSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  double v_start = 0.0;
  double v_end = 0.0;
  RampShape shape = RampShape::smoothstep;

  double value_at(double t) const;

  bool operator==(const RampSegment&) const = default;
};

/// Piecewise ramp over contiguous segments. Before the first segment the
/// ramp holds its initial value, after the last it holds the final one.
/// An empty ramp is a constant.
class Ramp {
 public:
  Ramp() = default;
  explicit Ramp(std::vector<RampSegment> segments);

  static Ramp constant(double value);

  double operator()(double t) const;

  bool is_constant() const { return segments_.empty(); }
  double constant_value() const { return constant_; }
  std::span<const RampSegment> segments() const { return segments_; }

  /// Segment boundaries, sorted.
  std::vector<double> breakpoints() const;

  /// First time >= `after` at which the ramp exceeds `threshold`, or +inf.
  double first_time_above(double after, double threshold) const;

  bool operator==(const Ramp&) const = default;

 private:
  std::vector<RampSegment> segments_;
  double constant_ = 0.0;
};

/// Control field, standing wave and detuning constants frozen at one time.
struct StaticDrive {
  double omega_c = 0.0;  // rad/s
  double omega_s = 0.0;  // rad/s, single-beam amplitude
  double delta = 0.0;    // rad/s, standing-wave detuning
  double delta_k = 0.0;  // rad/m, k_s - k0

  double light_shift() const;
};

struct DriveSchedule {
  Ramp omega_c;
  Ramp omega_s;
  double delta = 0.0;
  double delta_k = 0.0;

  void validate() const;

  /// k_s = k0 + delta_k.
  double standing_wave_wavenumber(const MediumParams& medium) const;

  /// Light-shift amplitude Omega_s(t)^2 / Delta.
  double light_shift(double t) const;

  StaticDrive at(double t) const;

  std::vector<double> breakpoints() const;
};

}  // namespace eitgap
