#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eitgap/dynamics.hpp"
#include "eitgap/medium.hpp"
#include "eitgap/schedule.hpp"

namespace eitgap {

struct PulseSpec {
  double center = 0.0;     // m
  double rms_width = 0.0;  // m, of |psi|^2
  /// Temporal width T in s; zero means rms_width / v_g^in.
  double duration = 0.0;

  bool operator==(const PulseSpec&) const = default;
};

/// Stage boundaries, all measured from the start of the run at t = 0.
struct StageTimes {
  double t_store = 0.0;       // control is off from here
  double t_hold = 0.0;        // standing wave starts to rise
  double t_release = 0.0;     // control starts to rise again
  double t_trap_end = 0.0;    // standing wave starts to fall
  double t_final = 0.0;

  bool operator==(const StageTimes&) const = default;
};

struct ValidityMargins {
  double much_greater = 10.0;  // ">>" passes at ratio >= this
  double much_less = 0.1;      // "<<" passes at ratio <= this
  double at_most_slack = 10.0; // "<~" warns up to this ratio

  bool operator==(const ValidityMargins&) const = default;
};

/// Storage, release into the bandgap, trapping and release. The medium spans
/// [c - L/2, c + L/2] where c is the centre of the grid.
struct Scenario {
  MediumParams medium;
  DriveSchedule schedule;
  PulseSpec pulse;
  StageTimes stages;
  double omega_c_in = 0.0;  // rad/s
  double omega_c_0 = 0.0;   // rad/s
  double omega_s = 0.0;     // rad/s, single-beam amplitude while trapping
  double ramp_time = 0.0;   // s
  GridSpec grid;
  double dt = 0.0;
  std::size_t snapshot_stride = 100;
  ValidityMargins margins;

  double medium_center() const { return 0.5 * (grid.z_min + grid.z_max); }
  double v_in() const;
  double v_release() const;
  double pulse_duration() const;
  double light_shift() const;
  double interaction_time() const { return stages.t_trap_end - stages.t_release; }

  /// Throws DomainError naming the violated condition.
  void validate() const;
};

/// Smoothstep schedule matching the stage times:
///   omega_c: omega_c_in until t_store - ramp, down to 0 at t_store, back up to
///            omega_c_0 over [t_release, t_release + ramp];
///   omega_s: 0 until t_hold, up over [t_hold, t_hold + ramp], down over
///            [t_trap_end, t_trap_end + ramp].
DriveSchedule staged_schedule(const StageTimes& stages, double omega_c_in,
                              double omega_c_0, double omega_s, double ramp_time,
                              double delta, double delta_k);

enum class CheckStatus { pass, warn, fail };
std::string_view to_string(CheckStatus status);

enum class Relation { much_greater, much_less, at_most, fits };
std::string_view to_string(Relation relation);

struct ValidityCheck {
  std::string name;
  std::string expression;
  Relation relation = Relation::at_most;
  double value = 0.0;
  double bound = 0.0;
  double ratio = 0.0;  // value / bound
  CheckStatus status = CheckStatus::pass;
};

struct ValidityReport {
  std::vector<ValidityCheck> checks;

  bool all_pass() const;
  bool any_fail() const;
  const ValidityCheck& find(std::string_view name) const;
};

/// Status of ratio = value / bound under the relation:
///   >>  pass at ratio >= much_greater, fail at ratio <= 1;
///   <<  pass at ratio <= much_less, fail at ratio >= 1;
///   <~  pass at ratio <= 1, fail at ratio >= at_most_slack;
///   fits  pass at ratio <= 1, fail otherwise.
CheckStatus classify(Relation relation, double ratio, const ValidityMargins& margins);

ValidityReport validity_report(const Scenario& scenario);

struct ScheduleSample {
  double time = 0.0;
  double omega_c = 0.0;
  double omega_s = 0.0;
};

struct ProtocolSummary {
  double initial_norm = 0.0;
  double final_norm = 0.0;
  double max_norm_drift = 0.0;           // relative, over every step
  double in_medium_at_release = 0.0;
  double in_medium_at_trap_end = 0.0;
  double trapped_fraction = 0.0;         // in-medium norm at t_trap_end / initial norm
  double retained_fraction = 0.0;        // in-medium norm, t_trap_end over t_release
  double centroid_drift = 0.0;           // max |shift| over the trap window, in units of L
  std::optional<double> oscillation_period;  // stretched time, s
  double expected_period = 0.0;          // pi / (Delta_s tan^2 theta_0)
  std::size_t crossings = 0;
  std::size_t steps = 0;
};

struct ProtocolResult {
  std::vector<Snapshot> snapshots;
  std::vector<StepSample> steps;
  std::vector<ScheduleSample> trace;
  std::vector<std::string> warnings;
  ProtocolSummary summary;
  ValidityReport report;
};

ProtocolResult run_protocol(const Scenario& scenario);

/// Plain key = value lines.
std::string format_summary(const ProtocolSummary& summary);

}  // namespace eitgap
