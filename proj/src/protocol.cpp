#include "eitgap/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "eitgap/errors.hpp"
#include "eitgap/units.hpp"

namespace eitgap {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError("scenario: " + message);
}

void push_hold(std::vector<RampSegment>& out, double t0, double t1, double v) {
  if (t1 > t0) out.push_back({t0, t1, v, v, RampShape::hold});
}

void push_ramp(std::vector<RampSegment>& out, double t0, double t1, double from, double to) {
  out.push_back({t0, t1, from, to, RampShape::smoothstep});
}

double in_medium(const Scenario& s, const PolaritonState& state) {
  const double half = 0.5 * s.medium.length;
  return norm_within(state, s.medium_center() - half, s.medium_center() + half);
}

std::string stage_name(std::size_t index) {
  static const char* names[] = {"storage", "trapping", "release"};
  return names[index];
}

}  // namespace

double Scenario::v_in() const { return group_velocity(omega_c_in, medium); }

double Scenario::v_release() const { return group_velocity(omega_c_0, medium); }

double Scenario::pulse_duration() const {
  return pulse.duration > 0.0 ? pulse.duration : pulse.rms_width / v_in();
}

double Scenario::light_shift() const {
  return light_shift_amplitude(omega_s, schedule.delta);
}

void Scenario::validate() const {
  medium.validate();
  schedule.validate();
  grid.validate();
  const auto& st = stages;
  require(st.t_store > 0.0 && st.t_store < st.t_hold && st.t_hold < st.t_release &&
              st.t_release < st.t_trap_end && st.t_trap_end < st.t_final,
          "stage times must satisfy 0 < t_store < t_hold < t_release < t_trap_end < t_final");
  require(ramp_time > 0.0, "ramp time must be > 0");
  require(omega_c_in > 0.0, "input control field must be > 0");
  require(omega_c_0 > 0.0, "release control field must be > 0");
  require(omega_s >= 0.0, "standing-wave amplitude must be >= 0");
  require(dt > 0.0, "dt must be > 0");
  require(snapshot_stride >= 1, "snapshot stride must be >= 1");
  require(pulse.rms_width > 0.0, "pulse width must be > 0");
  require(pulse.duration >= 0.0, "pulse duration must be >= 0");
  require(grid.extent() >= 4.0 * medium.length * (1.0 - 1e-12),
          "grid must span at least four medium lengths");
  require(std::abs(pulse.center - medium_center()) + 3.0 * pulse.rms_width <=
              0.5 * medium.length * (1.0 + 1e-12),
          "pulse must start inside the medium (three widths from each end)");

  const double eps = 1e-12 * st.t_final;
  require(schedule.omega_c(0.0) > 0.0, "control field must be on at t = 0");
  require(schedule.omega_s.first_time_above(0.0, 0.0) >= st.t_store - eps,
          "standing wave must stay off until the pulse is stored");
  const double control_return = schedule.omega_c.first_time_above(st.t_store, 0.0);
  require(schedule.omega_c(st.t_store) == 0.0 && control_return >= st.t_release - eps,
          "control field must stay off over [t_store, t_release]");
  const double standing_on = schedule.omega_s.first_time_above(st.t_store, 0.0);
  require(std::isinf(standing_on) || standing_on <= control_return + eps,
          "standing wave must switch on before or together with the control field");
}

DriveSchedule staged_schedule(const StageTimes& st, double omega_c_in, double omega_c_0,
                              double omega_s, double ramp_time, double delta,
                              double delta_k) {
  if (!(ramp_time > 0.0)) throw DomainError("staged schedule: ramp time must be > 0");
  if (st.t_store - ramp_time < 0.0 || st.t_hold + ramp_time > st.t_trap_end ||
      st.t_store > st.t_hold || st.t_release > st.t_trap_end || st.t_trap_end + ramp_time > st.t_final ||
      st.t_release + ramp_time > st.t_final)
    throw DomainError("staged schedule: ramps do not fit between the stage times");

  std::vector<RampSegment> control;
  push_hold(control, 0.0, st.t_store - ramp_time, omega_c_in);
  push_ramp(control, st.t_store - ramp_time, st.t_store, omega_c_in, 0.0);
  push_hold(control, st.t_store, st.t_release, 0.0);
  push_ramp(control, st.t_release, st.t_release + ramp_time, 0.0, omega_c_0);

  std::vector<RampSegment> standing;
  push_hold(standing, 0.0, st.t_hold, 0.0);
  push_ramp(standing, st.t_hold, st.t_hold + ramp_time, 0.0, omega_s);
  push_hold(standing, st.t_hold + ramp_time, st.t_trap_end, omega_s);
  push_ramp(standing, st.t_trap_end, st.t_trap_end + ramp_time, omega_s, 0.0);

  DriveSchedule s;
  s.omega_c = Ramp(std::move(control));
  s.omega_s = omega_s > 0.0 ? Ramp(std::move(standing)) : Ramp::constant(0.0);
  s.delta = delta;
  s.delta_k = delta_k;
  return s;
}

std::string_view to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::warn: return "warn";
    case CheckStatus::fail: return "fail";
  }
  return "fail";
}

std::string_view to_string(Relation relation) {
  switch (relation) {
    case Relation::much_greater: return ">>";
    case Relation::much_less: return "<<";
    case Relation::at_most: return "<~";
    case Relation::fits: return "<=";
  }
  return "?";
}

bool ValidityReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ValidityCheck& c) { return c.status == CheckStatus::pass; });
}

bool ValidityReport::any_fail() const {
  return std::any_of(checks.begin(), checks.end(),
                     [](const ValidityCheck& c) { return c.status == CheckStatus::fail; });
}

const ValidityCheck& ValidityReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw DomainError("validity report: no check named " + std::string(name));
}

CheckStatus classify(Relation relation, double ratio, const ValidityMargins& m) {
  if (std::isnan(ratio)) return CheckStatus::fail;
  switch (relation) {
    case Relation::much_greater:
      if (ratio >= m.much_greater) return CheckStatus::pass;
      return ratio > 1.0 ? CheckStatus::warn : CheckStatus::fail;
    case Relation::much_less:
      if (ratio <= m.much_less) return CheckStatus::pass;
      return ratio < 1.0 ? CheckStatus::warn : CheckStatus::fail;
    case Relation::at_most:
      if (ratio <= 1.0) return CheckStatus::pass;
      return ratio < m.at_most_slack ? CheckStatus::warn : CheckStatus::fail;
    case Relation::fits:
      return ratio <= 1.0 ? CheckStatus::pass : CheckStatus::fail;
  }
  return CheckStatus::fail;
}

ValidityReport validity_report(const Scenario& s) {
  const double T = s.pulse_duration();
  const double v_in = s.v_in();
  const double v0 = s.v_release();
  const double delta_s = std::abs(s.light_shift());
  const double t_int = s.interaction_time();
  const double g2n = s.medium.coupling * s.medium.coupling;
  const double inf = std::numeric_limits<double>::infinity();

  ValidityReport report;
  const auto add = [&](std::string name, std::string expression, Relation relation,
                       double value, double bound) {
    ValidityCheck c;
    c.name = std::move(name);
    c.expression = std::move(expression);
    c.relation = relation;
    c.value = value;
    c.bound = bound;
    c.ratio = bound == inf ? 0.0 : value / bound;
    c.status = classify(relation, c.ratio, s.margins);
    report.checks.push_back(std::move(c));
  };

  add("bragg_condition", "Delta_s*T >> v_g0/v_g_in", Relation::much_greater, delta_s * T,
      v0 / v_in);
  add("distortion", "t_int/T << Delta_s*T*(v_g_in/v_g0)^2", Relation::much_less, t_int / T,
      delta_s * T * (v_in / v0) * (v_in / v0));
  add("density_length", "t_int <~ g^2N*L/(gamma_ab*c)*(v_g_in/v_g0)*T", Relation::at_most,
      t_int, g2n * s.medium.length / (s.medium.gamma_ab * speed_of_light) * (v_in / v0) * T);
  add("raman_lifetime", "t_int <~ 1/gamma_bc", Relation::at_most, t_int,
      s.medium.gamma_bc > 0.0 ? 1.0 / s.medium.gamma_bc : inf);
  add("transparency_window", "Delta_s << Omega_c0^2/gamma_ab", Relation::much_less, delta_s,
      s.omega_c_0 * s.omega_c_0 / s.medium.gamma_ab);
  add("pulse_fits_medium", "v_g_in*T <= L", Relation::fits, v_in * T, s.medium.length);
  return report;
}

ProtocolResult run_protocol(const Scenario& s) {
  s.validate();
  ProtocolResult result;
  result.report = validity_report(s);

  PolaritonState state =
      PolaritonState::gaussian(s.grid, s.pulse.center, s.pulse.rms_width, Direction::forward);
  const double norm0 = state.norm();
  auto& sum = result.summary;
  sum.initial_norm = norm0;

  const double bounds[] = {0.0, s.stages.t_release, s.stages.t_trap_end, s.stages.t_final};
  double tau_offset = 0.0;
  for (std::size_t stage = 0; stage < 3; ++stage) {
    const double span = bounds[stage + 1] - bounds[stage];
    const double n = std::ceil(span / s.dt * (1.0 - 1e-12));
    EvolveSettings settings;
    settings.t0 = bounds[stage];
    settings.t1 = bounds[stage + 1];
    settings.dt = span / std::max(1.0, n);
    settings.snapshot_stride = s.snapshot_stride;
    settings.record_steps = true;

    Trajectory traj;
    try {
      traj = evolve(std::move(state), s.schedule, s.medium, settings);
    } catch (const NumericalFailure& e) {
      throw NumericalFailure(stage_name(stage) + " stage: " + e.what());
    }
    for (auto& w : traj.warnings) result.warnings.push_back(stage_name(stage) + " stage: " + w);
    for (std::size_t i = stage == 0 ? 0 : 1; i < traj.snapshots.size(); ++i) {
      traj.snapshots[i].tau += tau_offset;
      result.snapshots.push_back(std::move(traj.snapshots[i]));
    }
    for (auto sample : traj.steps) {
      sample.tau += tau_offset;
      result.steps.push_back(sample);
    }
    tau_offset += traj.final_tau;
    sum.steps += traj.step_count;
    state = std::move(traj.final_state);
    if (stage == 0) sum.in_medium_at_release = in_medium(s, state);
    if (stage == 1) sum.in_medium_at_trap_end = in_medium(s, state);
  }

  sum.final_norm = state.norm();
  for (const auto& st : result.steps)
    sum.max_norm_drift =
        std::max(sum.max_norm_drift, std::abs(st.forward_norm + st.backward_norm - norm0) / norm0);
  sum.trapped_fraction = sum.in_medium_at_trap_end / norm0;
  sum.retained_fraction =
      sum.in_medium_at_release > 0.0 ? sum.in_medium_at_trap_end / sum.in_medium_at_release : 0.0;

  // Centroid excursion over the trap window, relative to the release point.
  std::optional<double> reference;
  for (const auto& snap : result.snapshots) {
    const double t = snap.state.time;
    if (t < s.stages.t_release * (1.0 - 1e-12) || t > s.stages.t_trap_end * (1.0 + 1e-12))
      continue;
    const double centroid = measure(snap.state, snap.theta).centroid;
    if (!reference) reference = centroid;
    sum.centroid_drift =
        std::max(sum.centroid_drift, std::abs(centroid - *reference) / s.medium.length);
  }

  // Forward fraction crossings of 1/2 once the release ramp has finished.
  const double theta0 = mixing_angle(s.omega_c_0, s.medium);
  const double chi = std::abs(s.light_shift()) * std::pow(std::tan(theta0), 2);
  sum.expected_period = chi > 0.0 ? std::numbers::pi / chi : std::numeric_limits<double>::infinity();
  std::vector<double> crossings;
  for (std::size_t i = 1; i < result.steps.size(); ++i) {
    const auto& a = result.steps[i - 1];
    const auto& b = result.steps[i];
    if (a.time < s.stages.t_release + s.ramp_time || b.time > s.stages.t_trap_end) continue;
    const double fa = a.forward_norm / (a.forward_norm + a.backward_norm) - 0.5;
    const double fb = b.forward_norm / (b.forward_norm + b.backward_norm) - 0.5;
    if (fa * fb < 0.0) crossings.push_back(a.tau + (b.tau - a.tau) * fa / (fa - fb));
  }
  sum.crossings = crossings.size();
  if (crossings.size() >= 3)
    sum.oscillation_period =
        2.0 * (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);

  constexpr int trace_points = 1001;
  result.trace.reserve(trace_points);
  for (int i = 0; i < trace_points; ++i) {
    const double t = s.stages.t_final * i / (trace_points - 1);
    result.trace.push_back({t, s.schedule.omega_c(t), s.schedule.omega_s(t)});
  }
  return result;
}

std::string format_summary(const ProtocolSummary& s) {
  std::ostringstream out;
  out.precision(17);
  out << "initial_norm = " << s.initial_norm << '\n'
      << "final_norm = " << s.final_norm << '\n'
      << "max_norm_drift = " << s.max_norm_drift << '\n'
      << "in_medium_at_release = " << s.in_medium_at_release << '\n'
      << "in_medium_at_trap_end = " << s.in_medium_at_trap_end << '\n'
      << "trapped_fraction = " << s.trapped_fraction << '\n'
      << "retained_fraction = " << s.retained_fraction << '\n'
      << "centroid_drift = " << s.centroid_drift << '\n'
      << "oscillation_period_s = ";
  if (s.oscillation_period)
    out << *s.oscillation_period;
  else
    out << "nan";
  out << '\n'
      << "expected_period_s = " << s.expected_period << '\n'
      << "crossings = " << s.crossings << '\n'
      << "steps = " << s.steps << '\n';
  return out.str();
}

}  // namespace eitgap
