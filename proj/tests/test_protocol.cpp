#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "eitgap/config.hpp"
#include "eitgap/errors.hpp"
#include "eitgap/protocol.hpp"
#include "fixtures.hpp"

using namespace eitgap;
using fixtures::config_path;
using fixtures::rel;

namespace {

Scenario load(const std::string& name) { return build_scenario(load_config(config_path(name))); }

const StageTimes stages{1.0, 2.0, 3.0, 5.0, 6.0};

}  // namespace

TEST_CASE("staged schedule follows the stage times") {
  const DriveSchedule s = staged_schedule(stages, 4.0, 2.0, 7.0, 0.25, 1e3, 0.5);
  CHECK(s.delta == 1e3);
  CHECK(s.delta_k == 0.5);
  CHECK(s.omega_c(0.0) == 4.0);
  CHECK(s.omega_c(0.75) == 4.0);
  CHECK(s.omega_c(0.875) == doctest::Approx(2.0));
  CHECK(s.omega_c(1.0) == 0.0);
  CHECK(s.omega_c(2.9) == 0.0);
  CHECK(s.omega_c(3.125) == doctest::Approx(1.0));
  CHECK(s.omega_c(3.25) == 2.0);
  CHECK(s.omega_c(100.0) == 2.0);

  CHECK(s.omega_s(1.9) == 0.0);
  CHECK(s.omega_s(2.125) == doctest::Approx(3.5));
  CHECK(s.omega_s(2.25) == 7.0);
  CHECK(s.omega_s(4.9) == 7.0);
  CHECK(s.omega_s(5.125) == doctest::Approx(3.5));
  CHECK(s.omega_s(5.25) == 0.0);
  CHECK(s.light_shift(4.0) == doctest::Approx(49.0 / 1e3));

  const DriveSchedule off = staged_schedule(stages, 4.0, 2.0, 0.0, 0.25, 1e3, 0.0);
  CHECK(off.omega_s.is_constant());
  CHECK(off.omega_s(4.0) == 0.0);

  CHECK_THROWS_AS(staged_schedule(stages, 4.0, 2.0, 7.0, 0.0, 1e3, 0.0), DomainError);
  CHECK_THROWS_AS(staged_schedule(stages, 4.0, 2.0, 7.0, 1.5, 1e3, 0.0), DomainError);
}

TEST_CASE("classification of the validity relations") {
  const ValidityMargins m;
  CHECK(classify(Relation::much_greater, 10.0, m) == CheckStatus::pass);
  CHECK(classify(Relation::much_greater, 3.0, m) == CheckStatus::warn);
  CHECK(classify(Relation::much_greater, 1.0, m) == CheckStatus::fail);
  CHECK(classify(Relation::much_greater, 0.5, m) == CheckStatus::fail);

  CHECK(classify(Relation::much_less, 0.1, m) == CheckStatus::pass);
  CHECK(classify(Relation::much_less, 0.5, m) == CheckStatus::warn);
  CHECK(classify(Relation::much_less, 1.0, m) == CheckStatus::fail);

  CHECK(classify(Relation::at_most, 1.0, m) == CheckStatus::pass);
  CHECK(classify(Relation::at_most, 5.0, m) == CheckStatus::warn);
  CHECK(classify(Relation::at_most, 10.0, m) == CheckStatus::fail);

  CHECK(classify(Relation::fits, 1.0, m) == CheckStatus::pass);
  CHECK(classify(Relation::fits, 1.0 + 1e-9, m) == CheckStatus::fail);

  const ValidityMargins strict{100.0, 0.01, 2.0};
  CHECK(classify(Relation::much_greater, 50.0, strict) == CheckStatus::warn);
  CHECK(classify(Relation::much_less, 0.05, strict) == CheckStatus::warn);
  CHECK(classify(Relation::at_most, 2.0, strict) == CheckStatus::fail);
}

TEST_CASE("validity report on the bundled trap scenario") {
  const Scenario s = load("protocol_trap.json");
  const ValidityReport r = validity_report(s);
  CHECK(r.checks.size() == 6);
  CHECK(r.all_pass());
  CHECK_FALSE(r.any_fail());
  const ValidityCheck& bragg = r.find("bragg_condition");
  CHECK(rel(bragg.value, s.light_shift() * s.pulse_duration()) < 1e-12);
  CHECK(rel(bragg.ratio, bragg.value / bragg.bound) < 1e-15);
  CHECK(rel(s.pulse_duration(), s.pulse.rms_width / s.v_in()) < 1e-15);
  CHECK_THROWS_AS(r.find("nonexistent"), DomainError);
}

TEST_CASE("no Raman decay means no lifetime limit") {
  Scenario s = load("protocol_trap.json");
  s.medium.gamma_bc = 0.0;
  const ValidityCheck& c = validity_report(s).find("raman_lifetime");
  CHECK(std::isinf(c.bound));
  CHECK(c.ratio == 0.0);
  CHECK(c.status == CheckStatus::pass);
}

TEST_CASE("slow release boosts the Bragg ratio fifteenfold") {
  const Scenario s = load("check_slow_release.json");
  CHECK(rel(s.v_in() / s.v_release(), 15.0) < 1e-9);
  const ValidityReport r = validity_report(s);
  CHECK(r.all_pass());
  const double product = s.light_shift() * s.pulse_duration();
  CHECK(rel(r.find("bragg_condition").ratio, 15.0 * product) < 1e-9);
}

TEST_CASE("scenario validation rejects inconsistent stages and geometry") {
  const Scenario good = load("protocol_trap.json");
  CHECK_NOTHROW(good.validate());

  Scenario s = good;
  s.stages.t_release = s.stages.t_hold;
  CHECK_THROWS_AS(s.validate(), DomainError);

  s = good;
  s.grid.z_min = -1.5 * s.medium.length;
  s.grid.z_max = 1.5 * s.medium.length;
  CHECK_THROWS_AS(s.validate(), DomainError);

  s = good;
  s.pulse.center = s.medium_center() + 0.5 * s.medium.length - s.pulse.rms_width;
  CHECK_THROWS_AS(s.validate(), DomainError);

  // Standing wave already on while the pulse is still entering.
  s = good;
  s.schedule.omega_s = Ramp::constant(s.omega_s);
  CHECK_THROWS_AS(s.validate(), DomainError);

  // Control never switched off.
  s = good;
  s.schedule.omega_c = Ramp::constant(s.omega_c_in);
  CHECK_THROWS_AS(s.validate(), DomainError);

  // Standing wave rises only after the control has returned.
  s = good;
  const auto& st = s.stages;
  s.schedule.omega_s = Ramp({{st.t_release + 2 * s.ramp_time, st.t_release + 3 * s.ramp_time,
                              0.0, s.omega_s, RampShape::smoothstep}});
  CHECK_THROWS_AS(s.validate(), DomainError);

  s = good;
  s.dt = 0.0;
  CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("trap, weak gap and control runs") {
  const ProtocolResult trap = run_protocol(load("protocol_trap.json"));
  const ProtocolSummary& t = trap.summary;
  CHECK(t.trapped_fraction > 0.9);
  CHECK(t.centroid_drift < 0.2);
  REQUIRE(t.oscillation_period);
  CHECK(rel(*t.oscillation_period, t.expected_period) < 0.05);
  CHECK(t.crossings >= 3);
  CHECK(trap.report.all_pass());
  CHECK(trap.trace.size() == 1001);
  CHECK(trap.snapshots.front().state.time == 0.0);

  const ProtocolResult control = run_protocol(load("protocol_control.json"));
  CHECK(control.summary.retained_fraction < 0.05);
  CHECK(control.summary.trapped_fraction < 0.05);

  const Scenario weak_scenario = load("protocol_weak_gap.json");
  CHECK(validity_report(weak_scenario).find("bragg_condition").status == CheckStatus::fail);
  const ProtocolResult weak = run_protocol(weak_scenario);
  CHECK(weak.summary.trapped_fraction < 0.5);

  // Same inputs, bit-identical outputs.
  const ProtocolResult again = run_protocol(weak_scenario);
  CHECK(again.summary.trapped_fraction == weak.summary.trapped_fraction);
  CHECK(again.snapshots.back().state.psi_plus == weak.snapshots.back().state.psi_plus);
  CHECK(format_summary(again.summary) == format_summary(weak.summary));
}

TEST_CASE("lossless trap conserves the norm") {
  const ProtocolResult r = run_protocol(load("protocol_trap_lossless.json"));
  CHECK(r.summary.max_norm_drift < 1e-6);
  CHECK(r.summary.trapped_fraction > 0.99);
}

TEST_CASE("summary formatting names every field") {
  ProtocolSummary s;
  s.trapped_fraction = 0.5;
  const std::string text = format_summary(s);
  CHECK(text.find("trapped_fraction = 0.5") != std::string::npos);
  CHECK(text.find("oscillation_period_s = nan") != std::string::npos);
}
