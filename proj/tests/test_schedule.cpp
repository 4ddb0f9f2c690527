#include <doctest.h>

#include <cmath>
#include <limits>

#include "eitgap/errors.hpp"
#include "eitgap/schedule.hpp"

using namespace eitgap;

TEST_CASE("smoothstep segment") {
  const RampSegment s{1.0, 3.0, 2.0, 6.0, RampShape::smoothstep};
  CHECK(s.value_at(1.0) == 2.0);
  CHECK(s.value_at(3.0) == 6.0);
  CHECK(s.value_at(2.0) == doctest::Approx(4.0));
  CHECK(s.value_at(1.5) == doctest::Approx(2.0 + 4.0 * (3 * 0.0625 - 2 * 0.015625)));
  // Flat at both ends.
  const double h = 1e-6;
  CHECK(std::abs(s.value_at(1.0 + h) - s.value_at(1.0)) < 1e-10);
  CHECK(std::abs(s.value_at(3.0) - s.value_at(3.0 - h)) < 1e-10);
  // Clamped outside.
  CHECK(s.value_at(0.0) == 2.0);
  CHECK(s.value_at(9.0) == 6.0);

  const RampSegment lin{0.0, 2.0, 0.0, 4.0, RampShape::linear};
  CHECK(lin.value_at(0.5) == doctest::Approx(1.0));
}

TEST_CASE("ramp shape names") {
  for (auto s : {RampShape::hold, RampShape::linear, RampShape::smoothstep})
    CHECK(ramp_shape_from_string(to_string(s)) == s);
  CHECK_THROWS_AS(ramp_shape_from_string("cubic"), DomainError);
}

TEST_CASE("ramp construction enforces contiguity and continuity") {
  CHECK_NOTHROW(Ramp({{0, 1, 5, 5, RampShape::hold}, {1, 2, 5, 0, RampShape::smoothstep}}));
  CHECK_THROWS_AS(Ramp({{0, 1, 5, 5, RampShape::hold}, {1.5, 2, 5, 0, RampShape::linear}}),
                  DomainError);
  CHECK_THROWS_AS(Ramp({{0, 1, 5, 5, RampShape::hold}, {1, 2, 4, 0, RampShape::linear}}),
                  DomainError);
  CHECK_THROWS_AS(Ramp({{0, 1, 5, 4, RampShape::hold}}), DomainError);
  CHECK_THROWS_AS(Ramp({{1, 1, 0, 1, RampShape::linear}}), DomainError);
  CHECK_THROWS_AS(Ramp({{0, 1, 0, -1, RampShape::linear}}), DomainError);
  CHECK_THROWS_AS(Ramp::constant(-1.0), DomainError);
}

TEST_CASE("ramp evaluation, breakpoints and threshold search") {
  const Ramp r({{0, 1, 0, 0, RampShape::hold},
                {1, 2, 0, 10, RampShape::smoothstep},
                {2, 5, 10, 10, RampShape::hold}});
  CHECK(r(-1.0) == 0.0);
  CHECK(r(0.5) == 0.0);
  CHECK(r(1.5) == doctest::Approx(5.0));
  CHECK(r(3.0) == 10.0);
  CHECK(r(7.0) == 10.0);
  CHECK(r.breakpoints() == std::vector<double>{0, 1, 2, 5});
  CHECK(r.first_time_above(0.0, 0.0) == doctest::Approx(1.0));
  CHECK(r.first_time_above(0.0, 5.0) == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(r.first_time_above(3.0, 5.0) == 3.0);
  CHECK(std::isinf(r.first_time_above(0.0, 20.0)));

  const Ramp c = Ramp::constant(3.0);
  CHECK(c.is_constant());
  CHECK(c(123.0) == 3.0);
  CHECK(c.breakpoints().empty());
  CHECK(c.first_time_above(2.0, 1.0) == 2.0);
  CHECK(std::isinf(c.first_time_above(2.0, 3.0)));
}

TEST_CASE("drive schedule") {
  DriveSchedule d;
  d.omega_c = Ramp({{0, 1, 4, 0, RampShape::linear}});
  d.omega_s = Ramp({{0.5, 2, 0, 2, RampShape::linear}});
  d.delta = 8.0;
  d.delta_k = 0.0;
  CHECK_NOTHROW(d.validate());
  CHECK(d.light_shift(2.0) == doctest::Approx(0.5));
  const StaticDrive s = d.at(0.5);
  CHECK(s.omega_c == doctest::Approx(2.0));
  CHECK(s.omega_s == 0.0);
  CHECK(s.light_shift() == 0.0);
  CHECK(d.breakpoints() == std::vector<double>{0, 0.5, 1, 2});
  d.delta = 0.0;
  CHECK_THROWS_AS(d.validate(), DomainError);
  d.delta = 1.0;
  d.delta_k = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(d.validate(), DomainError);
}
