#include "eitgap/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "eitgap/errors.hpp"
#include "eitgap/medium.hpp"

namespace eitgap {

namespace {

bool nearly_equal(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) <= 1e-12 * scale;
}

}  // namespace

std::string_view to_string(RampShape shape) {
  switch (shape) {
    case RampShape::hold: return "hold";
    case RampShape::linear: return "linear";
    case RampShape::smoothstep: return "smoothstep";
  }
  return "smoothstep";
}

RampShape ramp_shape_from_string(std::string_view name) {
  if (name == "hold") return RampShape::hold;
  if (name == "linear") return RampShape::linear;
  if (name == "smoothstep") return RampShape::smoothstep;
  throw DomainError("unknown ramp shape '" + std::string(name) + "'");
}

double RampSegment::value_at(double t) const {
  if (shape == RampShape::hold) return v_start;
  double s = (t - t_start) / (t_end - t_start);
  s = std::clamp(s, 0.0, 1.0);
  if (shape == RampShape::smoothstep) s = s * s * (3.0 - 2.0 * s);
  return v_start + (v_end - v_start) * s;
}

Ramp::Ramp(std::vector<RampSegment> segments) : segments_(std::move(segments)) {
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& seg = segments_[i];
    const std::string where = "ramp segment " + std::to_string(i);
    if (!(seg.t_start < seg.t_end)) throw DomainError(where + ": t_start must be < t_end");
    if (!(seg.v_start >= 0.0 && seg.v_end >= 0.0))
      throw DomainError(where + ": Rabi frequencies must be >= 0");
    if (seg.shape == RampShape::hold && seg.v_start != seg.v_end)
      throw DomainError(where + ": hold requires equal start and end values");
    if (i > 0) {
      const auto& prev = segments_[i - 1];
      if (!nearly_equal(prev.t_end, seg.t_start))
        throw DomainError(where + ": segments must be contiguous");
      if (!nearly_equal(prev.v_end, seg.v_start))
        throw DomainError(where + ": ramp must be continuous at segment boundaries");
    }
  }
  if (!segments_.empty()) constant_ = segments_.front().v_start;
}

Ramp Ramp::constant(double value) {
  if (!(value >= 0.0)) throw DomainError("constant ramp: value must be >= 0");
  Ramp r;
  r.constant_ = value;
  return r;
}

double Ramp::operator()(double t) const {
  if (segments_.empty()) return constant_;
  if (t <= segments_.front().t_start) return segments_.front().v_start;
  if (t >= segments_.back().t_end) return segments_.back().v_end;
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double x, const RampSegment& s) { return x < s.t_end; });
  if (it == segments_.end()) return segments_.back().v_end;
  return it->value_at(t);
}

std::vector<double> Ramp::breakpoints() const {
  std::vector<double> out;
  for (const auto& s : segments_) {
    out.push_back(s.t_start);
    out.push_back(s.t_end);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double Ramp::first_time_above(double after, double threshold) const {
  constexpr double never = std::numeric_limits<double>::infinity();
  if (segments_.empty()) return constant_ > threshold ? after : never;
  if ((*this)(after) > threshold) return after;
  for (const auto& seg : segments_) {
    if (seg.t_end <= after) continue;
    const double lo = std::max(seg.t_start, after);
    if (std::max(seg.v_start, seg.v_end) <= threshold) continue;
    // Segments are monotone, so bisection finds the crossing.
    double a = lo;
    double b = seg.t_end;
    if (seg.value_at(a) > threshold) return a;
    for (int i = 0; i < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++i) {
      const double m = 0.5 * (a + b);
      (seg.value_at(m) > threshold ? b : a) = m;
    }
    return b;
  }
  return segments_.back().v_end > threshold ? std::max(after, segments_.back().t_end)
                                            : never;
}

double StaticDrive::light_shift() const { return light_shift_amplitude(omega_s, delta); }

void DriveSchedule::validate() const {
  if (delta == 0.0) throw DomainError("drive: detuning must be nonzero");
  if (!std::isfinite(delta) || !std::isfinite(delta_k))
    throw DomainError("drive: detuning and delta_k must be finite");
}

double DriveSchedule::standing_wave_wavenumber(const MediumParams& medium) const {
  return medium.carrier_wavenumber + delta_k;
}

double DriveSchedule::light_shift(double t) const {
  return light_shift_amplitude(omega_s(t), delta);
}

StaticDrive DriveSchedule::at(double t) const {
  return {omega_c(t), omega_s(t), delta, delta_k};
}

std::vector<double> DriveSchedule::breakpoints() const {
  auto a = omega_c.breakpoints();
  auto b = omega_s.breakpoints();
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace eitgap
