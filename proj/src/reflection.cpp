#include "eitgap/reflection.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>
#include <thread>

#include "eitgap/errors.hpp"
#include "eitgap/units.hpp"

namespace eitgap {

namespace {

using cd = std::complex<double>;

bool finite(cd z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

ScatterMatrix star(const ScatterMatrix& a, const ScatterMatrix& b) {
  const cd denom = 1.0 - a.r_back * b.r;
  ScatterMatrix out;
  out.t = b.t * a.t / denom;
  out.r = a.r + a.t_back * b.r * a.t / denom;
  out.t_back = a.t_back * b.t_back / denom;
  out.r_back = b.r_back + b.t * a.r_back * b.t_back / denom;
  return out;
}

ScatterMatrix repeat(const ScatterMatrix& cell, std::uint64_t count) {
  ScatterMatrix result = ScatterMatrix::identity();
  ScatterMatrix power = cell;
  while (count > 0) {
    // The stack is uniform, so composition order does not matter.
    if (count & 1u) result = star(result, power);
    count >>= 1u;
    if (count > 0) power = star(power, power);
  }
  return result;
}

ScatterMatrix scatter_from_period(const PeriodTransfer& period) {
  // T = -(I + W); a_R = T11 a_L + T12 b_L, b_R = T21 a_L + T22 b_L.
  const auto& w = period.deviation;
  const cd t22 = -(1.0 + w(1, 1));
  const cd det = (1.0 + w(0, 0)) * (1.0 + w(1, 1)) - w(0, 1) * w(1, 0);
  ScatterMatrix s;
  s.r = w(1, 0) / t22;
  s.t = det / t22;
  s.t_back = 1.0 / t22;
  s.r_back = -w(0, 1) / t22;
  return s;
}

ScatterMatrix interface_matrix(cd k_left, cd k_right, cd k_left_minus_right) {
  const cd sum = k_left + k_right;
  ScatterMatrix s;
  s.r = k_left_minus_right / sum;
  s.t = 2.0 * k_left / sum;
  s.r_back = -k_left_minus_right / sum;
  s.t_back = 2.0 * k_right / sum;
  return s;
}

SampleGeometry SampleGeometry::for_cell(const PeriodCell& cell, const MediumParams& medium) {
  SampleGeometry g;
  g.period = cell.period;
  const double n = std::floor(medium.length / cell.period);
  g.periods = n > 0.0 ? static_cast<std::uint64_t>(n) : 0;
  g.dropped_length = medium.length - n * cell.period;
  return g;
}

SpectrumPoint sample_scatter(double omega, const PeriodCell& cell,
                             const StaticDrive& drive, const MediumParams& medium) {
  return sample_scatter(omega, cell, drive, medium,
                        SampleGeometry::for_cell(cell, medium).periods);
}

SpectrumPoint sample_scatter(double omega, const PeriodCell& cell,
                             const StaticDrive& drive, const MediumParams& medium,
                             std::uint64_t periods) {
  if (periods < 1)
    throw DomainError("sample scatter: medium shorter than one period");

  const PeriodTransfer period = period_matrix(omega, cell, drive, medium);
  const ScatterMatrix stack = repeat(scatter_from_period(period), periods);

  const cd k_vacuum = medium.carrier_wavenumber + omega / speed_of_light;
  const ScatterMatrix enter =
      interface_matrix(k_vacuum, period.mean_wavenumber, -period.mean_offset);
  const ScatterMatrix leave =
      interface_matrix(period.mean_wavenumber, k_vacuum, period.mean_offset);
  const ScatterMatrix total = star(star(enter, stack), leave);

  if (!finite(total.r) || !finite(total.t))
    throw NumericalFailure("sample scatter: non-finite amplitude at omega=" +
                           std::to_string(omega));

  SpectrumPoint p;
  p.omega = omega;
  p.r = total.r;
  p.t = total.t;
  p.reflectivity = std::norm(total.r);
  p.transmissivity = std::norm(total.t);
  p.absorption = 1.0 - p.reflectivity - p.transmissivity;
  return p;
}

std::vector<SpectrumPoint> reflection_spectrum(std::span<const double> omega_grid,
                                               const PeriodCell& cell,
                                               const StaticDrive& drive,
                                               const MediumParams& medium) {
  std::vector<SpectrumPoint> out(omega_grid.size());
  if (omega_grid.empty()) return out;
  const std::uint64_t periods = SampleGeometry::for_cell(cell, medium).periods;

  // Independent per frequency; each worker fills a disjoint slice.
  const std::size_t workers = std::clamp<std::size_t>(
      std::thread::hardware_concurrency(), 1, std::max<std::size_t>(1, omega_grid.size() / 64));
  const std::size_t chunk = (omega_grid.size() + workers - 1) / workers;
  std::vector<std::future<void>> jobs;
  for (std::size_t begin = 0; begin < omega_grid.size(); begin += chunk) {
    const std::size_t end = std::min(omega_grid.size(), begin + chunk);
    jobs.push_back(std::async(std::launch::async, [&, begin, end] {
      for (std::size_t i = begin; i < end; ++i)
        out[i] = sample_scatter(omega_grid[i], cell, drive, medium, periods);
    }));
  }
  for (auto& job : jobs) job.get();
  return out;
}

ReflectionPeak find_peak(std::span<const SpectrumPoint> spectrum) {
  ReflectionPeak peak;
  if (spectrum.empty()) return peak;
  const auto top = std::max_element(
      spectrum.begin(), spectrum.end(),
      [](const SpectrumPoint& a, const SpectrumPoint& b) { return a.reflectivity < b.reflectivity; });
  const auto i_top = static_cast<std::size_t>(top - spectrum.begin());
  peak.omega = top->omega;
  peak.reflectivity = top->reflectivity;
  const double half = 0.5 * peak.reflectivity;
  const auto crossing = [&](std::size_t inside, std::size_t outside) {
    const auto& a = spectrum[inside];
    const auto& b = spectrum[outside];
    return a.omega + (b.omega - a.omega) * (a.reflectivity - half) / (a.reflectivity - b.reflectivity);
  };
  for (std::size_t i = i_top; i > 0; --i)
    if (spectrum[i - 1].reflectivity < half) {
      peak.lower = crossing(i, i - 1);
      break;
    }
  for (std::size_t i = i_top; i + 1 < spectrum.size(); ++i)
    if (spectrum[i + 1].reflectivity < half) {
      peak.upper = crossing(i, i + 1);
      break;
    }
  if (peak.lower && peak.upper) peak.width = *peak.upper - *peak.lower;
  return peak;
}

}  // namespace eitgap
