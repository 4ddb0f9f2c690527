#include "eitgap/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "eitgap/errors.hpp"
#include "eitgap/units.hpp"

namespace eitgap {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

double sum_norm(const ComplexField& f) {
  double s = 0.0;
  for (const auto& x : f) s += std::norm(x);
  return s;
}

// sin(x)/x with the removable singularity filled in.
double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

void rotate_uniform(ComplexField& plus, ComplexField& minus, double angle) {
  const double c = std::cos(angle);
  const cd s = -I * std::sin(angle);
  for (std::size_t i = 0; i < plus.size(); ++i) {
    const cd p = plus[i];
    const cd m = minus[i];
    plus[i] = c * p + s * m;
    minus[i] = s * p + c * m;
  }
}

void rotate_phased(ComplexField& plus, ComplexField& minus, double angle,
                   const GridSpec& grid, double delta_k) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  for (std::size_t i = 0; i < plus.size(); ++i) {
    const cd phase = std::exp(I * (2.0 * delta_k * grid.z(i)));
    const cd p = plus[i];
    const cd m = minus[i];
    plus[i] = c * p - I * s * phase * m;
    minus[i] = -I * s * std::conj(phase) * p + c * m;
  }
}

void advect(ComplexField& plus_k, ComplexField& minus_k, const ComplexField& phase) {
  for (std::size_t i = 0; i < phase.size(); ++i) {
    plus_k[i] *= phase[i];
    minus_k[i] *= std::conj(phase[i]);
  }
}

void scale(ComplexField& f, double factor) {
  for (auto& x : f) x *= factor;
}

void check_finite(double value, std::size_t step_index) {
  if (!std::isfinite(value))
    throw NumericalFailure("polariton state became non-finite at step " +
                           std::to_string(step_index));
}

}  // namespace

std::vector<double> GridSpec::wavenumbers() const {
  std::vector<double> k(n_points);
  const double base = two_pi / extent();
  const auto n = static_cast<long long>(n_points);
  for (long long m = 0; m < n; ++m) k[m] = base * static_cast<double>(m < n / 2 ? m : m - n);
  return k;
}

void GridSpec::validate() const {
  if (!(z_max > z_min)) throw DomainError("grid: z_max must exceed z_min");
  if (n_points < 64 || !is_power_of_two(n_points))
    throw DomainError("grid: point count must be a power of two >= 64, got " +
                      std::to_string(n_points));
}

PolaritonState PolaritonState::zeros(const GridSpec& grid, double time) {
  grid.validate();
  PolaritonState s;
  s.grid = grid;
  s.psi_plus.assign(grid.n_points, cd{});
  s.psi_minus.assign(grid.n_points, cd{});
  s.time = time;
  return s;
}

PolaritonState PolaritonState::gaussian(const GridSpec& grid, double center,
                                        double rms_width, Direction direction,
                                        double time) {
  if (!(rms_width > 0.0)) throw DomainError("gaussian pulse: width must be > 0");
  PolaritonState s = zeros(grid, time);
  auto& target = direction == Direction::forward ? s.psi_plus : s.psi_minus;
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double x = (grid.z(i) - center) / rms_width;
    target[i] = std::exp(-0.25 * x * x);
  }
  const double n = s.norm();
  if (!(n > 0.0)) throw DomainError("gaussian pulse: lies outside the grid");
  scale(target, 1.0 / std::sqrt(n));
  return s;
}

double PolaritonState::norm() const {
  return (sum_norm(psi_plus) + sum_norm(psi_minus)) * grid.dz();
}

FieldView fields_from_polariton(const PolaritonState& state, double theta) {
  if (theta < 0.0 || theta > 0.5 * std::numbers::pi + 1e-15)
    throw DomainError("fields: mixing angle outside [0, pi/2]");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  FieldView v;
  v.e_plus = state.psi_plus;
  v.e_minus = state.psi_minus;
  v.sigma_bc_plus = state.psi_plus;
  v.sigma_bc_minus = state.psi_minus;
  scale(v.e_plus, c);
  scale(v.e_minus, c);
  scale(v.sigma_bc_plus, -s);
  scale(v.sigma_bc_minus, -s);
  return v;
}

double stretched_time(const DriveSchedule& schedule, const MediumParams& medium,
                      double t0, double t1) {
  if (t1 < t0) throw DomainError("stretched time: t1 must be >= t0");
  if (t1 == t0) return 0.0;
  std::vector<double> cuts{t0};
  for (double b : schedule.breakpoints())
    if (b > t0 && b < t1) cuts.push_back(b);
  cuts.push_back(t1);

  const auto cos2 = [&](double t) { return polariton_mix(schedule.omega_c(t), medium).cos2; };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        cos2, cuts[i], cuts[i + 1], 15, 1e-13);
  }
  return total;
}

PolaritonStepper::PolaritonStepper(const GridSpec& grid)
    : grid_(grid), fft_((grid.validate(), grid.n_points)), k_(grid.wavenumbers()) {}

const ComplexField& PolaritonStepper::advection_phase(double distance) const {
  if (distance != cached_distance_) {
    cached_phase_.resize(k_.size());
    for (std::size_t i = 0; i < k_.size(); ++i) cached_phase_[i] = std::exp(-I * (k_[i] * distance));
    cached_distance_ = distance;
  }
  return cached_phase_;
}

void PolaritonStepper::advance_spectral(ComplexField& plus_k, ComplexField& minus_k,
                                        double dt, const StepCoefficients& coeff) const {
  const PolaritonMix mix = polariton_mix_from_angle(coeff.theta);
  // chi * dtau = Delta_s tan^2(theta) cos^2(theta) dt, regular at theta = pi/2.
  const double half_angle = 0.5 * coeff.light_shift * mix.sin2 * dt;
  rotate_uniform(plus_k, minus_k, half_angle);
  advect(plus_k, minus_k, advection_phase(speed_of_light * mix.cos2 * dt));
  rotate_uniform(plus_k, minus_k, half_angle);
  if (coeff.gamma_bc > 0.0) {
    const double damp = std::exp(-coeff.gamma_bc * mix.sin2 * dt);
    scale(plus_k, damp);
    scale(minus_k, damp);
  }
}

void PolaritonStepper::advance(PolaritonState& state, double dt,
                               const StepCoefficients& coeff) const {
  if (!(dt > 0.0)) throw DomainError("step: dt must be > 0");
  if (state.psi_plus.size() != grid_.n_points || state.psi_minus.size() != grid_.n_points)
    throw DomainError("step: state does not match the stepper grid");

  if (coeff.delta_k == 0.0) {
    fft_.forward(state.psi_plus);
    fft_.forward(state.psi_minus);
    advance_spectral(state.psi_plus, state.psi_minus, dt, coeff);
    fft_.inverse(state.psi_plus);
    fft_.inverse(state.psi_minus);
  } else {
    const PolaritonMix mix = polariton_mix_from_angle(coeff.theta);
    const double half_angle = 0.5 * coeff.light_shift * mix.sin2 * dt;
    rotate_phased(state.psi_plus, state.psi_minus, half_angle, grid_, coeff.delta_k);
    fft_.forward(state.psi_plus);
    fft_.forward(state.psi_minus);
    advect(state.psi_plus, state.psi_minus, advection_phase(speed_of_light * mix.cos2 * dt));
    fft_.inverse(state.psi_plus);
    fft_.inverse(state.psi_minus);
    rotate_phased(state.psi_plus, state.psi_minus, half_angle, grid_, coeff.delta_k);
    if (coeff.gamma_bc > 0.0) {
      const double damp = std::exp(-coeff.gamma_bc * mix.sin2 * dt);
      scale(state.psi_plus, damp);
      scale(state.psi_minus, damp);
    }
  }
  state.time += dt;
}

PolaritonState step(PolaritonState state, double dt, const StepCoefficients& coeff) {
  const PolaritonStepper stepper(state.grid);
  stepper.advance(state, dt, coeff);
  check_finite(state.norm(), 0);
  return state;
}

Eigen::Matrix2cd two_mode_propagator(double k, double tau, double chi) {
  const double kc = k * speed_of_light;
  const double zeta = std::hypot(kc, chi);
  const double c = std::cos(zeta * tau);
  const double s_over = tau * sinc(zeta * tau);  // sin(zeta tau) / zeta
  Eigen::Matrix2cd u;
  u(0, 0) = c - I * kc * s_over;
  u(0, 1) = -I * chi * s_over;
  u(1, 0) = -I * chi * s_over;
  u(1, 1) = c + I * kc * s_over;
  return u;
}

SpectrumPair analytic_evolution(std::span<const cd> psi_plus_k0,
                                std::span<const double> wavenumbers, double tau,
                                double chi) {
  const ComplexField zeros(psi_plus_k0.size());
  return analytic_evolution(psi_plus_k0, zeros, wavenumbers, tau, chi);
}

SpectrumPair analytic_evolution(std::span<const cd> psi_plus_k0,
                                std::span<const cd> psi_minus_k0,
                                std::span<const double> wavenumbers, double tau,
                                double chi) {
  if (psi_plus_k0.size() != wavenumbers.size() || psi_minus_k0.size() != wavenumbers.size())
    throw DomainError("analytic evolution: spectrum size mismatch");
  SpectrumPair out;
  out.plus.resize(wavenumbers.size());
  out.minus.resize(wavenumbers.size());
  for (std::size_t i = 0; i < wavenumbers.size(); ++i) {
    const Eigen::Matrix2cd u = two_mode_propagator(wavenumbers[i], tau, chi);
    out.plus[i] = u(0, 0) * psi_plus_k0[i] + u(0, 1) * psi_minus_k0[i];
    out.minus[i] = u(1, 0) * psi_plus_k0[i] + u(1, 1) * psi_minus_k0[i];
  }
  return out;
}

PolaritonState analytic_state(const PolaritonState& initial, double tau, double chi) {
  const Fft fft(initial.grid.n_points);
  ComplexField plus = initial.psi_plus;
  ComplexField minus = initial.psi_minus;
  fft.forward(plus);
  fft.forward(minus);
  SpectrumPair out = analytic_evolution(plus, minus, initial.grid.wavenumbers(), tau, chi);
  fft.inverse(out.plus);
  fft.inverse(out.minus);
  PolaritonState s = initial;
  s.psi_plus = std::move(out.plus);
  s.psi_minus = std::move(out.minus);
  return s;
}

Diagnostics measure(const PolaritonState& state, double theta) {
  const double dz = state.grid.dz();
  const double cos2 = std::pow(std::cos(theta), 2);
  Diagnostics d;
  d.forward_norm = sum_norm(state.psi_plus) * dz;
  d.backward_norm = sum_norm(state.psi_minus) * dz;
  d.norm = d.forward_norm + d.backward_norm;
  d.intensity.resize(state.grid.n_points);
  double first = 0.0;
  for (std::size_t i = 0; i < state.grid.n_points; ++i) {
    const double density = std::norm(state.psi_plus[i]) + std::norm(state.psi_minus[i]);
    d.intensity[i] = cos2 * density;
    first += state.grid.z(i) * density * dz;
  }
  if (d.norm > 0.0) {
    d.centroid = first / d.norm;
    double second = 0.0;
    for (std::size_t i = 0; i < state.grid.n_points; ++i) {
      const double density = std::norm(state.psi_plus[i]) + std::norm(state.psi_minus[i]);
      const double x = state.grid.z(i) - d.centroid;
      second += x * x * density * dz;
    }
    d.rms_width = std::sqrt(second / d.norm);
  }
  return d;
}

double norm_within(const PolaritonState& state, double z_lo, double z_hi) {
  double s = 0.0;
  for (std::size_t i = 0; i < state.grid.n_points; ++i) {
    const double z = state.grid.z(i);
    if (z >= z_lo && z <= z_hi) s += std::norm(state.psi_plus[i]) + std::norm(state.psi_minus[i]);
  }
  return s * state.grid.dz();
}

Trajectory evolve(PolaritonState initial, const DriveSchedule& schedule,
                  const MediumParams& medium, const EvolveSettings& settings) {
  const double span = settings.t1 - settings.t0;
  if (!(span > 0.0)) throw DomainError("evolve: t1 must exceed t0");
  if (!(settings.dt > 0.0)) throw DomainError("evolve: dt must be > 0");
  if (settings.snapshot_stride == 0) throw DomainError("evolve: snapshot stride must be >= 1");
  const double ratio = span / settings.dt;
  const auto n_steps = static_cast<std::size_t>(std::llround(ratio));
  if (n_steps == 0 || std::abs(ratio - static_cast<double>(n_steps)) > 1e-6 * ratio)
    throw DomainError("evolve: dt must divide the time interval");
  const double dt = span / static_cast<double>(n_steps);

  const PolaritonStepper stepper(initial.grid);
  const GridSpec& grid = initial.grid;
  const bool spectral = schedule.delta_k == 0.0;
  const double dz = grid.dz();

  initial.time = settings.t0;
  const Diagnostics start = measure(initial, 0.0);
  const double edge = 2.0 * start.rms_width;

  Trajectory traj;
  double tau = 0.0;

  const auto take_snapshot = [&](const PolaritonState& s, double t) {
    Snapshot snap;
    snap.state = s;
    snap.omega_c = schedule.omega_c(t);
    snap.omega_s = schedule.omega_s(t);
    snap.theta = mixing_angle(snap.omega_c, medium);
    snap.light_shift = schedule.light_shift(t);
    snap.tau = tau;
    if (!traj.wrap_detected && edge > 0.0) {
      const double total = s.norm();
      const double inner = norm_within(s, grid.z_min + edge, grid.z_max - edge);
      if (total > 0.0 && total - inner > settings.wrap_fraction * total) {
        traj.wrap_detected = true;
        traj.warnings.push_back("periodic wrap: norm near the domain boundary at t=" +
                                std::to_string(t));
      }
    }
    traj.snapshots.push_back(std::move(snap));
  };

  take_snapshot(initial, settings.t0);

  PolaritonState state = std::move(initial);
  if (spectral) {
    stepper.fft().forward(state.psi_plus);
    stepper.fft().forward(state.psi_minus);
  }
  const auto to_real = [&](const PolaritonState& s) {
    PolaritonState out = s;
    if (spectral) {
      stepper.fft().inverse(out.psi_plus);
      stepper.fft().inverse(out.psi_minus);
    }
    return out;
  };
  // Parseval for the unnormalized forward transform.
  const double norm_scale = spectral ? dz / static_cast<double>(grid.n_points) : dz;

  double previous_theta = mixing_angle(schedule.omega_c(settings.t0 + 0.5 * dt), medium);
  bool adiabatic_warned = false;

  for (std::size_t n = 0; n < n_steps; ++n) {
    const double t_mid = settings.t0 + (static_cast<double>(n) + 0.5) * dt;
    StepCoefficients coeff;
    coeff.theta = mixing_angle(schedule.omega_c(t_mid), medium);
    coeff.light_shift = schedule.light_shift(t_mid);
    coeff.delta_k = schedule.delta_k;
    coeff.gamma_bc = medium.gamma_bc;

    if (!adiabatic_warned && std::abs(coeff.theta - previous_theta) > settings.max_theta_step) {
      adiabatic_warned = true;
      traj.warnings.push_back("mixing angle changes by more than " +
                              std::to_string(settings.max_theta_step) +
                              " rad per step near t=" + std::to_string(t_mid));
    }
    previous_theta = coeff.theta;

    if (spectral) {
      stepper.advance_spectral(state.psi_plus, state.psi_minus, dt, coeff);
      state.time += dt;
    } else {
      stepper.advance(state, dt, coeff);
    }
    state.time = settings.t0 + static_cast<double>(n + 1) * dt;
    tau += polariton_mix_from_angle(coeff.theta).cos2 * dt;

    const double forward = sum_norm(state.psi_plus) * norm_scale;
    const double backward = sum_norm(state.psi_minus) * norm_scale;
    check_finite(forward + backward, n);
    if (settings.record_steps) traj.steps.push_back({state.time, tau, forward, backward});

    if ((n + 1) % settings.snapshot_stride == 0 || n + 1 == n_steps)
      take_snapshot(to_real(state), state.time);
  }

  traj.final_state = to_real(state);
  traj.final_tau = tau;
  traj.step_count = n_steps;
  return traj;
}

}  // namespace eitgap
