#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "eitgap/fft.hpp"
#include "eitgap/medium.hpp"
#include "eitgap/schedule.hpp"

namespace eitgap {

using ComplexField = std::vector<std::complex<double>>;

/// Uniform periodic grid; n_points is a power of two >= 64.
struct GridSpec {
  double z_min = 0.0;
  double z_max = 0.0;
  std::size_t n_points = 0;

  double extent() const { return z_max - z_min; }
  double dz() const { return extent() / static_cast<double>(n_points); }
  double z(std::size_t i) const { return z_min + dz() * static_cast<double>(i); }

  /// Angular wavenumbers in FFT order; the Nyquist bin is negative.
  std::vector<double> wavenumbers() const;

  void validate() const;

  bool operator==(const GridSpec&) const = default;
};

enum class Direction { forward, backward };

/// Forward/backward dark-state polariton envelopes. The excitation norm is
/// sum(|psi+|^2 + |psi-|^2) dz.
struct PolaritonState {
  GridSpec grid;
  ComplexField psi_plus;
  ComplexField psi_minus;
  double time = 0.0;

  static PolaritonState zeros(const GridSpec& grid, double time = 0.0);

  /// Unit-norm Gaussian whose |psi|^2 has the given RMS width.
  static PolaritonState gaussian(const GridSpec& grid, double center, double rms_width,
                                 Direction direction = Direction::forward,
                                 double time = 0.0);

  double norm() const;
};

/// Photonic and Raman components. sigma_bc_* is scaled by sqrt(N).
struct FieldView {
  ComplexField e_plus;
  ComplexField e_minus;
  ComplexField sigma_bc_plus;
  ComplexField sigma_bc_minus;
};

/// E = cos(theta) psi, sqrt(N) sigma_bc = -sin(theta) psi.
FieldView fields_from_polariton(const PolaritonState& state, double theta);

/// tau = integral of cos^2(theta(t')) dt' over [t0, t1], split at schedule
/// breakpoints and integrated adaptively.
double stretched_time(const DriveSchedule& schedule, const MediumParams& medium,
                      double t0, double t1);

struct StepCoefficients {
  double theta = 0.0;        // mixing angle
  double light_shift = 0.0;  // Delta_s, rad/s
  double delta_k = 0.0;      // rad/m
  double gamma_bc = 0.0;     // rad/s
};

/// Reusable split-step integrator for one grid. Each step is
///   half coupling, full advection (spectral), half coupling, damping,
/// where the coupling is the exact 2x2 rotation by Delta_s sin^2(theta) dt/2.
/// Caches the last advection phase table, so one instance must not be shared
/// between threads.
class PolaritonStepper {
 public:
  explicit PolaritonStepper(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  std::span<const double> wavenumbers() const { return k_; }
  const Fft& fft() const { return fft_; }

  /// Real-space state in, real-space state out.
  void advance(PolaritonState& state, double dt, const StepCoefficients& coeff) const;

  /// Same step on spectra; only valid for delta_k == 0, where the coupling
  /// is uniform and commutes with the transform.
  void advance_spectral(ComplexField& plus_k, ComplexField& minus_k, double dt,
                        const StepCoefficients& coeff) const;

 private:
  GridSpec grid_;
  Fft fft_;
  std::vector<double> k_;
  mutable double cached_distance_ = std::numeric_limits<double>::quiet_NaN();
  mutable ComplexField cached_phase_;

  const ComplexField& advection_phase(double distance) const;
};

/// One step of the coupled polariton equations. Throws NumericalFailure on
/// non-finite output.
PolaritonState step(PolaritonState state, double dt, const StepCoefficients& coeff);

/// Closed-form per-wavenumber propagator exp(-i H tau) for
/// H = [[k c, chi], [chi, -k c]].
Eigen::Matrix2cd two_mode_propagator(double k, double tau, double chi);

struct SpectrumPair {
  ComplexField plus;
  ComplexField minus;
};

/// Fourier-space solution with zero initial backward spectrum:
///   psi+(k,tau) = [cos(zeta tau) - i (kc/zeta) sin(zeta tau)] psi+(k,0)
///   psi-(k,tau) = -i (chi/zeta) sin(zeta tau) psi+(k,0)
SpectrumPair analytic_evolution(std::span<const std::complex<double>> psi_plus_k0,
                                std::span<const double> wavenumbers, double tau,
                                double chi);

/// General two-component version.
SpectrumPair analytic_evolution(std::span<const std::complex<double>> psi_plus_k0,
                                std::span<const std::complex<double>> psi_minus_k0,
                                std::span<const double> wavenumbers, double tau,
                                double chi);

/// Real-space convenience wrapper around analytic_evolution.
PolaritonState analytic_state(const PolaritonState& initial, double tau, double chi);

struct Diagnostics {
  double norm = 0.0;
  double forward_norm = 0.0;
  double backward_norm = 0.0;
  double centroid = 0.0;
  double rms_width = 0.0;
  std::vector<double> intensity;  // |E+|^2 + |E-|^2, wavelength averaged
};

Diagnostics measure(const PolaritonState& state, double theta);

/// Norm carried inside [z_lo, z_hi].
double norm_within(const PolaritonState& state, double z_lo, double z_hi);

struct EvolveSettings {
  double t0 = 0.0;
  double t1 = 0.0;
  double dt = 0.0;
  std::size_t snapshot_stride = 1;
  bool record_steps = false;
  /// Warn when |delta theta| per step exceeds this.
  double max_theta_step = 1e-2;
  /// Warn when the norm within two initial widths of the boundary exceeds
  /// this fraction of the total.
  double wrap_fraction = 1e-4;
};

struct Snapshot {
  PolaritonState state;
  double omega_c = 0.0;
  double omega_s = 0.0;
  double theta = 0.0;
  double light_shift = 0.0;
  double tau = 0.0;
};

struct StepSample {
  double time = 0.0;
  double tau = 0.0;
  double forward_norm = 0.0;
  double backward_norm = 0.0;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::vector<StepSample> steps;
  std::vector<std::string> warnings;
  PolaritonState final_state;
  double final_tau = 0.0;
  std::size_t step_count = 0;
  bool wrap_detected = false;
};

/// Repeated steps from settings.t0 to settings.t1 with coefficients sampled
/// at each step midpoint. Snapshots at t0, every `snapshot_stride` steps and
/// at t1. `dt` must divide the interval.
Trajectory evolve(PolaritonState initial, const DriveSchedule& schedule,
                  const MediumParams& medium, const EvolveSettings& settings);

}  // namespace eitgap
