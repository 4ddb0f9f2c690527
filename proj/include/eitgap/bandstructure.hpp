#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "eitgap/medium.hpp"
#include "eitgap/schedule.hpp"

namespace eitgap {

/// Bloch wavevector at one frequency. `k_real` is K - k_s folded into
/// (-pi/a, pi/a]; `k_imag` is the attenuation constant on the decaying branch.
struct BandPoint {
  double omega = 0.0;
  double k_real = 0.0;
  double k_imag = 0.0;
  bool in_gap = false;
};

/// One period a = pi/k_s of the standing-wave grating, cut into `slab_count`
/// slabs that each carry the light shift sampled at their midpoint.
struct PeriodCell {
  double period = 0.0;
  double standing_wave_wavenumber = 0.0;
  std::vector<double> slab_shift;

  int slab_count() const { return static_cast<int>(slab_shift.size()); }
  double slab_width() const { return period / slab_shift.size(); }
  double mean_shift() const;

  /// Samples 4 Delta_s cos^2(k_s z) at slab midpoints. `slab_count` must be
  /// even and >= 8.
  static PeriodCell make(const StaticDrive& drive, const MediumParams& medium,
                         int slab_count = 64);
};

/// Transfer matrix of one period in the amplitude basis of the
/// period-averaged medium. The Bragg phase k_s a = pi is factored out exactly,
/// T = -(I + deviation), which keeps cos(Ka) + 1 free of cancellation.
struct PeriodTransfer {
  Eigen::Matrix2cd deviation = Eigen::Matrix2cd::Zero();
  std::complex<double> mean_wavenumber;  // reference medium, full k
  std::complex<double> mean_offset;      // reference medium minus vacuum k
  double period = 0.0;

  Eigen::Matrix2cd matrix() const;
  std::complex<double> cos_bloch_phase() const;

  /// q a with q = K - k_s, principal branch.
  std::complex<double> bragg_phase() const;
};

/// Frequency conventions for the periodic medium: `omega` is the signal
/// detuning from the spatially averaged, light-shifted two-photon resonance.
/// The atomic one-photon detuning is omega + <shift>.
PeriodTransfer period_matrix(double omega, const PeriodCell& cell,
                             const StaticDrive& drive, const MediumParams& medium);

struct BandOptions {
  /// Gap threshold on excess attenuation, as a fraction of k_s.
  double gap_threshold = 1e-9;
};

/// Closed-form band structure of the modulated EIT medium:
///   cos(qa) = cosh(slowdown * a * sqrt(Delta_s^2 - omega^2) / c),
/// with q = K - k_s. In-gap exactly on |omega| < |Delta_s|.
BandPoint bloch_k_analytic(double omega, double delta_s, double slowdown,
                           double period_a);

BandPoint bloch_k_numeric(double omega, const PeriodCell& cell,
                          const StaticDrive& drive, const MediumParams& medium,
                          const BandOptions& options = {});

struct BandEdges {
  double analytic_lower = 0.0;
  double analytic_upper = 0.0;
  std::optional<std::pair<double, double>> numeric;  // empty: no gap resolved
};

struct EdgeSearch {
  double scan_limit = 10.0;  // in units of |Delta_s|
  double scan_step = 0.05;   // in units of |Delta_s|
  double tolerance = 1e-6;   // in units of |Delta_s|
};

BandEdges band_edges(const PeriodCell& cell, const StaticDrive& drive,
                     const MediumParams& medium, const BandOptions& options = {},
                     const EdgeSearch& search = {});

}  // namespace eitgap
