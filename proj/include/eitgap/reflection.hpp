#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "eitgap/bandstructure.hpp"
#include "eitgap/medium.hpp"
#include "eitgap/schedule.hpp"

namespace eitgap {

struct SpectrumPoint {
  double omega = 0.0;
  std::complex<double> r;
  std::complex<double> t;
  double reflectivity = 0.0;
  double transmissivity = 0.0;
  double absorption = 0.0;
};

/// Single-mode scattering matrix. `r`, `t` are for incidence from the left,
/// `r_back`, `t_back` for incidence from the right.
struct ScatterMatrix {
  std::complex<double> r{0.0, 0.0};
  std::complex<double> t{1.0, 0.0};
  std::complex<double> r_back{0.0, 0.0};
  std::complex<double> t_back{1.0, 0.0};

  static ScatterMatrix identity() { return {}; }
};

/// Redheffer star product: `first` on the left, `second` on the right.
ScatterMatrix star(const ScatterMatrix& first, const ScatterMatrix& second);

/// `count` identical copies composed by binary doubling.
ScatterMatrix repeat(const ScatterMatrix& cell, std::uint64_t count);

ScatterMatrix scatter_from_period(const PeriodTransfer& period);

/// Planar interface between media with wavenumbers k_left and k_right. The
/// difference is passed separately to keep index contrasts of 1e-6 exact.
ScatterMatrix interface_matrix(std::complex<double> k_left,
                               std::complex<double> k_right,
                               std::complex<double> k_left_minus_right);

/// Sample length snapped to whole periods.
struct SampleGeometry {
  std::uint64_t periods = 0;
  double period = 0.0;
  double dropped_length = 0.0;

  static SampleGeometry for_cell(const PeriodCell& cell, const MediumParams& medium);
};

/// Unit wave incident from vacuum on the left of N_p = floor(L/a) periods.
SpectrumPoint sample_scatter(double omega, const PeriodCell& cell,
                             const StaticDrive& drive, const MediumParams& medium);

/// Same, with an explicit period count.
SpectrumPoint sample_scatter(double omega, const PeriodCell& cell,
                             const StaticDrive& drive, const MediumParams& medium,
                             std::uint64_t periods);

/// Per-point sample_scatter, grid order preserved.
std::vector<SpectrumPoint> reflection_spectrum(std::span<const double> omega_grid,
                                               const PeriodCell& cell,
                                               const StaticDrive& drive,
                                               const MediumParams& medium);

/// Highest reflectivity on a spectrum and the half-maximum crossings on
/// either side of it, linearly interpolated. A side that never drops below
/// half maximum leaves `width` empty.
struct ReflectionPeak {
  double omega = 0.0;
  double reflectivity = 0.0;
  std::optional<double> lower;
  std::optional<double> upper;
  std::optional<double> width;
};

ReflectionPeak find_peak(std::span<const SpectrumPoint> spectrum);

}  // namespace eitgap
