#include "eitgap/bandstructure.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "eitgap/errors.hpp"
#include "eitgap/units.hpp"

namespace eitgap {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

// e^{ix} - 1 without cancellation for small x.
cd expm1_i(cd x) { return 2.0 * I * std::sin(0.5 * x) * std::exp(0.5 * I * x); }

// Picks the decaying branch (Im q >= 0); for a real pair the sign follows
// the detuning so that the offset is odd in omega.
cd choose_branch(cd q, double omega) {
  const double re = q.real();
  const double im = q.imag();
  const bool degenerate = std::abs(im) <= 1e-9 * std::abs(re);
  if (!degenerate) return im < 0.0 ? -q : q;
  if ((re < 0.0 && omega > 0.0) || (re > 0.0 && omega < 0.0)) return {-re, std::abs(im)};
  return {re, std::abs(im)};
}

}  // namespace

double PeriodCell::mean_shift() const {
  double sum = 0.0;
  for (double s : slab_shift) sum += s;
  return slab_shift.empty() ? 0.0 : sum / slab_shift.size();
}

PeriodCell PeriodCell::make(const StaticDrive& drive, const MediumParams& medium,
                            int slab_count) {
  if (slab_count < 8 || slab_count % 2 != 0)
    throw DomainError("period cell: slab count must be even and >= 8, got " +
                      std::to_string(slab_count));
  const double k_s = medium.carrier_wavenumber + drive.delta_k;
  if (!(k_s > 0.0)) throw DomainError("period cell: standing-wave wavenumber must be > 0");
  PeriodCell cell;
  cell.standing_wave_wavenumber = k_s;
  cell.period = std::numbers::pi / k_s;
  const double amplitude = drive.light_shift();
  const double width = cell.period / slab_count;
  cell.slab_shift.resize(slab_count);
  for (int j = 0; j < slab_count; ++j) {
    const double c = std::cos(k_s * (j + 0.5) * width);
    cell.slab_shift[j] = 4.0 * amplitude * c * c;
  }
  return cell;
}

Eigen::Matrix2cd PeriodTransfer::matrix() const {
  return -(Eigen::Matrix2cd::Identity() + deviation);
}

std::complex<double> PeriodTransfer::cos_bloch_phase() const {
  return -1.0 - 0.5 * deviation.trace();
}

std::complex<double> PeriodTransfer::bragg_phase() const {
  // cos(qa) = 1 + u  =>  qa = 2 asin(sqrt(-u/2)).
  const cd u = 0.5 * deviation.trace();
  return 2.0 * std::asin(std::sqrt(-0.5 * u));
}

PeriodTransfer period_matrix(double omega, const PeriodCell& cell,
                             const StaticDrive& drive, const MediumParams& medium) {
  const int m = cell.slab_count();
  if (m < 8) throw DomainError("period matrix: slab count must be >= 8");

  const double mean = cell.mean_shift();
  const double one_photon = omega + mean;

  std::vector<cd> offset(m);
  cd mean_offset = 0.0;
  for (int j = 0; j < m; ++j) {
    offset[j] = eit_wavenumber_offset(one_photon, cell.slab_shift[j], drive.omega_c, medium);
    mean_offset += offset[j];
  }
  mean_offset /= static_cast<double>(m);

  const cd k_mean = medium.carrier_wavenumber + omega / speed_of_light + mean_offset;
  const cd bragg_detuning = omega / speed_of_light + mean_offset - drive.delta_k;
  const double d = cell.slab_width();
  const double psi = std::numbers::pi / m;  // k_s d
  const cd phase_minus = std::exp(-I * psi);
  const cd phase_plus = std::exp(I * psi);

  // Interaction picture: each slab is R (I + Y_j) with R = diag(e^{i psi},
  // e^{-i psi}); the M copies of R multiply to -I.
  Eigen::Matrix2cd w = Eigen::Matrix2cd::Zero();
  for (int j = 0; j < m; ++j) {
    const cd contrast = offset[j] - mean_offset;
    const cd eps = contrast / k_mean;  // k_j / k_mean - 1
    const cd a_minus_one = eps * eps / (2.0 * (1.0 + eps));
    const cd b = eps * (2.0 + eps) / (2.0 * (1.0 + eps));
    const cd x = (bragg_detuning + contrast) * d;
    const cd s = std::sin(psi + x);

    Eigen::Matrix2cd y;
    y(0, 0) = expm1_i(x) + I * a_minus_one * s * phase_minus;
    y(1, 1) = expm1_i(-x) - I * a_minus_one * s * phase_plus;
    const cd rot = std::exp(-2.0 * I * psi * static_cast<double>(j));
    y(0, 1) = I * b * s * phase_minus * rot;
    y(1, 0) = -I * b * s * phase_plus * std::conj(rot);

    w = (y + w + y * w).eval();
  }

  PeriodTransfer out;
  out.deviation = w;
  out.mean_wavenumber = k_mean;
  out.mean_offset = mean_offset;
  out.period = cell.period;
  return out;
}

BandPoint bloch_k_analytic(double omega, double delta_s, double slowdown,
                           double period_a) {
  if (!(period_a > 0.0)) throw DomainError("analytic band: period must be > 0");
  if (!(slowdown > 0.0)) throw DomainError("analytic band: slowdown must be > 0");
  BandPoint p;
  p.omega = omega;
  const double gap2 = delta_s * delta_s - omega * omega;
  const double scale = slowdown / speed_of_light;
  if (gap2 > 0.0) {
    // cos(qa) = cosh(X), X real: qa = iX, and arccosh(cosh X) = X exactly.
    p.k_imag = scale * std::sqrt(gap2);
    p.in_gap = true;
    return p;
  }
  // X imaginary: cos(qa) = cos(Y), folded to the first zone.
  const double y = scale * period_a * std::sqrt(-gap2);
  const double folded = std::abs(std::remainder(y, two_pi));
  p.k_real = (omega < 0.0 ? -folded : folded) / period_a;
  return p;
}

BandPoint bloch_k_numeric(double omega, const PeriodCell& cell,
                          const StaticDrive& drive, const MediumParams& medium,
                          const BandOptions& options) {
  const PeriodTransfer t = period_matrix(omega, cell, drive, medium);
  const cd qa = t.bragg_phase();
  if (!std::isfinite(qa.real()) || !std::isfinite(qa.imag()))
    throw NumericalFailure("Bloch wavevector non-finite at omega=" + std::to_string(omega));
  const cd q = choose_branch(qa / cell.period, omega);

  BandPoint p;
  p.omega = omega;
  p.k_real = q.real();
  p.k_imag = q.imag();
  const double background = std::max(0.0, t.mean_wavenumber.imag());
  const double excess = p.k_imag - background;
  const double threshold = options.gap_threshold * cell.standing_wave_wavenumber;
  p.in_gap = excess > std::max(threshold, std::abs(p.k_real));
  return p;
}

BandEdges band_edges(const PeriodCell& cell, const StaticDrive& drive,
                     const MediumParams& medium, const BandOptions& options,
                     const EdgeSearch& search) {
  const double delta_s = std::abs(drive.light_shift());
  if (!(delta_s > 0.0)) throw DomainError("band edges: light shift must be nonzero");

  BandEdges edges;
  edges.analytic_lower = -delta_s;
  edges.analytic_upper = delta_s;

  // Bragg-matched frequency of the averaged medium (zero when delta_k == 0).
  const double slowdown = std::pow(medium.coupling / drive.omega_c, 2);
  const double center = drive.delta_k * speed_of_light / (1.0 + slowdown);

  const auto in_gap = [&](double w) {
    return bloch_k_numeric(w, cell, drive, medium, options).in_gap;
  };

  const PeriodTransfer t0 = period_matrix(center, cell, drive, medium);
  const BandPoint p0 = bloch_k_numeric(center, cell, drive, medium, options);
  const double background = std::max(0.0, t0.mean_wavenumber.imag());
  if (!p0.in_gap || p0.k_imag - background <= background) return edges;

  const auto find_edge = [&](double direction) -> std::optional<double> {
    const double step = search.scan_step * delta_s;
    double inside = center;
    for (double x = step; x <= search.scan_limit * delta_s + 0.5 * step; x += step) {
      const double w = center + direction * x;
      if (!in_gap(w)) {
        double a = inside;
        double b = w;
        while (std::abs(b - a) > search.tolerance * delta_s) {
          const double mid = 0.5 * (a + b);
          (in_gap(mid) ? a : b) = mid;
        }
        return 0.5 * (a + b);
      }
      inside = w;
    }
    return std::nullopt;
  };

  const auto lower = find_edge(-1.0);
  const auto upper = find_edge(+1.0);
  if (lower && upper) edges.numeric = std::make_pair(*lower, *upper);
  return edges;
}

}  // namespace eitgap
