#include "eitgap/medium.hpp"

#include <cmath>
#include <string>

#include "eitgap/errors.hpp"

namespace eitgap {

void MediumParams::validate() const {
  if (!(coupling > 0.0)) throw DomainError("medium: coupling must be > 0");
  if (!(length > 0.0)) throw DomainError("medium: length must be > 0");
  if (!(carrier_wavenumber > 0.0))
    throw DomainError("medium: carrier wavenumber must be > 0");
  if (!(gamma_bc >= 0.0)) throw DomainError("medium: gamma_bc must be >= 0");
  if (!(gamma_ab >= gamma_bc))
    throw DomainError("medium: gamma_ab must be >= gamma_bc");
}

double light_shift_amplitude(double omega_s, double delta) {
  if (delta == 0.0) throw DomainError("light shift: detuning must be nonzero");
  return omega_s * omega_s / delta;
}

double spatial_light_shift(double z, double t, const DriveSchedule& schedule,
                           const MediumParams& medium) {
  const double amplitude = light_shift_amplitude(schedule.omega_s(t), schedule.delta);
  const double c = std::cos(schedule.standing_wave_wavenumber(medium) * z);
  return 4.0 * amplitude * c * c;
}

double group_velocity(double omega_c, const MediumParams& medium) {
  return speed_of_light * polariton_mix(omega_c, medium).cos2;
}

double mixing_angle(double omega_c, const MediumParams& medium) {
  if (omega_c < 0.0) throw DomainError("mixing angle: omega_c must be >= 0");
  return std::atan2(medium.coupling, omega_c);
}

PolaritonMix polariton_mix(double omega_c, const MediumParams& medium) {
  // Written without tan(theta) so that omega_c == 0 stays regular.
  const double oc2 = omega_c * omega_c;
  const double g2 = medium.coupling * medium.coupling;
  const double total = oc2 + g2;
  return {oc2 / total, g2 / total};
}

PolaritonMix polariton_mix_from_angle(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * c, s * s};
}

double control_for_group_index(double group_index, const MediumParams& medium) {
  if (!(group_index > 1.0))
    throw DomainError("group index must exceed 1, got " + std::to_string(group_index));
  return medium.coupling / std::sqrt(group_index - 1.0);
}

std::complex<double> eit_resonance(double omega, double shift, double omega_c,
                                   const MediumParams& medium) {
  using namespace std::complex_literals;
  const std::complex<double> two_photon = (omega - shift) + 1i * medium.gamma_bc;
  const std::complex<double> one_photon = omega + 1i * medium.gamma_ab;
  if (omega_c == 0.0) {
    // Two-level limit; the two-photon factor cancels.
    return -1.0 / one_photon;
  }
  return two_photon / (omega_c * omega_c - two_photon * one_photon);
}

std::complex<double> eit_wavenumber_offset(double omega, double shift,
                                           double omega_c,
                                           const MediumParams& medium) {
  const double g2 = medium.coupling * medium.coupling;
  return (g2 / speed_of_light) * eit_resonance(omega, shift, omega_c, medium);
}

std::complex<double> eit_response(double omega, double shift, double omega_c,
                                  const MediumParams& medium) {
  const double vacuum = medium.carrier_wavenumber + omega / speed_of_light;
  return 2.0 * eit_wavenumber_offset(omega, shift, omega_c, medium) / vacuum;
}

std::complex<double> local_wavenumber(double omega, double shift, double omega_c,
                                      const MediumParams& medium) {
  return medium.carrier_wavenumber + omega / speed_of_light +
         eit_wavenumber_offset(omega, shift, omega_c, medium);
}

}  // namespace eitgap
