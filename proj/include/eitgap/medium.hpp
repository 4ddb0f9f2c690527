#pragma once

#include <complex>

#include "eitgap/schedule.hpp"
#include "eitgap/units.hpp"

namespace eitgap {

/// Static constants of the atomic ensemble. All rates are angular (rad/s).
struct MediumParams {
  double coupling = 0.0;            // collective coupling g*sqrt(N)
  double gamma_ab = 0.0;            // optical coherence decay
  double gamma_bc = 0.0;            // Raman coherence decay
  double length = 0.0;              // m
  double carrier_wavenumber = 0.0;  // k0, rad/m

  double carrier_frequency() const { return carrier_wavenumber * speed_of_light; }

  void validate() const;

  bool operator==(const MediumParams&) const = default;
};

/// Photon and matter weights of the dark-state polariton.
struct PolaritonMix {
  double cos2 = 1.0;  // v_g / c
  double sin2 = 0.0;
};

/// Delta_s = Omega_s^2 / Delta. Throws DomainError for Delta == 0.
double light_shift_amplitude(double omega_s, double delta);

/// 4 Omega_s(t)^2 cos^2(k_s z) / Delta.
double spatial_light_shift(double z, double t, const DriveSchedule& schedule,
                           const MediumParams& medium);

/// c / (1 + coupling^2 / omega_c^2); zero for omega_c == 0.
double group_velocity(double omega_c, const MediumParams& medium);

/// theta = atan2(coupling, omega_c), in [0, pi/2].
double mixing_angle(double omega_c, const MediumParams& medium);

PolaritonMix polariton_mix(double omega_c, const MediumParams& medium);
PolaritonMix polariton_mix_from_angle(double theta);

/// Control Rabi frequency that yields the group index c / v_g.
double control_for_group_index(double group_index, const MediumParams& medium);

/// Lambda-system resonance factor
///   (w2 + i gamma_bc) / (omega_c^2 - (w2 + i gamma_bc)(omega + i gamma_ab)),
/// w2 = omega - shift. Units s/rad; Im >= 0 for a passive medium.
std::complex<double> eit_resonance(double omega, double shift, double omega_c,
                                   const MediumParams& medium);

/// Wavenumber added by the atoms, (coupling^2 / c) * eit_resonance.
std::complex<double> eit_wavenumber_offset(double omega, double shift,
                                           double omega_c,
                                           const MediumParams& medium);

/// Dimensionless susceptibility chi with n = 1 + chi/2, so that the local
/// wavenumber is (k0 + omega/c) + eit_wavenumber_offset.
std::complex<double> eit_response(double omega, double shift, double omega_c,
                                  const MediumParams& medium);

/// Full local wavenumber k0 + omega/c + eit_wavenumber_offset.
std::complex<double> local_wavenumber(double omega, double shift, double omega_c,
                                      const MediumParams& medium);

}  // namespace eitgap
