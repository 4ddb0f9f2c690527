#pragma once

#include <cmath>
#include <filesystem>
#include <string>

#include "eitgap/medium.hpp"
#include "eitgap/schedule.hpp"
#include "eitgap/units.hpp"

namespace fixtures {

using namespace eitgap;

/// Ensemble with g sqrt(N) = 2 pi 400 MHz, 4 cm, 780 nm carrier.
inline MediumParams rb_medium(double gamma_ab_hz = 10e6, double gamma_bc_hz = 1e3) {
  MediumParams m;
  m.coupling = two_pi * 400e6;
  m.gamma_ab = two_pi * gamma_ab_hz;
  m.gamma_bc = two_pi * gamma_bc_hz;
  m.length = 0.04;
  m.carrier_wavenumber = two_pi / 780e-9;
  return m;
}

/// c/v_g = 1e3 and a 2 pi 400 kHz light shift from a 2 pi 1 GHz detuned
/// standing wave.
inline StaticDrive rb_drive(const MediumParams& m, double omega_s_hz = 20e6) {
  StaticDrive d;
  d.omega_c = m.coupling / std::sqrt(999.0);
  d.omega_s = two_pi * omega_s_hz;
  d.delta = two_pi * 1e9;
  d.delta_k = 0.0;
  return d;
}

inline std::filesystem::path config_path(const std::string& name) {
  return std::filesystem::path(EITGAP_CONFIG_DIR) / name;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace fixtures
