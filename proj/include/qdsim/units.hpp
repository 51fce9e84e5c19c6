#pragma once

namespace qdsim::units {

/// Reduced Planck constant in meV ps.
inline constexpr double kHbarMeVps = 0.6582119569;
/// Elementary charge in coulombs (J per eV).
inline constexpr double kElectronVolt = 1.602176634e-19;

/// Time in units of hbar/Gamma to picoseconds.
[[nodiscard]] constexpr double natural_time_to_ps(double t, double gamma_si_ueV) {
  return t * kHbarMeVps / (gamma_si_ueV * 1e-3);
}

/// Energy in units of Gamma to meV.
[[nodiscard]] constexpr double gamma_units_to_meV(double e, double gamma_si_ueV) {
  return e * gamma_si_ueV * 1e-3;
}

[[nodiscard]] constexpr double joule_to_ev(double j) { return j / kElectronVolt; }
[[nodiscard]] constexpr double ev_to_joule(double ev) { return ev * kElectronVolt; }

}  // namespace qdsim::units
