#pragma once

namespace arrival {

/// Mass and reduced Planck constant. Atomic units (m = hbar = 1) by default.
struct Units {
  double mass = 1.0;
  double hbar = 1.0;

  /// 2m/hbar^2, the factor converting an energy into a squared wavenumber.
  double energy_to_k2() const { return 2.0 * mass / (hbar * hbar); }
  /// hbar/(2m): the phase e^{-i hbar k^2 t / 2m} advances by this times k^2 t.
  double dispersion() const { return hbar / (2.0 * mass); }
  double velocity(double k) const { return hbar * k / mass; }
};

}  // namespace arrival
