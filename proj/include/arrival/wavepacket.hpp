#pragma once

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "arrival/quadrature.hpp"
#include "arrival/units.hpp"

namespace arrival {

using cplx = std::complex<double>;

/// Minimal-uncertainty Gaussian centred at x0 at t = 0 with velocity v0.
struct GaussianSpec {
  double x0 = -50.0;
  double dx = 10.0;
  double v0 = 1.0;

  void validate() const;
  double k0(const Units& units = {}) const { return units.mass * v0 / units.hbar; }
  double dk() const { return 0.5 / dx; }
};

/// psi~(k) = (2 pi dk^2)^{-1/4} exp(-(k-k0)^2/(4 dk^2)) exp(-i k x0).
cplx gaussian_amplitude(const GaussianSpec& spec, double k, const Units& units = {});

/// Free evolution of the same packet in position space (closed form).
cplx gaussian_position(const GaussianSpec& spec, double x, double t, const Units& units = {});

/// psi~ sampled on a quadrature grid.
struct MomentumAmplitude {
  std::vector<double> k;
  std::vector<double> weights;
  std::vector<cplx> values;

  std::size_t size() const { return k.size(); }
  double norm() const;  // sum w |psi~|^2
  bool positive_only() const { return !k.empty() && k.front() > 0.0; }
};

MomentumAmplitude sample(const QuadratureRule& rule, const std::function<cplx(double)>& f);

/// Default window [max(k0 - 8 dk, 1e-6), k0 + 8 dk] with n Gauss-Legendre nodes.
QuadratureRule gaussian_rule(const GaussianSpec& spec, const Units& units = {}, int n = 400);
MomentumAmplitude gaussian_packet(const GaussianSpec& spec, const Units& units = {}, int n = 400);

/// Probability of the Gaussian |psi~|^2 below k = lower.
double gaussian_mass_below(const GaussianSpec& spec, double lower, const Units& units = {});

/// Two mirrored panels [-hi, -lo] and [lo, hi] around the default window.
QuadratureRule mirrored_rule(const GaussianSpec& spec, const Units& units = {}, int n = 400);

/// psi(x) + sign * psi(-x) for the Gaussian, normalized on the mirrored grid.
MomentumAmplitude mirrored_pair(const GaussianSpec& spec, double sign, const Units& units = {},
                                int n = 400);

/// Reads "k Re [Im]" rows (whitespace or comma separated, '#' comments).
/// Weights are trapezoidal.
MomentumAmplitude load_tabulated(const std::string& path);
MomentumAmplitude parse_tabulated(const std::string& text);

/// (psi_s, psi_a) on a grid symmetric about k = 0.
std::pair<MomentumAmplitude, MomentumAmplitude> parity_decompose(const MomentumAmplitude& amp);

/// Half-line restriction: values psi~(sign * k) for the nodes with sign * k > 0,
/// reordered to ascending |k|.
MomentumAmplitude half_line(const MomentumAmplitude& amp, int sign);

/// <v^{-1}> = sum w |psi~|^2 m / (hbar k).
double inv_velocity_mean(const MomentumAmplitude& amp, const Units& units = {});

/// <x> at t = 0 from the phase slope between neighbouring nodes.
double position_mean(const MomentumAmplitude& amp);

/// psi(x, t) = (2 pi)^{-1/2} sum w psi~ exp(i k x - i hbar k^2 t / 2m).
cplx position_amplitude(const MomentumAmplitude& amp, double x, double t, const Units& units = {});

}  // namespace arrival
