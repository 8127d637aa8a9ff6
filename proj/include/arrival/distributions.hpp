#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "arrival/kernels.hpp"
#include "arrival/potential.hpp"
#include "arrival/scattering.hpp"
#include "arrival/wavepacket.hpp"

namespace arrival {

enum class DistributionVariant {
  Kijowski,
  OnFree,
  OnGeneral,
  OnBarrier,
  KijowskiTransmittedNormalized,
  TildeOnBarrier,
  FiniteEps,
};

const char* variant_name(DistributionVariant v);

struct TimeDistribution {
  std::vector<double> t;
  std::vector<double> density;
  DistributionVariant variant = DistributionVariant::Kijowski;
  double total = 0.0;  // trapezoid integral over t

  /// int t Pi dt / int Pi dt on the grid.
  double mean() const;
};

/// Phase factor attached to psi~ in the operator-normalized barrier distribution.
struct FreeMotion {};
struct BarrierPhase {
  BarrierSpec barrier;
};
/// U -> infinity: T/|T| replaced by e^{-ikl}.
struct OpaqueLimit {
  double width = 10.0;
};
using TransmissionPhase = std::variant<FreeMotion, BarrierPhase, OpaqueLimit>;

using Times = std::vector<double>;

/// (hbar/2 pi m) |sum w c sqrt(k) exp(-i hbar k^2 t / 2m)|^2 at each t.
std::vector<double> kijowski_form(const std::vector<double>& k, const std::vector<double>& w,
                                  const std::vector<cplx>& c, const Times& ts, const Units& units = {});

std::vector<double> kijowski(const MomentumAmplitude& amp, const Times& ts, const Units& units = {});
std::vector<double> pi_on_free(const MomentumAmplitude& amp, const Times& ts, const Units& units = {});
/// Sum of the two half-line terms psi~(+k) and psi~(-k).
std::vector<double> pi_on_general(const MomentumAmplitude& amp, const Times& ts, const Units& units = {});
std::vector<double> pi_on_barrier(const MomentumAmplitude& amp, const TransmissionPhase& phase, const Times& ts,
                                  const Units& units = {});
/// Kijowski for T psi~ / ||T psi~||.
std::vector<double> pi_kn(const MomentumAmplitude& amp, const BarrierSpec& barrier, const Times& ts,
                          const Units& units = {});
/// Kijowski form for T psi~, integrating to the transmission probability.
std::vector<double> pi_tilde(const MomentumAmplitude& amp, const BarrierSpec& barrier, const Times& ts,
                             const Units& units = {});

/// log of sum w |psi~ T|^2 (log-sum-exp over nodes).
double log_transmission_probability(const MomentumAmplitude& amp, const BarrierSpec& barrier,
                                    const Units& units = {});
double transmission_probability(const MomentumAmplitude& amp, const BarrierSpec& barrier, const Units& units = {});

/// Absorption-rate distribution from the double k sum with f_eps, or the
/// operator-normalized one (F sqrt(k k') hbar / 2 pi m) when `normalized`.
std::vector<double> pi_finite_eps(const MomentumAmplitude& amp, const PotentialProfile& profile, const Times& ts,
                                  bool normalized, const Units& units = {});

/// 1200 points over |x0|/v0 +- 12 sigma_t, sigma_t including dispersion.
Times default_time_grid(const GaussianSpec& spec, const Units& units = {}, int n = 1200);
Times uniform_times(double t_min, double t_max, int n);

/// Evaluates `density` on `ts`, extending the grid (same spacing) on either
/// side until the estimated tail mass is below `tail_tol`.
TimeDistribution make_distribution(DistributionVariant variant, Times ts,
                                   const std::function<std::vector<double>(const Times&)>& density,
                                   double tail_tol = 1e-9);

/// Window where |psi~ T|^2 is within e^{-50} of its peak, split into
/// Gauss-Legendre panels that are bisected until the transmitted weight and
/// its phase-time moment converge (narrow resonances get short panels).
QuadratureRule transmitted_rule(const GaussianSpec& spec, const BarrierSpec& barrier, const Units& units = {},
                                int nodes_per_panel = 20);

}  // namespace arrival
