#pragma once

#include <string>

#include "arrival/distributions.hpp"

namespace arrival {

/// <t> = (m/hbar) sum w |psi~|^2 (|x0| + Phi_T'(k)) / k, normalized by sum w |psi~|^2.
/// x0 must match the phase slope of amp (checked).
double mean_arrival(const MomentumAmplitude& amp, const TransmissionPhase& phase, double x0,
                    const Units& units = {});

/// Same average over the transmitted state |psi~ T|^2 (log-domain weights).
double mean_arrival_transmitted(const MomentumAmplitude& amp, const BarrierSpec& barrier, double x0,
                                const Units& units = {});

/// tau = <t> - m (|x0| - l) / (hbar k0).
double tunneling_time_tau(const MomentumAmplitude& amp, const BarrierSpec& barrier, double x0, double k0,
                          const Units& units = {});
/// tau_T on the supplied grid.
double tunneling_time_tau_T(const MomentumAmplitude& amp, const BarrierSpec& barrier, double x0, double k0,
                            const Units& units = {});
/// tau_T for a Gaussian on its transmitted window.
double tunneling_time_tau_T(const GaussianSpec& spec, const BarrierSpec& barrier, const Units& units = {});

double hartman_time(const MomentumAmplitude& amp, double x0, double l, const Units& units = {});
double free_time(const MomentumAmplitude& amp, double x0, const Units& units = {});

struct TimingReport {
  double mean_t;
  double tau;
  double tau_T;
  double hartman_t;
  double free_t;
  double U;
  double l;
  double x0;
  double k0;
  double dx;

  static std::string csv_header();
  std::string csv_row() const;
};

TimingReport timing_report(const GaussianSpec& spec, const BarrierSpec& barrier, const Units& units = {},
                           int n = 400);

}  // namespace arrival
