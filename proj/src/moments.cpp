#include "arrival/moments.hpp"

#include <cmath>
#include <limits>

#include "arrival/errors.hpp"
#include "arrival/manifest.hpp"

namespace arrival {

namespace {

void check_position(const MomentumAmplitude& amp, double x0) {
  const double probe = position_mean(amp);
  if (std::abs(probe - x0) > 1e-6 * std::max(1.0, std::abs(x0)))
    throw NumericalError("supplied x0 does not match the phase slope of the amplitude");
}

double phase_slope(const TransmissionPhase& phase, double k, const Units& units) {
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, BarrierPhase>) return transmission_amplitude(k, p.barrier, units).phase_derivative;
        else if constexpr (std::is_same_v<P, OpaqueLimit>) return -p.width;
        else return 0.0;
      },
      phase);
}

}  // namespace

double mean_arrival(const MomentumAmplitude& amp, const TransmissionPhase& phase, double x0, const Units& units) {
  if (!amp.positive_only()) throw DomainError("mean arrival time needs an amplitude on k > 0");
  check_position(amp, x0);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const double p = amp.weights[i] * std::norm(amp.values[i]);
    const double k = amp.k[i];
    num += p * (std::abs(x0) + phase_slope(phase, k, units)) / k;
    den += p;
  }
  return units.mass / units.hbar * num / den;
}

double mean_arrival_transmitted(const MomentumAmplitude& amp, const BarrierSpec& barrier, double x0,
                                const Units& units) {
  if (!amp.positive_only()) throw DomainError("mean arrival time needs an amplitude on k > 0");
  check_position(amp, x0);
  const std::size_t n = amp.size();
  std::vector<double> logw(n), slope(n);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const TransmissionData t = transmission_amplitude(amp.k[i], barrier, units);
    const double a = std::abs(amp.values[i]);
    logw[i] = a > 0.0 ? std::log(amp.weights[i]) + 2.0 * (std::log(a) + t.log_abs_t)
                      : -std::numeric_limits<double>::infinity();
    slope[i] = t.phase_derivative;
    peak = std::max(peak, logw[i]);
  }
  if (!std::isfinite(peak)) throw NumericalError("transmitted amplitude underflows on the grid");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = std::exp(logw[i] - peak);
    num += p * (std::abs(x0) + slope[i]) / amp.k[i];
    den += p;
  }
  return units.mass / units.hbar * num / den;
}

double tunneling_time_tau(const MomentumAmplitude& amp, const BarrierSpec& barrier, double x0, double k0,
                          const Units& units) {
  const double classical = units.mass * (std::abs(x0) - barrier.width) / (units.hbar * k0);
  return mean_arrival(amp, BarrierPhase{barrier}, x0, units) - classical;
}

double tunneling_time_tau_T(const MomentumAmplitude& amp, const BarrierSpec& barrier, double x0, double k0,
                            const Units& units) {
  const double classical = units.mass * (std::abs(x0) - barrier.width) / (units.hbar * k0);
  return mean_arrival_transmitted(amp, barrier, x0, units) - classical;
}

double tunneling_time_tau_T(const GaussianSpec& spec, const BarrierSpec& barrier, const Units& units) {
  const MomentumAmplitude amp = sample(transmitted_rule(spec, barrier, units),
                                       [&](double k) { return gaussian_amplitude(spec, k, units); });
  return tunneling_time_tau_T(amp, barrier, spec.x0, spec.k0(units), units);
}

double hartman_time(const MomentumAmplitude& amp, double x0, double l, const Units& units) {
  return (std::abs(x0) - l) * inv_velocity_mean(amp, units);
}

double free_time(const MomentumAmplitude& amp, double x0, const Units& units) {
  return std::abs(x0) * inv_velocity_mean(amp, units);
}

std::string TimingReport::csv_header() { return "U,l,x0,k0,dx,mean_t,tau,tau_T,hartman_t,free_t"; }

std::string TimingReport::csv_row() const {
  return format_number(U) + ',' + format_number(l) + ',' + format_number(x0) + ',' + format_number(k0) + ',' + format_number(dx) + ',' + format_number(mean_t) + ',' +
         format_number(tau) + ',' + format_number(tau_T) + ',' + format_number(hartman_t) + ',' + format_number(free_t);
}

TimingReport timing_report(const GaussianSpec& spec, const BarrierSpec& barrier, const Units& units, int n) {
  const MomentumAmplitude amp = gaussian_packet(spec, units, n);
  TimingReport r{};
  r.U = barrier.height;
  r.l = barrier.width;
  r.x0 = spec.x0;
  r.k0 = spec.k0(units);
  r.dx = spec.dx;
  r.mean_t = mean_arrival(amp, BarrierPhase{barrier}, spec.x0, units);
  r.tau = r.mean_t - units.mass * (std::abs(spec.x0) - barrier.width) / (units.hbar * r.k0);
  r.tau_T = tunneling_time_tau_T(spec, barrier, units);
  r.hartman_t = hartman_time(amp, spec.x0, barrier.width, units);
  r.free_t = free_time(amp, spec.x0, units);
  return r;
}

}  // namespace arrival
