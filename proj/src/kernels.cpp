#include "arrival/kernels.hpp"

#include <cmath>
#include <numbers>

#include "arrival/errors.hpp"

namespace arrival {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

cplx sinc(cplx z) {
  if (std::abs(z) < 1e-3) {
    const cplx z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

// int_{xl}^{xr} exp(i w x) dx
cplx exp_integral(cplx w, double xl, double xr) {
  const double half = 0.5 * (xr - xl), mid = 0.5 * (xr + xl);
  return 2.0 * half * std::exp(I * w * mid) * sinc(w * half);
}

std::size_t absorber_of(const PotentialProfile& profile) {
  const auto idx = profile.absorber_index();
  if (!idx) throw ConfigurationError("profile has no absorbing region");
  return *idx;
}

}  // namespace

cplx absorber_overlap(const PotentialProfile& profile, const ScatteringSolution& a, const ScatteringSolution& b) {
  const std::size_t j = absorber_of(profile);
  const Region& r = profile[j];
  const cplx qa = a.wavenumbers[j], qb = b.wavenumbers[j];
  const Amplitudes& aa = a.amplitudes[j];
  const Amplitudes& ab = b.amplitudes[j];
  // conj(phi_a) phi_b is a sum of four exponentials exp(i (s' q_b - s conj(q_a)) x).
  const cplx ca[2] = {std::conj(aa.plus), std::conj(aa.minus)};
  const cplx cb[2] = {ab.plus, ab.minus};
  const double sa[2] = {1.0, -1.0};
  cplx sum = 0.0;
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      sum += ca[p] * cb[q] * exp_integral(sa[q] * qb - sa[p] * std::conj(qa), r.x_left, r.x_right);
  return sum / (2.0 * kPi);
}

cplx f_kernel(const PotentialProfile& profile, const ScatteringSolution& a, const ScatteringSolution& b,
              const Units& units) {
  const double v_eps = -profile[absorber_of(profile)].v.imag();
  return 2.0 * v_eps / units.hbar * absorber_overlap(profile, a, b);
}

double b_inverse_sqrt(double k, double f_diag, const Units& units) {
  if (!(f_diag > 0.0)) throw NumericalError("degenerate normalization: f(k,k) must be positive");
  return std::sqrt(units.hbar * k / (2.0 * kPi * units.mass * f_diag));
}

cplx finite_eps_F(const PotentialProfile& profile, double k, double k2, const Units& units) {
  const ScatteringSolution a = solve(profile, k, BoundaryCondition::LeftIncidence, units);
  const ScatteringSolution b = solve(profile, k2, BoundaryCondition::LeftIncidence, units);
  const double gaa = absorber_overlap(profile, a, a).real();
  const double gbb = absorber_overlap(profile, b, b).real();
  if (!(gaa > 0.0) || !(gbb > 0.0)) throw NumericalError("degenerate normalization: f(k,k) must be positive");
  return absorber_overlap(profile, a, b) / std::sqrt(gaa * gbb);
}

cplx F_kernel(const KernelEvaluator& evaluator, double k, double k2) {
  if (!(k > 0.0) || !(k2 > 0.0)) throw DomainError("wavenumbers must be positive");
  const Units& u = evaluator.units;
  return std::visit(
      [&](const auto& r) -> cplx {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, FiniteEps>) {
          return finite_eps_F(r.profile, k, k2, u);
        } else if constexpr (std::is_same_v<R, FreeLimit>) {
          return 1.0;
        } else if constexpr (std::is_same_v<R, BarrierPhaseLimit>) {
          const TransmissionData a = transmission_amplitude(k, r.barrier, u);
          const TransmissionData b = transmission_amplitude(k2, r.barrier, u);
          if (!std::isfinite(a.log_abs_t) || !std::isfinite(b.log_abs_t))
            throw NumericalError("transmission amplitude vanishes");
          return std::exp(I * (b.phase - a.phase));
        } else if constexpr (std::is_same_v<R, InfiniteBarrier>) {
          return std::exp(I * (k - k2) * r.width);
        } else {
          const TransmissionData a = transmission_amplitude(k, r.barrier, u);
          const TransmissionData b = transmission_amplitude(k2, r.barrier, u);
          return std::conj(a.t_amp) * b.t_amp;
        }
      },
      evaluator.regime);
}

}  // namespace arrival
