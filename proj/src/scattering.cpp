#include "arrival/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "arrival/errors.hpp"

namespace arrival {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

double sign_of(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::LeftIncidence: return 0.0;
    case BoundaryCondition::Antisymmetric: return -1.0;
    case BoundaryCondition::Symmetric: return 1.0;
  }
  return 0.0;
}

cplx apply(const Matrix2c& m, const Amplitudes& a) {
  return m.m11 * a.plus + m.m12 * a.minus;
}
cplx apply_lower(const Matrix2c& m, const Amplitudes& a) {
  return m.m21 * a.plus + m.m22 * a.minus;
}

// Continuous arg(C + i h S) for the barrier functions.
double barrier_arg(const BarrierFunctions& f, double k, double width) {
  const double h = (f.kappa2 + k * k) / (2.0 * k);
  if (f.kappa2 > 0.0 && f.log_scale == 0.0 && f.kappa2 * width * width >= 1.0) {
    const double kappa = std::sqrt(f.kappa2);
    const double n = std::round(kappa * width / kPi);
    return n * kPi + std::atan((h / kappa) * std::tan(kappa * width - n * kPi));
  }
  // Series region and below the barrier: C > 0.
  return std::atan2(h * f.s, f.c);
}

double barrier_arg_derivative(const BarrierFunctions& f, double k) {
  const double h = (f.kappa2 + k * k) / (2.0 * k);
  const double dh = (3.0 * k * k - f.kappa2) / (2.0 * k * k);
  const double hs = h * f.s;
  const double dhs = dh * f.s + h * f.ds_dk;
  return (dhs * f.c - hs * f.dc_dk) / (f.c * f.c + hs * hs);
}

}  // namespace

ScatteringSolution solve(const PotentialProfile& profile, double k, BoundaryCondition bc, const Units& units) {
  if (!(k > 0.0)) throw DomainError("wavenumber k must be positive");
  const std::size_t n = profile.last_index();

  ScatteringSolution sol;
  sol.k = k;
  sol.bc = bc;
  sol.wavenumbers.reserve(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) sol.wavenumbers.push_back(region_wavenumber(k, profile[i].v, units));

  if (n == 0) {
    sol.amplitudes = {{1.0, sign_of(bc)}};
    return sol;
  }

  // Suffix products T(i, N), accumulated right to left.
  std::vector<ScaledMatrix2c> suffix(n + 1);
  for (std::size_t i = n; i-- > 0;) {
    ScaledMatrix2c step = step_transfer_scaled(profile, k, i, units);
    suffix[i] = i + 1 == n ? step : step * suffix[i + 1];
  }

  const Matrix2c& t0 = suffix[0].mantissa;
  const double s0 = suffix[0].log_scale;
  if (t0.m11 == cplx(0.0)) throw NumericalError("T11 vanishes: resonant zero of the transfer matrix");

  // A_N = exp(-s0) * u + v, written so that opaque profiles never overflow.
  const double sigma = sign_of(bc);
  const Amplitudes u{1.0 / t0.m11, 0.0};
  const Amplitudes v{-sigma * t0.m12 / t0.m11, sigma};

  sol.amplitudes.resize(n + 1);
  sol.amplitudes[n] = {std::exp(-s0) * u.plus + v.plus, v.minus};
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix2c& m = suffix[i].mantissa;
    const double si = suffix[i].log_scale;
    const double from_u = std::exp(si - s0);
    Amplitudes a{from_u * apply(m, u), from_u * apply_lower(m, u)};
    if (sigma != 0.0) {
      const double from_v = std::exp(si);
      a.plus += from_v * apply(m, v);
      a.minus += from_v * apply_lower(m, v);
    }
    sol.amplitudes[i] = a;
  }
  // A_0^+ = 1 by construction; pin it to remove rounding.
  sol.amplitudes[0].plus = 1.0;
  return sol;
}

double matching_residual(const PotentialProfile& profile, const ScatteringSolution& solution) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
    const double x = profile.boundary(i);
    const Matrix2c left = matching_matrix(solution.wavenumbers[i], x);
    const Matrix2c right = matching_matrix(solution.wavenumbers[i + 1], x);
    const Amplitudes& al = solution.amplitudes[i];
    const Amplitudes& ar = solution.amplitudes[i + 1];
    const cplx phi_l = apply(left, al), phi_r = apply(right, ar);
    const cplx dphi_l = apply_lower(left, al), dphi_r = apply_lower(right, ar);
    const double scale_phi = std::max({std::abs(phi_l), std::abs(phi_r), 1e-300});
    const double scale_dphi = std::max({std::abs(dphi_l), std::abs(dphi_r),
                                        std::abs(solution.wavenumbers[i]) * scale_phi, 1e-300});
    worst = std::max({worst, std::abs(phi_l - phi_r) / scale_phi, std::abs(dphi_l - dphi_r) / scale_dphi});
  }
  return worst;
}

cplx evaluate(const PotentialProfile& profile, const ScatteringSolution& solution, double x) {
  std::size_t i = 0;
  while (i + 1 < profile.size() && x > profile.boundary(i)) ++i;
  const cplx ki = solution.wavenumbers[i];
  const Amplitudes& a = solution.amplitudes[i];
  return (a.plus * std::exp(I * ki * x) + a.minus * std::exp(-I * ki * x)) / std::sqrt(2.0 * kPi);
}

TransmissionData transmission_amplitude(double k, const BarrierSpec& barrier, const Units& units, double a) {
  if (!(k > 0.0)) throw DomainError("wavenumber k must be positive");
  const double l = barrier.width;
  TransmissionData out{};
  out.k = k;
  if (barrier.height == 0.0) {
    out.t_amp = 1.0;
    out.r_amp = 0.0;
    return out;
  }
  const BarrierFunctions f = barrier_functions(k, barrier.height, l, units);
  const double h = (f.kappa2 + k * k) / (2.0 * k);
  const double g = (f.kappa2 - k * k) / (2.0 * k);
  const cplx d{f.c, -h * f.s};  // scaled denominator, T = e^{-ikl} e^{-log_scale} / d

  out.log_abs_t = -f.log_scale - std::log(std::abs(d));
  out.phase = -k * l + barrier_arg(f, k, l);
  out.phase_derivative = -l + barrier_arg_derivative(f, k);
  out.t_amp = std::polar(std::exp(out.log_abs_t), out.phase);
  out.r_amp = I * g * f.s * std::exp(2.0 * I * k * a) / d;
  return out;
}

std::pair<double, double> phase_and_derivative(double k, const BarrierSpec& barrier, const Units& units) {
  const TransmissionData t = transmission_amplitude(k, barrier, units);
  return {t.phase, t.phase_derivative};
}

std::vector<double> unwrap(std::span<const double> wrapped) {
  std::vector<double> out(wrapped.begin(), wrapped.end());
  double offset = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double jump = wrapped[i] - wrapped[i - 1];
    if (jump > kPi) offset -= 2.0 * kPi;
    else if (jump < -kPi) offset += 2.0 * kPi;
    out[i] = wrapped[i] + offset;
  }
  return out;
}

std::vector<double> unwrapped_phase_on_grid(std::span<const double> ks, const BarrierSpec& barrier,
                                            const Units& units) {
  std::vector<double> wrapped;
  wrapped.reserve(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (i > 0 && !(ks[i] > ks[i - 1])) throw ConfigurationError("k grid must be strictly increasing");
    const double k = ks[i];
    if (barrier.height == 0.0) {
      wrapped.push_back(0.0);
      continue;
    }
    const BarrierFunctions f = barrier_functions(k, barrier.height, barrier.width, units);
    const double h = (f.kappa2 + k * k) / (2.0 * k);
    wrapped.push_back(std::arg(std::exp(-I * k * barrier.width) / cplx(f.c, -h * f.s)));
  }
  std::vector<double> out = unwrap(wrapped);
  if (!out.empty()) {
    const double anchor = phase_and_derivative(ks[0], barrier, units).first;
    const double shift = 2.0 * kPi * std::round((anchor - out[0]) / (2.0 * kPi));
    for (double& p : out) p += shift;
  }
  return out;
}

Amplitudes absorber_amplitudes_limit(const LimitSetup& setup, double k, ScalingCase scaling_case, double v0_l0,
                                     const Units& units) {
  if (!(k > 0.0)) throw DomainError("wavenumber k must be positive");
  const double beta = units.mass * v0_l0 / (units.hbar * units.hbar * k);
  const bool delta_like = scaling_case == ScalingCase::A;

  return std::visit(
      [&](const auto& s) -> Amplitudes {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, FreeLeft>) {
          const double a = delta_like ? 0.5 / (1.0 + beta) : 0.5;
          return {a, a};
        } else if constexpr (std::is_same_v<S, FreeAntisymmetric>) {
          return {0.0, 0.0};
        } else if constexpr (std::is_same_v<S, FreeSymmetric>) {
          const double a = delta_like ? 1.0 / (1.0 + beta) : 1.0;
          return {a, a};
        } else {
          const SquareBarrier& b = s.barrier;
          if (!(b.a < b.b) || b.b > 0.0) throw ConfigurationError("barrier needs a < b <= 0");
          const double l = b.width();
          if (!delta_like) {
            const cplx t = transmission_amplitude(k, {b.height, l}, units).t_amp;
            return {0.5 * t, 0.5 * t};
          }
          const BarrierFunctions f = barrier_functions(k, b.height, l, units);
          const double h = (f.kappa2 + k * k) / (2.0 * k);
          const double g = (f.kappa2 - k * k) / (2.0 * k);
          const cplx denom = 2.0 * (std::exp(I * k * l) * cplx(f.c, -h * f.s) * (1.0 + beta) +
                                    I * beta * std::exp(-I * k * b.centre_sum()) * g * f.s);
          const cplx a = std::exp(-f.log_scale) / denom;
          return {a, a};
        }
      },
      setup);
}

}  // namespace arrival
