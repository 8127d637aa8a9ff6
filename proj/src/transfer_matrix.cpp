#include "arrival/transfer_matrix.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "arrival/errors.hpp"

namespace arrival {

namespace {

constexpr cplx I{0.0, 1.0};

// Series radius in z = kappa^2 l^2 below which C, S and dS/dk use their
// Taylor expansions (removes the kappa -> 0 singularity of sin(kappa l)/kappa).
constexpr double kSeriesRadius = 1.0;
constexpr int kSeriesTerms = 18;

cplx region_k(const PotentialProfile& profile, double k, std::size_t i, const Units& units) {
  return region_wavenumber(k, profile[i].v, units);
}

}  // namespace

Matrix2c Matrix2c::inverse() const {
  const cplx d = det();
  if (d == cplx(0.0)) throw SingularMatrixError("2x2 matrix is singular");
  return {m22 / d, -m12 / d, -m21 / d, m11 / d};
}

double Matrix2c::max_abs() const {
  return std::max({std::abs(m11), std::abs(m12), std::abs(m21), std::abs(m22)});
}

double max_entry_distance(const Matrix2c& a, const Matrix2c& b) {
  return std::max({std::abs(a.m11 - b.m11), std::abs(a.m12 - b.m12), std::abs(a.m21 - b.m21),
                   std::abs(a.m22 - b.m22)});
}

Matrix2c ScaledMatrix2c::value() const { return std::exp(log_scale) * mantissa; }

ScaledMatrix2c& ScaledMatrix2c::normalize() {
  const double m = mantissa.max_abs();
  if (m > 0.0 && std::isfinite(m)) {
    mantissa = cplx(1.0 / m) * mantissa;
    log_scale += std::log(m);
  }
  return *this;
}

Matrix2c matching_matrix(cplx k_region, double x) {
  if (k_region == cplx(0.0)) throw SingularMatrixError("matching matrix is singular for k_i = 0");
  const cplx ep = std::exp(I * k_region * x);
  const cplx em = std::exp(-I * k_region * x);
  return {ep, em, k_region * ep, -k_region * em};
}

ScaledMatrix2c step_transfer_scaled(const PotentialProfile& profile, double k, std::size_t i,
                                    const Units& units) {
  if (i >= profile.last_index()) throw ConfigurationError("step_transfer index out of range");
  const cplx ki = region_k(profile, k, i, units);
  const cplx kj = region_k(profile, k, i + 1, units);
  if (ki == cplx(0.0) || kj == cplx(0.0))
    throw SingularMatrixError("matching matrix is singular for k_i = 0");
  const double x = profile.boundary(i);
  const cplx r = kj / ki;

  // Entries are (1 +- r)/2 * exp(i w) for the four phases below.
  const std::array<cplx, 4> w{(kj - ki) * x, -(kj + ki) * x, (kj + ki) * x, -(kj - ki) * x};
  double log_scale = -w[0].imag();
  for (const cplx& wj : w) log_scale = std::max(log_scale, -wj.imag());
  auto e = [&](const cplx& wj) { return std::exp(I * wj - log_scale); };

  ScaledMatrix2c t;
  t.mantissa = {0.5 * (1.0 + r) * e(w[0]), 0.5 * (1.0 - r) * e(w[1]), 0.5 * (1.0 - r) * e(w[2]),
                0.5 * (1.0 + r) * e(w[3])};
  t.log_scale = log_scale;
  return t;
}

Matrix2c step_transfer(const PotentialProfile& profile, double k, std::size_t i, const Units& units) {
  return step_transfer_scaled(profile, k, i, units).value();
}

ScaledMatrix2c full_transfer_scaled(const PotentialProfile& profile, double k, std::size_t i,
                                    std::size_t j, const Units& units) {
  if (!(i < j) || j > profile.last_index()) throw ConfigurationError("full_transfer needs i < j <= N");
  ScaledMatrix2c t = step_transfer_scaled(profile, k, i, units);
  for (std::size_t n = i + 1; n < j; ++n) t = t * step_transfer_scaled(profile, k, n, units);
  return t;
}

Matrix2c full_transfer(const PotentialProfile& profile, double k, std::size_t i, std::size_t j,
                       const Units& units) {
  return full_transfer_scaled(profile, k, i, j, units).value();
}

Matrix2c closed_form_T02_absorber(double k, const AbsorberScaling& scaling, const Units& units) {
  const cplx q = absorber_q(k, scaling, units);
  const double eps = scaling.epsilon;
  const cplx sum = k / q + q / k;
  const cplx diff = k / q - q / k;
  const cplx c2 = std::cos(2.0 * q * eps);
  const cplx s2 = std::sin(2.0 * q * eps);
  const cplx ph = std::exp(2.0 * I * k * eps);
  return {(c2 - 0.5 * I * sum * s2) * ph, 0.5 * I * diff * s2, -0.5 * I * diff * s2,
          (c2 + 0.5 * I * sum * s2) / ph};
}

Matrix2c closed_form_T12_absorber(double k, const AbsorberScaling& scaling, const Units& units) {
  const cplx q = absorber_q(k, scaling, units);
  const double eps = scaling.epsilon;
  const cplx r = k / q;
  return {0.5 * (1.0 + r) * std::exp(I * (k - q) * eps), 0.5 * (1.0 - r) * std::exp(-I * (k + q) * eps),
          0.5 * (1.0 - r) * std::exp(I * (k + q) * eps), 0.5 * (1.0 + r) * std::exp(-I * (k - q) * eps)};
}

Matrix2c limit_T02_absorber(double k, ScalingCase scaling_case, double v0_l0, const Units& units) {
  if (scaling_case == ScalingCase::B) return Matrix2c::identity();
  if (!(k > 0.0)) throw DomainError("wavenumber k must be positive");
  const double beta = units.mass * v0_l0 / (units.hbar * units.hbar * k);
  return {1.0 + beta, beta, -beta, 1.0 - beta};
}

Matrix2c limit_T12_absorber(ScalingCase) { return {0.5, 0.5, 0.5, 0.5}; }

BarrierFunctions barrier_functions(double k, double height, double width, const Units& units) {
  if (!(k > 0.0)) throw DomainError("wavenumber k must be positive");
  if (!(width > 0.0)) throw DomainError("barrier width must be positive");
  const double l = width;
  const double kappa2 = k * k - units.energy_to_k2() * height;
  const double z = kappa2 * l * l;

  BarrierFunctions f{};
  f.kappa2 = kappa2;
  if (std::abs(z) < kSeriesRadius) {
    // C = sum (-z)^n/(2n)!, S = l sum (-z)^n/(2n+1)!,
    // (lC - S)/kappa^2 = -l^3 sum_{n>=1} 2n (-z)^{n-1}/(2n+1)!
    double c = 0.0, s = 0.0, r = 0.0;
    double even = 1.0;       // (-z)^n/(2n)!
    double shifted = 1.0 / 6.0;  // (-z)^{n-1}/(2n+1)!, from n = 1
    for (int n = 0; n < kSeriesTerms; ++n) {
      c += even;
      s += even / (2.0 * n + 1.0);
      even *= -z / ((2.0 * n + 1.0) * (2.0 * n + 2.0));
      if (n >= 1) {
        r -= 2.0 * n * shifted;
        shifted *= -z / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
      }
    }
    f.c = c;
    f.s = l * s;
    f.dc_dk = -l * k * f.s;
    f.ds_dk = k * l * l * l * r;
    f.log_scale = 0.0;
  } else if (kappa2 > 0.0) {
    const double kappa = std::sqrt(kappa2);
    f.c = std::cos(kappa * l);
    f.s = std::sin(kappa * l) / kappa;
    f.dc_dk = -l * k * f.s;
    f.ds_dk = k * (l * f.c - f.s) / kappa2;
    f.log_scale = 0.0;
  } else {
    const double kt = std::sqrt(-kappa2);
    const double y = kt * l;
    const double e2 = std::exp(-2.0 * y);
    f.c = 0.5 * (1.0 + e2);
    f.s = 0.5 * (1.0 - e2) / kt;
    f.dc_dk = -l * k * f.s;
    f.ds_dk = k * (l * f.c - f.s) / kappa2;
    f.log_scale = y;
  }
  return f;
}

Matrix2c barrier_transfer_closed_form(double k, const SquareBarrier& barrier, const Units& units) {
  if (!(k > 0.0)) throw DomainError("wavenumber k must be positive");
  const double l = barrier.width();
  const double s = barrier.centre_sum();
  if (!(l > 0.0)) throw ConfigurationError("barrier needs a < b");
  const BarrierFunctions f = barrier_functions(k, barrier.height, l, units);
  const double h = (f.kappa2 + k * k) / (2.0 * k);
  const double g = (f.kappa2 - k * k) / (2.0 * k);
  const double scale = std::exp(f.log_scale);
  const cplx t11 = std::exp(I * k * l) * cplx(f.c, -h * f.s);
  const cplx t22 = std::exp(-I * k * l) * cplx(f.c, h * f.s);
  const cplx t12 = -I * std::exp(-I * k * s) * g * f.s;
  const cplx t21 = I * std::exp(I * k * s) * g * f.s;
  return scale * Matrix2c{t11, t12, t21, t22};
}

}  // namespace arrival
