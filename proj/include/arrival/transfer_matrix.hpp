#pragma once

#include <cstddef>

#include "arrival/potential.hpp"

namespace arrival {

struct Matrix2c {
  cplx m11, m12, m21, m22;

  static Matrix2c identity() { return {1.0, 0.0, 0.0, 1.0}; }

  cplx det() const { return m11 * m22 - m12 * m21; }
  Matrix2c inverse() const;
  double max_abs() const;

  friend Matrix2c operator*(const Matrix2c& a, const Matrix2c& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
  }
  friend Matrix2c operator*(cplx s, const Matrix2c& a) {
    return {s * a.m11, s * a.m12, s * a.m21, s * a.m22};
  }
};

/// Max entrywise |a - b|.
double max_entry_distance(const Matrix2c& a, const Matrix2c& b);

/// Matrix stored as mantissa * exp(log_scale). Evanescent regions produce
/// entries far beyond double range; amplitude ratios are formed from the
/// mantissas and the scales are combined only in the final exponent.
struct ScaledMatrix2c {
  Matrix2c mantissa = Matrix2c::identity();
  double log_scale = 0.0;

  Matrix2c value() const;
  ScaledMatrix2c& normalize();

  friend ScaledMatrix2c operator*(const ScaledMatrix2c& a, const ScaledMatrix2c& b) {
    ScaledMatrix2c r{a.mantissa * b.mantissa, a.log_scale + b.log_scale};
    r.normalize();
    return r;
  }
};

/// M_i(x) = [[e^{ik x}, e^{-ik x}], [k e^{ik x}, -k e^{-ik x}]]; det = -2k.
Matrix2c matching_matrix(cplx k_region, double x);

/// T(i, i+1) = M_i(x_{i+1})^{-1} M_{i+1}(x_{i+1}).
Matrix2c step_transfer(const PotentialProfile& profile, double k, std::size_t i, const Units& units = {});
ScaledMatrix2c step_transfer_scaled(const PotentialProfile& profile, double k, std::size_t i,
                                    const Units& units = {});

/// Ordered product T(i, i+1) ... T(j-1, j).
Matrix2c full_transfer(const PotentialProfile& profile, double k, std::size_t i, std::size_t j,
                       const Units& units = {});
ScaledMatrix2c full_transfer_scaled(const PotentialProfile& profile, double k, std::size_t i,
                                    std::size_t j, const Units& units = {});

/// Closed-form T(0,2) across the free absorber [-eps, eps].
Matrix2c closed_form_T02_absorber(double k, const AbsorberScaling& scaling, const Units& units = {});
/// Closed-form T(1,2): absorber interior to the free region on the right.
Matrix2c closed_form_T12_absorber(double k, const AbsorberScaling& scaling, const Units& units = {});

/// eps -> 0 limits of the two absorber matrices.
Matrix2c limit_T02_absorber(double k, ScalingCase scaling_case, double v0_l0, const Units& units = {});
Matrix2c limit_T12_absorber(ScalingCase scaling_case);

/// Closed-form T(0,2) of a real square barrier on [a, b].
Matrix2c barrier_transfer_closed_form(double k, const SquareBarrier& barrier, const Units& units = {});

/// Entire functions of kappa^2 describing propagation through a barrier of
/// width l. With kappa^2 = k^2 - 2mU/hbar^2 of either sign:
///   C = cos(kappa l), S = sin(kappa l)/kappa
/// and their k-derivatives. Below the barrier the values are multiplied by
/// exp(-log_scale) so they stay finite for opaque barriers.
struct BarrierFunctions {
  double kappa2;
  double c;
  double s;
  double dc_dk;
  double ds_dk;
  double log_scale;
};

BarrierFunctions barrier_functions(double k, double height, double width, const Units& units = {});

}  // namespace arrival
