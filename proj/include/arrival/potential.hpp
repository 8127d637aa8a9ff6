#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "arrival/units.hpp"

namespace arrival {

using cplx = std::complex<double>;

/// Interval of constant (possibly complex) potential. The outermost regions of
/// a profile extend to -inf / +inf.
struct Region {
  double x_left;
  double x_right;
  cplx v;  // enters H as v; absorbers carry Im(v) < 0
};

/// Ordered, contiguous list of regions with v = 0 in both semi-infinite ends.
class PotentialProfile {
 public:
  /// Validates contiguity, ordering and free outer regions.
  explicit PotentialProfile(std::vector<Region> regions);

  /// Builds a profile from finite breakpoints x_1 < ... < x_N and the N+1
  /// region values (first and last must be zero).
  static PotentialProfile from_breakpoints(const std::vector<double>& breakpoints,
                                           const std::vector<cplx>& values);

  const std::vector<Region>& regions() const { return regions_; }
  std::size_t size() const { return regions_.size(); }
  std::size_t last_index() const { return regions_.size() - 1; }
  const Region& operator[](std::size_t i) const { return regions_[i]; }

  /// x_{i+1}: the boundary between region i and region i+1.
  double boundary(std::size_t i) const { return regions_[i].x_right; }

  /// Index of the unique region with Im(v) < 0, if any. Throws when there is
  /// more than one absorbing region.
  std::optional<std::size_t> absorber_index() const;

  bool is_real() const;

 private:
  std::vector<Region> regions_;
};

enum class ScalingCase { A, B };

/// Absorber scaling V_eps = V0L0 / (2 c(eps)) with c(eps) = eps (case A) or
/// c(eps) = eps^alpha (case B, 0 < alpha < 1).
struct AbsorberScaling {
  ScalingCase scaling_case = ScalingCase::B;
  double alpha = 0.5;
  double v0_l0 = 1.0;
  double epsilon = 1e-3;

  void validate() const;
  double c() const;
  /// Height of the imaginary potential, -i * strength() enters H.
  double strength() const;
};

/// Barrier of height U occupying [a, b].
struct SquareBarrier {
  double height;
  double a;
  double b;

  double width() const { return b - a; }
  double centre_sum() const { return a + b; }
};

/// Principal branch of sqrt(k^2 - 2 m v / hbar^2) with Im >= 0.
cplx region_wavenumber(double k, cplx v, const Units& units = {});

/// Wavenumber q_eps inside the absorber.
cplx absorber_q(double k, const AbsorberScaling& scaling, const Units& units = {});

/// Free packet hitting the absorber [-eps, eps]: regions 0..2.
PotentialProfile free_absorber_profile(const AbsorberScaling& scaling);

/// Barrier [a, b] followed by the absorber: regions 0..4. Requires a < b < -eps.
PotentialProfile barrier_absorber_profile(const SquareBarrier& barrier,
                                          const AbsorberScaling& scaling);

/// Barrier alone, regions 0..2.
PotentialProfile barrier_profile(const SquareBarrier& barrier);

/// key = value lines describing the profile (one line per region).
std::string describe(const PotentialProfile& profile);

}  // namespace arrival
