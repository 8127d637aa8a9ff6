#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "arrival/potential.hpp"
#include "arrival/transfer_matrix.hpp"

namespace arrival {

/// Boundary conditions on the outer amplitudes. All fix A_0^+ = 1.
///   LeftIncidence: A_N^- = 0;  Antisymmetric: A_N^- = -1;  Symmetric: A_N^- = +1.
enum class BoundaryCondition { LeftIncidence, Antisymmetric, Symmetric };

/// Coefficients of exp(+i k_i x) and exp(-i k_i x) in region i.
struct Amplitudes {
  cplx plus;
  cplx minus;
};

/// Stationary state phi_k(x) = (A_i^+ e^{i k_i x} + A_i^- e^{-i k_i x}) / sqrt(2 pi).
struct ScatteringSolution {
  double k = 0.0;
  BoundaryCondition bc = BoundaryCondition::LeftIncidence;
  std::vector<cplx> wavenumbers;
  std::vector<Amplitudes> amplitudes;

  const Amplitudes& outgoing_right() const { return amplitudes.back(); }
  const Amplitudes& incoming_left() const { return amplitudes.front(); }
};

ScatteringSolution solve(const PotentialProfile& profile, double k, BoundaryCondition bc,
                         const Units& units = {});

/// Largest relative mismatch of (phi, phi') across the region boundaries.
double matching_residual(const PotentialProfile& profile, const ScatteringSolution& solution);

/// Value of phi_k at x (including the 1/sqrt(2 pi) normalization).
cplx evaluate(const PotentialProfile& profile, const ScatteringSolution& solution, double x);

/// Barrier of height U and width l in the eps -> 0 limit calculations.
struct BarrierSpec {
  double height = 0.0;
  double width = 10.0;
};

/// Transmission through a real square barrier of height U occupying [a, a+l].
/// |T| is carried as log_abs_t as well, since it underflows for opaque barriers.
struct TransmissionData {
  double k;
  cplx t_amp;
  cplx r_amp;
  double log_abs_t;
  double phase;             // continuous Phi_T
  double phase_derivative;  // dPhi_T/dk
};

TransmissionData transmission_amplitude(double k, const BarrierSpec& barrier, const Units& units = {},
                                        double a = 0.0);

/// Phi_T and Phi_T' in closed form (continuous in k and across k^2 = 2mU/hbar^2).
std::pair<double, double> phase_and_derivative(double k, const BarrierSpec& barrier, const Units& units = {});

/// arg T(k) along an increasing grid, unwrapped by 2 pi jumps and anchored to
/// the closed-form phase at the first grid point.
std::vector<double> unwrapped_phase_on_grid(std::span<const double> ks, const BarrierSpec& barrier,
                                            const Units& units = {});

/// Removes 2 pi jumps larger than pi between consecutive samples.
std::vector<double> unwrap(std::span<const double> wrapped);

/// Configurations with closed-form eps -> 0 absorber amplitudes.
struct FreeLeft {};
struct FreeAntisymmetric {};
struct FreeSymmetric {};
struct BarrierLeft {
  SquareBarrier barrier;
};
using LimitSetup = std::variant<FreeLeft, FreeAntisymmetric, FreeSymmetric, BarrierLeft>;

/// (A^+, A^-) inside the absorber in the eps -> 0 limit of the given case.
Amplitudes absorber_amplitudes_limit(const LimitSetup& setup, double k, ScalingCase scaling_case,
                                     double v0_l0, const Units& units = {});

}  // namespace arrival
