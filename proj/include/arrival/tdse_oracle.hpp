#pragma once

#include <limits>
#include <vector>

#include "arrival/potential.hpp"
#include "arrival/wavepacket.hpp"

namespace arrival {

/// Wave function on a uniform grid with hard walls at both ends.
struct GridState {
  std::vector<double> x;
  std::vector<cplx> psi;
  double t = 0.0;
  double dt = 0.0;
  double absorbed = 0.0;

  double norm() const;  // sum |psi|^2 dx
};

struct OracleOptions {
  double dx_grid = 0.025;
  double dt = 0.05;
  /// End of the run; NaN picks |x0|/v0 + 10 sigma_t.
  double t_final = std::numeric_limits<double>::quiet_NaN();
  /// Start of the run; NaN starts early enough (free evolution back from
  /// t = 0) that the packet is 12 widths clear of the potentials.
  double t_start = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> snapshot_times;
  Units units{};
};

struct OracleRun {
  double t_start = 0.0;
  double dt = 0.0;
  double dx = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
  std::vector<double> t_mid;      // step midpoints
  std::vector<double> rate;       // absorption rate at t_mid
  std::vector<double> bookkeeping;  // ||psi||^2 + absorbed - 1 after each step
  double absorbed = 0.0;
  std::vector<GridState> snapshots;
  GridState final_state;
};

/// Crank-Nicolson propagation of the Gaussian under the profile's potential.
OracleRun propagate(const GaussianSpec& packet, const PotentialProfile& profile, const OracleOptions& options);

/// (2 V_eps / hbar) sum over absorber nodes of |psi|^2 dx (edge nodes halved).
double absorption_rate(const GridState& state, const PotentialProfile& profile, const Units& units = {});

struct OracleComparison {
  double l1 = 0.0;           // int |rate_grid - rate_stationary| dt
  double l1_relative = 0.0;  // l1 / absorbed mass on the grid
  double absorbed_grid = 0.0;
  double absorbed_stationary = 0.0;
  double max_bookkeeping_error = 0.0;
  std::vector<double> t;  // sampled midpoints and both rates there
  std::vector<double> rate_grid;
  std::vector<double> rate_stationary;
};

/// Compares the run with the stationary-state absorption rate (pi_finite_eps,
/// unnormalized) evaluated at every `stride`-th step midpoint.
OracleComparison compare_with_stationary(const OracleRun& run, const GaussianSpec& packet,
                                         const PotentialProfile& profile, const Units& units = {}, int n_k = 200,
                                         int stride = 1);

}  // namespace arrival
