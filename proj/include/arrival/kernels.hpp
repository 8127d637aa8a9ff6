#pragma once

#include <variant>

#include "arrival/potential.hpp"
#include "arrival/scattering.hpp"

namespace arrival {

/// Finite-width absorber on an explicit profile (left-incidence states).
struct FiniteEps {
  PotentialProfile profile;
};
struct FreeLimit {};
/// Weak-measurement limit behind a barrier: unimodular phase ratio of T.
struct BarrierPhaseLimit {
  BarrierSpec barrier;
};
/// U -> infinity: e^{i(k - k')l}.
struct InfiniteBarrier {
  double width = 10.0;
};
/// conj(T(k)) T(k'), without operator normalization.
struct TransmissionWeighted {
  BarrierSpec barrier;
};

using KernelRegime = std::variant<FiniteEps, FreeLimit, BarrierPhaseLimit, InfiniteBarrier, TransmissionWeighted>;

struct KernelEvaluator {
  KernelRegime regime;
  Units units{};
};

/// int over the absorber of conj(phi_k) phi_k' dx, integrated in closed form.
cplx absorber_overlap(const PotentialProfile& profile, const ScatteringSolution& a, const ScatteringSolution& b);

/// f_eps(k, k') = (2 V_eps / hbar) * absorber_overlap.
cplx f_kernel(const PotentialProfile& profile, const ScatteringSolution& a, const ScatteringSolution& b,
              const Units& units = {});

/// sqrt(hbar k / (2 pi m f_diag)).
double b_inverse_sqrt(double k, double f_diag, const Units& units = {});

cplx F_kernel(const KernelEvaluator& evaluator, double k, double k2);

/// f / sqrt(f_kk f_k'k') from two left-incidence solves on the profile.
cplx finite_eps_F(const PotentialProfile& profile, double k, double k2, const Units& units = {});

}  // namespace arrival
