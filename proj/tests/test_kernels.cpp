#include "doctest.h"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

#include "arrival/errors.hpp"
#include "arrival/kernels.hpp"

using namespace arrival;

namespace {

constexpr cplx I{0.0, 1.0};

// Adaptive Gauss-Kronrod over the absorber, evaluating the stationary states pointwise.
cplx overlap_by_quadrature(const PotentialProfile& p, const ScatteringSolution& a, const ScatteringSolution& b) {
  const Region& r = p[*p.absorber_index()];
  auto part = [&](bool imag) {
    auto f = [&](double x) {
      const cplx v = std::conj(evaluate(p, a, x)) * evaluate(p, b, x);
      return imag ? v.imag() : v.real();
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, r.x_left, r.x_right, 15, 1e-14);
  };
  return {part(false), part(true)};
}

Eigen::MatrixXcd kernel_matrix(const KernelEvaluator& ev, const std::vector<double>& ks) {
  const int n = static_cast<int>(ks.size());
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = F_kernel(ev, ks[i], ks[j]);
  return m;
}

double min_eigenvalue(const Eigen::MatrixXcd& m) {
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h).eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("f kernel: diagonal positivity and Hermitian symmetry") {
  AbsorberScaling sc{ScalingCase::B, 0.5, 1.0, 0.2};
  const PotentialProfile p = free_absorber_profile(sc);
  const ScatteringSolution a = solve(p, 0.8, BoundaryCondition::LeftIncidence);
  const ScatteringSolution b = solve(p, 1.2, BoundaryCondition::LeftIncidence);
  const cplx faa = f_kernel(p, a, a);
  CHECK(faa.real() > 0.0);
  CHECK(std::abs(faa.imag()) < 1e-15 * faa.real());
  const cplx fab = f_kernel(p, a, b), fba = f_kernel(p, b, a);
  CHECK(std::abs(fab - std::conj(fba)) < 1e-14 * std::abs(fab));
}

TEST_CASE("f kernel against numerical quadrature") {
  for (double eps : {1e-4, 0.2}) {
    AbsorberScaling sc{ScalingCase::B, 0.5, 1.0, eps};
    const PotentialProfile p = free_absorber_profile(sc);
    for (auto [k, k2] : {std::pair{1.0, 1.0}, std::pair{0.9, 1.1}}) {
      const ScatteringSolution a = solve(p, k, BoundaryCondition::LeftIncidence);
      const ScatteringSolution b = solve(p, k2, BoundaryCondition::LeftIncidence);
      const cplx closed = absorber_overlap(p, a, b);
      const cplx numeric = overlap_by_quadrature(p, a, b);
      CHECK(std::abs(closed - numeric) < 1e-10 * std::abs(numeric));
    }
  }
  // Barrier profile and case A
  AbsorberScaling sc{ScalingCase::A, 0.5, 0.5, 0.1};
  const PotentialProfile p = barrier_absorber_profile({0.3, -20.0, -10.0}, sc);
  const ScatteringSolution a = solve(p, 0.7, BoundaryCondition::LeftIncidence);
  const ScatteringSolution b = solve(p, 1.3, BoundaryCondition::LeftIncidence);
  CHECK(std::abs(absorber_overlap(p, a, b) - overlap_by_quadrature(p, a, b)) <
        1e-10 * std::abs(overlap_by_quadrature(p, a, b)));
  CHECK_THROWS_AS(absorber_overlap(barrier_profile({0.3, -20.0, -10.0}), a, b), ConfigurationError);
}

TEST_CASE("f kernel total absorption matches the flux deficit") {
  // (1/2pi)(hbar k/m)(1 - |R|^2 - |T|^2) = f(k,k) for the normalized stationary state.
  AbsorberScaling sc{ScalingCase::B, 0.5, 0.3, 0.2};
  const PotentialProfile p = barrier_absorber_profile({0.3, -20.0, -10.0}, sc);
  for (double k : {0.5, 0.8, 1.1}) {
    const ScatteringSolution s = solve(p, k, BoundaryCondition::LeftIncidence);
    const double deficit = 1.0 - std::norm(s.amplitudes.front().minus) - std::norm(s.amplitudes.back().plus);
    CHECK(f_kernel(p, s, s).real() == doctest::Approx(k * deficit / (2 * M_PI)).epsilon(1e-11));
  }
}

TEST_CASE("b inverse sqrt") {
  CHECK(b_inverse_sqrt(1.3, 1.3 / (2 * M_PI)) == doctest::Approx(1.0));
  CHECK(b_inverse_sqrt(1.0, 0.5) == doctest::Approx(std::sqrt(1.0 / M_PI)));
  CHECK(b_inverse_sqrt(1.0, 0.5) == doctest::Approx(0.56419).epsilon(1e-5));
  CHECK(b_inverse_sqrt(0.7, 3.0 * 0.2) == doctest::Approx(b_inverse_sqrt(0.7, 0.2) / std::sqrt(3.0)));
  CHECK_THROWS_AS(b_inverse_sqrt(1.0, 0.0), NumericalError);
  CHECK_THROWS_AS(b_inverse_sqrt(1.0, -1.0), NumericalError);
}

TEST_CASE("limit regimes") {
  const KernelEvaluator free{FreeLimit{}};
  CHECK(F_kernel(free, 0.4, 1.9) == cplx(1.0));

  const KernelEvaluator phase{BarrierPhaseLimit{{0.3, 10.0}}};
  CHECK(F_kernel(phase, 1.1, 1.1) == cplx(1.0));
  const TransmissionData t1 = transmission_amplitude(0.9, {0.3, 10.0});
  const TransmissionData t2 = transmission_amplitude(1.2, {0.3, 10.0});
  const cplx ratio = std::conj(t1.t_amp) * t2.t_amp / (std::abs(t1.t_amp) * std::abs(t2.t_amp));
  CHECK(std::abs(F_kernel(phase, 0.9, 1.2) - ratio) < 1e-13);

  const KernelEvaluator wall{InfiniteBarrier{10.0}};
  CHECK(std::abs(F_kernel(wall, 1.0, 1.1) - std::exp(I * (1.0 - 1.1) * 10.0)) < 1e-15);

  const KernelEvaluator high{BarrierPhaseLimit{{1e4, 10.0}}};
  CHECK(std::abs(F_kernel(high, 1.0, 1.1) - std::exp(I * (1.0 - 1.1) * 10.0)) < 1e-2);

  const KernelEvaluator weighted{TransmissionWeighted{{0.3, 10.0}}};
  CHECK(F_kernel(weighted, 0.9, 0.9).real() == doctest::Approx(std::norm(t1.t_amp)));
  CHECK(std::abs(F_kernel(weighted, 0.9, 1.2) - std::conj(t1.t_amp) * t2.t_amp) < 1e-15);

  CHECK_THROWS_AS(F_kernel(free, 0.0, 1.0), DomainError);
}

TEST_CASE("finite-eps kernel converges to the limit regimes") {
  SUBCASE("free, case (b)") {
    double prev = INFINITY;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      const PotentialProfile p = free_absorber_profile({ScalingCase::B, 0.5, 1.0, eps});
      const double err = std::abs(finite_eps_F(p, 0.9, 1.1) - 1.0);
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 1e-3);
  }
  SUBCASE("free, case (a)") {
    double prev = INFINITY;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      const PotentialProfile p = free_absorber_profile({ScalingCase::A, 0.5, 1.0, eps});
      const double err = std::abs(finite_eps_F(p, 0.9, 1.1) - 1.0);
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 1e-3);
  }
  SUBCASE("barrier, case (b)") {
    const SquareBarrier bar{0.3, -20.0, -10.0};
    const cplx target = F_kernel(KernelEvaluator{BarrierPhaseLimit{{0.3, 10.0}}}, 0.9, 1.1);
    double prev = INFINITY;
    for (double eps : {1e-2, 1e-4, 1e-6}) {
      const PotentialProfile p = barrier_absorber_profile(bar, {ScalingCase::B, 0.5, 1.0, eps});
      const double err = std::abs(finite_eps_F(p, 0.9, 1.1) - target);
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 1e-3);
  }
}

TEST_CASE("kernel invariants on random samples") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> uk(0.3, 2.0), uu(0.0, 2.0), ul(0.5, 12.0), ueps(1e-3, 0.3);
  for (int draw = 0; draw < 60; ++draw) {
    const double l = ul(rng);
    const BarrierSpec spec{uu(rng), l};
    const SquareBarrier bar{spec.height, -5.0 - l, -5.0};
    const PotentialProfile p = barrier_absorber_profile(bar, {ScalingCase::B, 0.5, 1.0, ueps(rng)});
    const std::vector<KernelEvaluator> evs{{FreeLimit{}}, {BarrierPhaseLimit{spec}}, {InfiniteBarrier{l}},
                                           {FiniteEps{p}}, {TransmissionWeighted{spec}}};
    const double k = uk(rng), k2 = uk(rng);
    for (std::size_t e = 0; e < evs.size(); ++e) {
      const cplx fkk = F_kernel(evs[e], k, k);
      const cplx f12 = F_kernel(evs[e], k, k2), f21 = F_kernel(evs[e], k2, k);
      if (e == 4) {
        CHECK(std::abs(fkk - std::norm(transmission_amplitude(k, spec).t_amp)) < 1e-14);
        CHECK(fkk.real() <= 1.0 + 1e-15);
      } else {
        CHECK(std::abs(fkk - 1.0) < 1e-13);
      }
      CHECK(std::abs(f12 - std::conj(f21)) < 1e-13);
      CHECK(std::abs(f12) <= 1.0 + 1e-13);
    }
  }
}

TEST_CASE("kernel matrices are positive semidefinite") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> uk(0.3, 2.0), uu(0.0, 2.0), ul(0.5, 12.0);
  std::uniform_int_distribution<int> un(2, 8);
  for (int draw = 0; draw < 40; ++draw) {
    std::vector<double> ks(un(rng));
    for (double& k : ks) k = uk(rng);
    const BarrierSpec spec{uu(rng), ul(rng)};
    CHECK(min_eigenvalue(kernel_matrix({FreeLimit{}}, ks)) >= -1e-10);
    CHECK(min_eigenvalue(kernel_matrix({BarrierPhaseLimit{spec}}, ks)) >= -1e-10);
    const PotentialProfile p =
        barrier_absorber_profile({spec.height, -5.0 - spec.width, -5.0}, {ScalingCase::B, 0.5, 1.0, 0.05});
    CHECK(min_eigenvalue(kernel_matrix({FiniteEps{p}}, ks)) >= -1e-10);
  }
}
