#include "doctest.h"

#include <cmath>

#include "arrival/errors.hpp"
#include "arrival/moments.hpp"

using namespace arrival;

namespace {

const GaussianSpec paper{};

double t_grid_mean(const std::function<std::vector<double>(const Times&)>& f) {
  return make_distribution(DistributionVariant::OnBarrier, default_time_grid(paper), f).mean();
}

}  // namespace

TEST_CASE("free and Hartman times") {
  const MomentumAmplitude amp = gaussian_packet(paper);
  const double inv_v = inv_velocity_mean(amp);
  CHECK(free_time(amp, -50.0) == doctest::Approx(50.0 * inv_v));
  CHECK(free_time(amp, -50.0) == doctest::Approx(50.13).epsilon(1e-4));
  CHECK(hartman_time(amp, -50.0, 10.0) == doctest::Approx(40.10).epsilon(1e-4));
  CHECK(hartman_time(amp, -50.0, 0.0) == free_time(amp, -50.0));
  CHECK(hartman_time(amp, -50.0, 50.0) == 0.0);
}

TEST_CASE("mean arrival time") {
  const MomentumAmplitude amp = gaussian_packet(paper);
  const double inv_v = inv_velocity_mean(amp);
  CHECK(mean_arrival(amp, FreeMotion{}, -50.0) == doctest::Approx(50.0 * inv_v).epsilon(1e-12));
  CHECK(mean_arrival(amp, BarrierPhase{{0.0, 10.0}}, -50.0) == doctest::Approx(50.0 * inv_v).epsilon(1e-12));
  CHECK(mean_arrival(amp, OpaqueLimit{10.0}, -50.0) == doctest::Approx(40.0 * inv_v).epsilon(1e-12));
  CHECK(mean_arrival(amp, OpaqueLimit{10.0}, -50.0) == doctest::Approx(40.10).epsilon(1e-4));
  CHECK_THROWS_AS(mean_arrival(amp, FreeMotion{}, -40.0), NumericalError);
  CHECK_THROWS_AS(mean_arrival(mirrored_pair(paper, 1.0), FreeMotion{}, -50.0), DomainError);
}

TEST_CASE("moment consistency: t grid against k space") {
  const MomentumAmplitude amp = gaussian_packet(paper);
  SUBCASE("Kijowski") {
    const double t = t_grid_mean([&](const Times& ts) { return kijowski(amp, ts); });
    CHECK(std::abs(t / mean_arrival(amp, FreeMotion{}, -50.0) - 1.0) < 1e-4);
  }
  for (double U : {0.3, 0.48, 1.0, 2.0}) {
    const BarrierSpec b{U, 10.0};
    const double t = t_grid_mean([&](const Times& ts) { return pi_on_barrier(amp, BarrierPhase{b}, ts); });
    CHECK(std::abs(t / mean_arrival(amp, BarrierPhase{b}, -50.0) - 1.0) < 1e-4);
    const double tn = t_grid_mean([&](const Times& ts) { return pi_kn(amp, b, ts); });
    CHECK(std::abs(tn / mean_arrival_transmitted(amp, b, -50.0) - 1.0) < 1e-4);
  }
  SUBCASE("opaque surrogate") {
    const double t = t_grid_mean([&](const Times& ts) { return pi_on_barrier(amp, OpaqueLimit{10.0}, ts); });
    CHECK(std::abs(t / mean_arrival(amp, OpaqueLimit{10.0}, -50.0) - 1.0) < 1e-4);
  }
}

TEST_CASE("tunneling times") {
  const MomentumAmplitude amp = gaussian_packet(paper);
  const double inv_v = inv_velocity_mean(amp);
  const double k0 = paper.k0();
  const double tau0 = tunneling_time_tau(amp, {0.0, 10.0}, -50.0, k0);
  CHECK(tau0 == doctest::Approx(50.0 * inv_v - 40.0).epsilon(1e-12));
  CHECK(tau0 == doctest::Approx(10.13).epsilon(1e-3));
  CHECK(tunneling_time_tau_T(amp, {0.0, 10.0}, -50.0, k0) == doctest::Approx(tau0).epsilon(1e-12));
  CHECK(tunneling_time_tau_T(paper, {0.0, 10.0}) == doctest::Approx(tau0).epsilon(1e-9));
  // Opaque limit of tau
  const double tau_inf = mean_arrival(amp, OpaqueLimit{10.0}, -50.0) - 40.0;
  CHECK(tau_inf == doctest::Approx(40.0 * (inv_v - 1.0)).epsilon(1e-10));
  CHECK(tau_inf == doctest::Approx(0.100).epsilon(1e-2));
  // tau_T on the Gaussian grid and on its transmitted window agree where both resolve the weight
  const BarrierSpec b{1.0, 10.0};
  CHECK(tunneling_time_tau_T(amp, b, -50.0, k0) == doctest::Approx(tunneling_time_tau_T(paper, b)).epsilon(1e-6));
}

TEST_CASE("Hartman plateau and transmitted-state growth") {
  const MomentumAmplitude amp = gaussian_packet(paper);
  const double k0 = paper.k0();
  const double tau10 = tunneling_time_tau(amp, {1.0, 10.0}, -50.0, k0);
  const double tau20 = tunneling_time_tau(amp, {1.0, 20.0}, -50.0, k0);
  CHECK(std::abs(tau10 - tau20) < 0.05);

  std::vector<double> tau, tau_t;
  for (double l : {10.0, 15.0, 20.0, 25.0, 30.0}) {
    tau.push_back(tunneling_time_tau(amp, {1.0, l}, -50.0, k0));
    tau_t.push_back(tunneling_time_tau_T(paper, {1.0, l}));
  }
  for (std::size_t i = 2; i < tau_t.size(); ++i) CHECK(tau_t[i] > tau_t[i - 1]);
  for (std::size_t i = 1; i < tau.size(); ++i) {
    CHECK(std::abs(tau[i] - tau[i - 1]) / 5.0 < 0.01);
  }
  for (std::size_t i = 2; i < tau_t.size(); ++i) CHECK((tau_t[i] - tau_t[i - 1]) / 5.0 > 0.1);
  CHECK((tau_t.back() - tau_t.front()) / 20.0 > 0.1);
}

TEST_CASE("height sweep endpoints") {
  const MomentumAmplitude amp = gaussian_packet(paper);
  const double free_t = free_time(amp, -50.0), t_h = hartman_time(amp, -50.0, 10.0);
  CHECK(std::abs(mean_arrival(amp, BarrierPhase{{0.0, 10.0}}, -50.0) / free_t - 1.0) < 5e-3);
  CHECK(std::abs(mean_arrival(amp, BarrierPhase{{100.0, 10.0}}, -50.0) / t_h - 1.0) < 5e-3);
  // Beyond the resonances the mean decreases toward t_H
  double prev = INFINITY;
  for (double U : {0.6, 1.0, 2.0, 3.0, 4.0, 5.0, 20.0, 100.0}) {
    const double m = mean_arrival(amp, BarrierPhase{{U, 10.0}}, -50.0);
    CHECK(m < prev);
    CHECK(m > t_h);
    prev = m;
  }
}

TEST_CASE("height sweep endpoint at U = 5 within 0.5% of the Hartman time" * doctest::should_fail()) {
  // <t>(U = 5) - t_H ~ 0.67: the tunnelling delay has not yet shrunk to 0.2.
  const MomentumAmplitude amp = gaussian_packet(paper);
  const double t_h = hartman_time(amp, -50.0, 10.0);
  CHECK(std::abs(mean_arrival(amp, BarrierPhase{{5.0, 10.0}}, -50.0) / t_h - 1.0) < 5e-3);
}

TEST_CASE("opaque barriers stay finite") {
  const BarrierSpec b{50.0, 30.0};
  const double tt = tunneling_time_tau_T(paper, b);
  CHECK(std::isfinite(tt));
  CHECK(std::isfinite(mean_arrival_transmitted(gaussian_packet(paper), b, -50.0)));
}

TEST_CASE("timing report") {
  const TimingReport r = timing_report(paper, {0.0, 10.0});
  CHECK(r.free_t > r.hartman_t);
  CHECK(r.mean_t == doctest::Approx(r.free_t).epsilon(1e-12));
  CHECK(r.tau == doctest::Approx(r.tau_T).epsilon(1e-9));
  CHECK(TimingReport::csv_header() == "U,l,x0,k0,dx,mean_t,tau,tau_T,hartman_t,free_t");
  const std::string row = r.csv_row();
  CHECK(row.rfind("0,10,-50,1,10,", 0) == 0);
  CHECK(std::count(row.begin(), row.end(), ',') == 9);
}
