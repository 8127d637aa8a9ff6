#include "doctest.h"

#include <cmath>
#include <fstream>
#include <random>

#include "arrival/errors.hpp"
#include "arrival/quadrature.hpp"
#include "arrival/wavepacket.hpp"

using namespace arrival;

namespace {
constexpr cplx I{0.0, 1.0};
const GaussianSpec paper{};
}  // namespace

TEST_CASE("Gauss-Legendre rule") {
  const QuadratureRule r = gauss_legendre(400, 0.0, 2.0);
  double sw = 0.0, s4 = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    sw += r.weights[i];
    s4 += r.weights[i] * std::pow(r.nodes[i], 4);
    if (i > 0) CHECK(r.nodes[i] > r.nodes[i - 1]);
  }
  CHECK(sw == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s4 == doctest::Approx(32.0 / 5.0).epsilon(1e-14));
  const QuadratureRule c = composite_gauss_legendre(4, 10, -1.0, 1.0);
  CHECK(c.size() == 40);
  double sc = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) sc += c.weights[i] * std::cos(c.nodes[i]);
  CHECK(sc == doctest::Approx(2.0 * std::sin(1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(gauss_legendre(0, 0.0, 1.0), ConfigurationError);
  CHECK_THROWS_AS(gauss_legendre(5, 1.0, 1.0), ConfigurationError);
  CHECK_THROWS_AS(join(gauss_legendre(3, 0, 2), gauss_legendre(3, 1, 3)), ConfigurationError);
  const std::vector<double> tw = trapezoid_weights({0.0, 1.0, 3.0});
  CHECK(tw == std::vector<double>{0.5, 1.5, 1.0});
}

TEST_CASE("Gaussian amplitude") {
  CHECK(std::abs(gaussian_amplitude(paper, 1.0)) == doctest::Approx(std::pow(2 * M_PI * 0.0025, -0.25)));
  CHECK(std::abs(gaussian_amplitude(paper, 1.0)) == doctest::Approx(2.82469).epsilon(1e-5));
  const MomentumAmplitude amp = gaussian_packet(paper);
  CHECK(amp.size() == 400);
  CHECK(amp.positive_only());
  CHECK(std::abs(amp.norm() - 1.0) < 1e-10);
  CHECK(amp.k.front() == doctest::Approx(0.6));
  CHECK(amp.k.back() == doctest::Approx(1.4));
  // Refinement stability
  CHECK(std::abs(gaussian_packet(paper, {}, 800).norm() - amp.norm()) < 1e-10);
  CHECK(gaussian_mass_below(paper, 1e-6) < 1e-12);
}

TEST_CASE("position mean at t = 0 from a discrete Fourier transform") {
  // Uniform k samples, direct DFT to a uniform x grid, first moment of |psi(x)|^2.
  const int nk = 1024;
  const double k_lo = 0.6, k_hi = 1.4, hk = (k_hi - k_lo) / nk;
  std::vector<cplx> psik(nk);
  for (int j = 0; j < nk; ++j) psik[j] = gaussian_amplitude(paper, k_lo + (j + 0.5) * hk);
  double num = 0.0, den = 0.0;
  for (double x = -120.0; x <= 20.0; x += 0.25) {
    cplx s = 0.0;
    for (int j = 0; j < nk; ++j) s += psik[j] * std::exp(I * (k_lo + (j + 0.5) * hk) * x);
    const double p = std::norm(s * hk / std::sqrt(2 * M_PI));
    num += x * p;
    den += p;
  }
  CHECK(num / den == doctest::Approx(-50.0).epsilon(1e-8));
  CHECK(den * 0.25 == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(position_mean(gaussian_packet(paper)) == doctest::Approx(-50.0).epsilon(1e-9));
  GaussianSpec other{-80.0, 5.0, 1.5};
  CHECK(position_mean(gaussian_packet(other)) == doctest::Approx(-80.0).epsilon(1e-9));
}

TEST_CASE("position amplitude matches the closed-form free evolution") {
  const MomentumAmplitude amp = gaussian_packet(paper);
  for (double t : {0.0, 30.0, 80.0})
    for (double x : {-60.0, -50.0, -20.0, 0.0, 30.0}) {
      const cplx a = position_amplitude(amp, x, t), b = gaussian_position(paper, x, t);
      CHECK(std::abs(a - b) < 1e-8);  // window truncation at 8 dk: exp(-16) in amplitude
    }
  // Ehrenfest: the peak moves at v0
  CHECK(std::norm(gaussian_position(paper, -10.0, 40.0)) > std::norm(gaussian_position(paper, -12.0, 40.0)));
  CHECK(std::norm(gaussian_position(paper, -10.0, 40.0)) > std::norm(gaussian_position(paper, -8.0, 40.0)));
}

TEST_CASE("inverse velocity mean") {
  const double v = inv_velocity_mean(gaussian_packet(paper));
  const double r = paper.dk() / paper.k0();
  // Asymptotic series sum (2n-1)!! r^{2n}
  const double series = 1.0 + r * r + 3 * std::pow(r, 4) + 15 * std::pow(r, 6) + 105 * std::pow(r, 8);
  CHECK(v == doctest::Approx(series).epsilon(1e-9));
  CHECK(v == doctest::Approx(1.00251).epsilon(1e-5));
  CHECK(v > 1.0 / 1.4);
  // Narrow packet approaches m / (hbar k0)
  CHECK(inv_velocity_mean(gaussian_packet({-50.0, 1e4, 2.0})) == doctest::Approx(0.5).epsilon(1e-8));
  // Monotone in k0
  CHECK(inv_velocity_mean(gaussian_packet({-50.0, 10.0, 1.2})) < v);
}

TEST_CASE("parity decomposition") {
  const MomentumAmplitude anti = mirrored_pair(paper, -1.0);
  const MomentumAmplitude sym = mirrored_pair(paper, +1.0);
  CHECK(anti.norm() == doctest::Approx(1.0));
  const auto [as, aa] = parity_decompose(anti);
  for (std::size_t i = 0; i < anti.size(); ++i) {
    CHECK(std::abs(as.values[i]) < 1e-15);
    CHECK(std::abs(aa.values[i] - anti.values[i]) < 1e-15);
  }
  const auto [ss, sa] = parity_decompose(sym);
  for (std::size_t i = 0; i < sym.size(); ++i) CHECK(std::abs(sa.values[i]) < 1e-15);

  // Generic input: reconstruction and projection
  MomentumAmplitude mixed = sample(mirrored_rule(paper), [](double k) { return cplx(std::sin(3 * k) + k * k, k); });
  const auto [ms, ma] = parity_decompose(mixed);
  for (std::size_t i = 0; i < mixed.size(); ++i) CHECK(std::abs(ms.values[i] + ma.values[i] - mixed.values[i]) < 1e-15);
  const auto [ms2, ma2] = parity_decompose(ms);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    CHECK(ms2.values[i] == ms.values[i]);
    CHECK(ma2.values[i] == cplx(0.0));
  }
  CHECK_THROWS_AS(parity_decompose(gaussian_packet(paper)), ConfigurationError);
}

TEST_CASE("half-line restriction") {
  const MomentumAmplitude sym = mirrored_pair(paper, 1.0);
  const MomentumAmplitude plus = half_line(sym, +1), minus = half_line(sym, -1);
  CHECK(plus.size() == 400);
  CHECK(minus.size() == 400);
  CHECK(minus.positive_only());
  for (std::size_t i = 0; i < 400; ++i) CHECK(minus.values[i] == sym.values[399 - i]);
}

TEST_CASE("tabulated amplitudes") {
  const MomentumAmplitude a = parse_tabulated("# k re im\n0.5 1 0\n1.0, 2, 1 # comment\n\n2.0 3\n");
  REQUIRE(a.size() == 3);
  CHECK(a.values[1] == cplx(2.0, 1.0));
  CHECK(a.values[2] == cplx(3.0, 0.0));
  CHECK(a.weights == std::vector<double>{0.25, 0.75, 0.5});
  CHECK_THROWS_AS(parse_tabulated("0.5 1 0 4\n1 2\n"), ConfigurationError);
  CHECK_THROWS_AS(parse_tabulated("0.5 x\n1 2\n"), ConfigurationError);
  CHECK_THROWS_AS(parse_tabulated("0.5 1\n"), ConfigurationError);
  CHECK_THROWS_AS(parse_tabulated("1 1\n0.5 1\n"), ConfigurationError);
  CHECK_THROWS_AS(load_tabulated("/nonexistent/file"), ConfigurationError);
}

TEST_CASE("packet validation") {
  CHECK_THROWS_AS(gaussian_packet({-50.0, 0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(gaussian_packet({-50.0, 1.0, 0.1}), DomainError);  // k0/dk = 0.2
  CHECK_THROWS_AS(inv_velocity_mean(mirrored_pair(paper, 1.0)), DomainError);
}
