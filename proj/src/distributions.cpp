#include "arrival/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include "arrival/errors.hpp"
#include "parallel.hpp"

namespace arrival {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

void require_positive_k(const MomentumAmplitude& amp) {
  if (amp.size() == 0) throw ConfigurationError("empty momentum amplitude");
  if (!amp.positive_only()) throw DomainError("distribution needs an amplitude on k > 0");
}

// c_i = psi~_i T_i / sqrt(P) with log P returned through `log_p`.
std::vector<cplx> transmitted_coefficients(const MomentumAmplitude& amp, const BarrierSpec& barrier,
                                           const Units& units, double& log_p) {
  require_positive_k(amp);
  const std::size_t n = amp.size();
  std::vector<double> log_abs(n), phase(n), terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const TransmissionData t = transmission_amplitude(amp.k[i], barrier, units);
    const double a = std::abs(amp.values[i]);
    log_abs[i] = a > 0.0 ? std::log(a) + t.log_abs_t : kNegInf;
    phase[i] = std::arg(amp.values[i]) + t.phase;
    terms[i] = std::log(amp.weights[i]) + 2.0 * log_abs[i];
  }
  log_p = log_sum_exp(terms);
  if (log_p == kNegInf) throw NumericalError("transmitted amplitude vanishes on the grid");
  std::vector<cplx> c(n);
  for (std::size_t i = 0; i < n; ++i)
    c[i] = log_abs[i] == kNegInf ? cplx(0.0) : std::polar(std::exp(log_abs[i] - 0.5 * log_p), phase[i]);
  return c;
}

}  // namespace

const char* variant_name(DistributionVariant v) {
  switch (v) {
    case DistributionVariant::Kijowski: return "kijowski";
    case DistributionVariant::OnFree: return "on_free";
    case DistributionVariant::OnGeneral: return "on_general";
    case DistributionVariant::OnBarrier: return "on_barrier";
    case DistributionVariant::KijowskiTransmittedNormalized: return "kijowski_transmitted_normalized";
    case DistributionVariant::TildeOnBarrier: return "tilde_on_barrier";
    case DistributionVariant::FiniteEps: return "finite_eps";
  }
  return "unknown";
}

double TimeDistribution::mean() const {
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double h = t[i + 1] - t[i];
    m0 += 0.5 * h * (density[i] + density[i + 1]);
    m1 += 0.5 * h * (t[i] * density[i] + t[i + 1] * density[i + 1]);
  }
  if (!(m0 > 0.0)) throw NumericalError("distribution has no mass on its grid");
  return m1 / m0;
}

std::vector<double> kijowski_form(const std::vector<double>& k, const std::vector<double>& w,
                                  const std::vector<cplx>& c, const Times& ts, const Units& units) {
  const std::size_t n = k.size();
  std::vector<cplx> base(n);
  for (std::size_t i = 0; i < n; ++i) base[i] = w[i] * c[i] * std::sqrt(k[i]);
  const double pref = units.hbar / (2.0 * kPi * units.mass);
  const double disp = units.dispersion();
  std::vector<double> out(ts.size());
  detail::parallel_for(ts.size(), [&](std::size_t j) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += base[i] * std::exp(-I * (disp * k[i] * k[i] * ts[j]));
    out[j] = pref * std::norm(s);
  });
  return out;
}

std::vector<double> kijowski(const MomentumAmplitude& amp, const Times& ts, const Units& units) {
  require_positive_k(amp);
  return kijowski_form(amp.k, amp.weights, amp.values, ts, units);
}

std::vector<double> pi_on_free(const MomentumAmplitude& amp, const Times& ts, const Units& units) {
  return kijowski(amp, ts, units);
}

std::vector<double> pi_on_general(const MomentumAmplitude& amp, const Times& ts, const Units& units) {
  std::vector<double> out(ts.size(), 0.0);
  for (int sign : {1, -1}) {
    const MomentumAmplitude half = half_line(amp, sign);
    if (half.size() == 0) continue;
    const std::vector<double> part = kijowski_form(half.k, half.weights, half.values, ts, units);
    for (std::size_t j = 0; j < ts.size(); ++j) out[j] += part[j];
  }
  return out;
}

std::vector<double> pi_on_barrier(const MomentumAmplitude& amp, const TransmissionPhase& phase, const Times& ts,
                                  const Units& units) {
  require_positive_k(amp);
  std::vector<cplx> c(amp.values);
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        for (std::size_t i = 0; i < c.size(); ++i) {
          if constexpr (std::is_same_v<P, BarrierPhase>) {
            c[i] *= std::exp(I * transmission_amplitude(amp.k[i], p.barrier, units).phase);
          } else if constexpr (std::is_same_v<P, OpaqueLimit>) {
            c[i] *= std::exp(-I * amp.k[i] * p.width);
          }
        }
      },
      phase);
  return kijowski_form(amp.k, amp.weights, c, ts, units);
}

std::vector<double> pi_kn(const MomentumAmplitude& amp, const BarrierSpec& barrier, const Times& ts,
                          const Units& units) {
  double log_p = 0.0;
  const std::vector<cplx> c = transmitted_coefficients(amp, barrier, units, log_p);
  return kijowski_form(amp.k, amp.weights, c, ts, units);
}

std::vector<double> pi_tilde(const MomentumAmplitude& amp, const BarrierSpec& barrier, const Times& ts,
                             const Units& units) {
  double log_p = 0.0;
  const std::vector<cplx> c = transmitted_coefficients(amp, barrier, units, log_p);
  std::vector<double> out = kijowski_form(amp.k, amp.weights, c, ts, units);
  const double p = std::exp(log_p);
  for (double& v : out) v *= p;
  return out;
}

double log_transmission_probability(const MomentumAmplitude& amp, const BarrierSpec& barrier, const Units& units) {
  double log_p = 0.0;
  transmitted_coefficients(amp, barrier, units, log_p);
  return log_p;
}

double transmission_probability(const MomentumAmplitude& amp, const BarrierSpec& barrier, const Units& units) {
  return std::exp(log_transmission_probability(amp, barrier, units));
}

std::vector<double> pi_finite_eps(const MomentumAmplitude& amp, const PotentialProfile& profile, const Times& ts,
                                  bool normalized, const Units& units) {
  require_positive_k(amp);
  const std::size_t n = amp.size();
  std::vector<ScatteringSolution> sols;
  sols.reserve(n);
  for (double k : amp.k) sols.push_back(solve(profile, k, BoundaryCondition::LeftIncidence, units));

  const auto idx = profile.absorber_index();
  if (!idx) throw ConfigurationError("profile has no absorbing region");
  const double v_eps = -profile[*idx].v.imag();

  std::vector<cplx> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const cplx g = absorber_overlap(profile, sols[i], sols[j]);
      m[i * n + j] = g;
      m[j * n + i] = std::conj(g);
    }
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = m[i * n + i].real();

  if (normalized) {
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) {
      diag[i] = m[i * n + i].real();
      if (!(diag[i] > 0.0)) throw NumericalError("degenerate normalization: f(k,k) must be positive");
    }
    const double pref = units.hbar / (2.0 * kPi * units.mass);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        m[i * n + j] *= pref * std::sqrt(amp.k[i] * amp.k[j] / (diag[i] * diag[j]));
  } else {
    const double pref = 2.0 * v_eps / units.hbar;
    for (cplx& x : m) x *= pref;
  }

  std::vector<cplx> base(n);
  for (std::size_t i = 0; i < n; ++i) base[i] = amp.weights[i] * amp.values[i];
  const double disp = units.dispersion();
  std::vector<double> re(ts.size()), im(ts.size());
  detail::parallel_for(
      ts.size(),
      [&](std::size_t jt) {
        std::vector<cplx> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = base[i] * std::exp(-I * (disp * amp.k[i] * amp.k[i] * ts[jt]));
        cplx s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          cplx row = 0.0;
          const cplx* mi = &m[i * n];
          for (std::size_t j = 0; j < n; ++j) row += mi[j] * v[j];
          s += std::conj(v[i]) * row;
        }
        re[jt] = s.real();
        im[jt] = s.imag();
      },
      8);

  // |sum conj(v_i) m_ij v_j| <= sum |b_i| |m_ij| |b_j| at every t; residue is judged against that bound
  // so grids holding only tail times are not penalized.
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) bound += std::abs(base[i]) * std::abs(m[i * n + j]) * std::abs(base[j]);
  double peak = 0.0, residue = 0.0;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    peak = std::max(peak, std::abs(re[j]));
    residue = std::max(residue, std::abs(im[j]));
  }
  if (residue > 1e-10 * std::max({peak, bound, 1e-300}))
    throw NumericalError("finite-eps distribution has an imaginary residue");
  return re;
}

Times uniform_times(double t_min, double t_max, int n) {
  if (n < 2 || !(t_max > t_min)) throw ConfigurationError("time grid needs t_min < t_max and n >= 2");
  Times ts(n);
  for (int i = 0; i < n; ++i) ts[i] = t_min + (t_max - t_min) * i / (n - 1);
  return ts;
}

Times default_time_grid(const GaussianSpec& spec, const Units& units, int n) {
  spec.validate();
  if (!(spec.v0 > 0.0)) throw DomainError("default time grid needs v0 > 0");
  const double t_peak = std::abs(spec.x0) / spec.v0;
  const double spread = units.hbar * t_peak / (2.0 * units.mass * spec.dx);
  const double sigma_t = std::sqrt(spec.dx * spec.dx + spread * spread) / spec.v0;
  return uniform_times(t_peak - 12.0 * sigma_t, t_peak + 12.0 * sigma_t, n);
}

TimeDistribution make_distribution(DistributionVariant variant, Times ts,
                                   const std::function<std::vector<double>(const Times&)>& density,
                                   double tail_tol) {
  if (ts.size() < 2) throw ConfigurationError("time grid too short");
  TimeDistribution d;
  d.variant = variant;
  const double h = ts[1] - ts[0];
  const double scale = (ts.back() - ts.front()) / 24.0;
  d.t = std::move(ts);
  d.density = density(d.t);
  for (int round = 0; round < 8; ++round) {
    const bool left = d.density.front() * scale > tail_tol;
    const bool right = d.density.back() * scale > tail_tol;
    if (!left && !right) break;
    const std::size_t extra = std::max<std::size_t>(1, d.t.size() / 2);
    if (left) {
      Times more(extra);
      for (std::size_t i = 0; i < extra; ++i) more[i] = d.t.front() - h * static_cast<double>(extra - i);
      std::vector<double> vals = density(more);
      d.t.insert(d.t.begin(), more.begin(), more.end());
      d.density.insert(d.density.begin(), vals.begin(), vals.end());
    }
    if (right) {
      Times more(extra);
      for (std::size_t i = 0; i < extra; ++i) more[i] = d.t.back() + h * static_cast<double>(i + 1);
      std::vector<double> vals = density(more);
      d.t.insert(d.t.end(), more.begin(), more.end());
      d.density.insert(d.density.end(), vals.begin(), vals.end());
    }
  }
  const std::vector<double> w = trapezoid_weights(d.t);
  d.total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) d.total += w[i] * d.density[i];
  return d;
}

QuadratureRule transmitted_rule(const GaussianSpec& spec, const BarrierSpec& barrier, const Units& units,
                                int nodes_per_panel) {
  spec.validate();
  const double k0 = spec.k0(units), dk = spec.dk();
  const double drop = 50.0;
  const double step = dk / 10.0;
  const double lo = std::max(k0 - 8.0 * dk, 1e-6);
  auto log_weight = [&](double k) {
    const double d = k - k0;
    return -d * d / (2.0 * dk * dk) + 2.0 * transmission_amplitude(k, barrier, units).log_abs_t;
  };

  std::vector<double> ks, ls;
  double hi = k0 + 8.0 * dk;
  double peak = kNegInf;
  for (double k = lo; k <= hi; k += step) {
    ks.push_back(k);
    ls.push_back(log_weight(k));
    peak = std::max(peak, ls.back());
  }
  // The Gaussian factor bounds the weight from above; extend until it alone
  // falls below the threshold.
  const double needed = k0 + dk * std::sqrt(2.0 * std::max(0.0, drop - peak));
  for (double k = ks.back() + step; k <= needed + step; k += step) {
    ks.push_back(k);
    ls.push_back(log_weight(k));
    peak = std::max(peak, ls.back());
  }
  std::size_t first = ks.size(), last = 0;
  for (std::size_t i = 0; i < ks.size(); ++i)
    if (ls[i] > peak - drop) {
      first = std::min(first, i);
      last = i;
    }
  const double a = first == 0 ? ks.front() : ks[first - 1];
  const double b = last + 1 >= ks.size() ? ks.back() + step : ks[last + 1];

  // Narrow above-barrier resonances carry large Phi_T'; panels are bisected
  // until the moments sum p, p/k and p Phi_T'/k are stable.
  struct Sums {
    double p = 0.0, p_over_k = 0.0, delay = 0.0, delay_abs = 0.0;
  };
  auto integrate = [&](double lo, double hi) {
    const QuadratureRule r = gauss_legendre(nodes_per_panel, lo, hi);
    Sums s;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double k = r.nodes[i];
      const TransmissionData t = transmission_amplitude(k, barrier, units);
      const double d = k - k0;
      const double p = r.weights[i] * std::exp(-d * d / (2.0 * dk * dk) + 2.0 * t.log_abs_t - peak);
      s.p += p;
      s.p_over_k += p / k;
      s.delay += p * t.phase_derivative / k;
      s.delay_abs += p * std::abs(t.phase_derivative) / k;
    }
    return s;
  };
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / (0.5 * dk))));
  const double h = (b - a) / panels;
  std::vector<std::pair<double, double>> work;
  std::vector<Sums> coarse;
  Sums scale;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h, hi = p + 1 == panels ? b : a + (p + 1) * h;
    work.emplace_back(lo, hi);
    coarse.push_back(integrate(lo, hi));
    scale.p += coarse.back().p;
    scale.p_over_k += coarse.back().p_over_k;
    scale.delay_abs += coarse.back().delay_abs;
  }
  const double tol = 1e-10;
  std::vector<std::pair<double, double>> accepted;
  std::vector<std::tuple<double, double, Sums, int>> stack;
  for (std::size_t i = work.size(); i-- > 0;) stack.emplace_back(work[i].first, work[i].second, coarse[i], 0);
  while (!stack.empty()) {
    auto [lo, hi, whole, depth] = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (lo + hi);
    const Sums l = integrate(lo, mid), r = integrate(mid, hi);
    const bool converged = std::abs(l.p + r.p - whole.p) <= tol * scale.p &&
                           std::abs(l.p_over_k + r.p_over_k - whole.p_over_k) <= tol * scale.p_over_k &&
                           std::abs(l.delay + r.delay - whole.delay) <= tol * std::max(scale.delay_abs, scale.p);
    if (converged || depth >= 40) {
      accepted.emplace_back(lo, mid);
      accepted.emplace_back(mid, hi);
    } else {
      stack.emplace_back(mid, hi, r, depth + 1);
      stack.emplace_back(lo, mid, l, depth + 1);
    }
  }
  QuadratureRule out;
  for (const auto& [lo, hi] : accepted) out = join(out, gauss_legendre(nodes_per_panel, lo, hi));
  return out;
}

}  // namespace arrival
