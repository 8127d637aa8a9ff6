#include "arrival/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "arrival/errors.hpp"

namespace arrival {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;
constexpr double kWindow = 8.0;  // half-width of the default window in units of dk
constexpr double kMinK = 1e-6;

}  // namespace

void GaussianSpec::validate() const {
  if (!(dx > 0.0)) throw DomainError("packet width dx must be positive");
  if (!std::isfinite(x0) || !std::isfinite(v0)) throw DomainError("packet parameters must be finite");
}

cplx gaussian_amplitude(const GaussianSpec& spec, double k, const Units& units) {
  const double dk = spec.dk();
  const double d = k - spec.k0(units);
  const double norm = std::pow(2.0 * kPi * dk * dk, -0.25);
  return norm * std::exp(-d * d / (4.0 * dk * dk)) * std::exp(-I * k * spec.x0);
}

cplx gaussian_position(const GaussianSpec& spec, double x, double t, const Units& units) {
  const double dk = spec.dk();
  const double k0 = spec.k0(units);
  const double a = spec.dx * spec.dx;
  const cplx big_a = a + I * (units.dispersion() * t);
  const cplx big_b = 2.0 * a * k0 + I * (x - spec.x0);
  const double norm = std::pow(2.0 * kPi * dk * dk, -0.25) / std::sqrt(2.0 * kPi);
  return norm * std::sqrt(kPi / big_a) * std::exp(big_b * big_b / (4.0 * big_a) - a * k0 * k0);
}

double MomentumAmplitude::norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) s += weights[i] * std::norm(values[i]);
  return s;
}

MomentumAmplitude sample(const QuadratureRule& rule, const std::function<cplx(double)>& f) {
  MomentumAmplitude amp;
  amp.k = rule.nodes;
  amp.weights = rule.weights;
  amp.values.reserve(rule.size());
  for (double k : rule.nodes) amp.values.push_back(f(k));
  return amp;
}

double gaussian_mass_below(const GaussianSpec& spec, double lower, const Units& units) {
  // |psi~|^2 is a normal density with standard deviation dk.
  return 0.5 * std::erfc((spec.k0(units) - lower) / (std::sqrt(2.0) * spec.dk()));
}

QuadratureRule gaussian_rule(const GaussianSpec& spec, const Units& units, int n) {
  spec.validate();
  const double k0 = spec.k0(units), dk = spec.dk();
  const double lo = std::max(k0 - kWindow * dk, kMinK);
  const double hi = k0 + kWindow * dk;
  if (!(hi > lo)) throw DomainError("packet has no support at positive k");
  if (gaussian_mass_below(spec, lo, units) > 1e-12 && lo == kMinK)
    throw DomainError("packet has non-negligible weight at k <= 0");
  return gauss_legendre(n, lo, hi);
}

MomentumAmplitude gaussian_packet(const GaussianSpec& spec, const Units& units, int n) {
  return sample(gaussian_rule(spec, units, n), [&](double k) { return gaussian_amplitude(spec, k, units); });
}

QuadratureRule mirrored_rule(const GaussianSpec& spec, const Units& units, int n) {
  const QuadratureRule right = gaussian_rule(spec, units, n);
  QuadratureRule left;
  for (std::size_t i = right.size(); i-- > 0;) {
    left.nodes.push_back(-right.nodes[i]);
    left.weights.push_back(right.weights[i]);
  }
  return join(left, right);
}

MomentumAmplitude mirrored_pair(const GaussianSpec& spec, double sign, const Units& units, int n) {
  // psi(-x) has momentum amplitude psi~(-k).
  MomentumAmplitude amp = sample(mirrored_rule(spec, units, n), [&](double k) {
    return gaussian_amplitude(spec, k, units) + sign * gaussian_amplitude(spec, -k, units);
  });
  const double scale = 1.0 / std::sqrt(amp.norm());
  for (cplx& v : amp.values) v *= scale;
  return amp;
}

MomentumAmplitude parse_tabulated(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  MomentumAmplitude amp;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    std::vector<double> cols;
    double v;
    while (row >> v) cols.push_back(v);
    if (!row.eof()) throw ConfigurationError("tabulated amplitude: bad number on line " + std::to_string(line_no));
    if (cols.empty()) continue;
    if (cols.size() < 2 || cols.size() > 3)
      throw ConfigurationError("tabulated amplitude: expected 2 or 3 columns on line " + std::to_string(line_no));
    amp.k.push_back(cols[0]);
    amp.values.emplace_back(cols[1], cols.size() == 3 ? cols[2] : 0.0);
  }
  if (amp.k.size() < 2) throw ConfigurationError("tabulated amplitude needs at least two rows");
  amp.weights = trapezoid_weights(amp.k);
  return amp;
}

MomentumAmplitude load_tabulated(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_tabulated(buf.str());
}

std::pair<MomentumAmplitude, MomentumAmplitude> parity_decompose(const MomentumAmplitude& amp) {
  const std::size_t n = amp.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = amp.k[i], b = -amp.k[n - 1 - i];
    if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)))
      throw ConfigurationError("parity decomposition needs a grid symmetric about k = 0");
  }
  MomentumAmplitude s = amp, a = amp;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx plus = amp.values[i], minus = amp.values[n - 1 - i];
    s.values[i] = 0.5 * (plus + minus);
    a.values[i] = 0.5 * (plus - minus);
  }
  return {s, a};
}

MomentumAmplitude half_line(const MomentumAmplitude& amp, int sign) {
  MomentumAmplitude out;
  const std::size_t n = amp.size();
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t i = sign > 0 ? j : n - 1 - j;
    const double k = sign > 0 ? amp.k[i] : -amp.k[i];
    if (k <= 0.0) continue;
    out.k.push_back(k);
    out.weights.push_back(amp.weights[i]);
    out.values.push_back(amp.values[i]);
  }
  return out;
}

double inv_velocity_mean(const MomentumAmplitude& amp, const Units& units) {
  double s = 0.0;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const double p = amp.weights[i] * std::norm(amp.values[i]);
    if (amp.k[i] <= 0.0) {
      if (p > 1e-12) throw DomainError("amplitude has weight at k <= 0");
      continue;
    }
    s += p * units.mass / (units.hbar * amp.k[i]);
  }
  return s;
}

double position_mean(const MomentumAmplitude& amp) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i + 1 < amp.size(); ++i) {
    const double h = amp.k[i + 1] - amp.k[i];
    const double w = std::abs(amp.values[i]) * std::abs(amp.values[i + 1]) * h;
    if (w == 0.0) continue;
    num += std::arg(std::conj(amp.values[i]) * amp.values[i + 1]) / h * w;
    den += w;
  }
  if (den == 0.0) throw NumericalError("position probe on a vanishing amplitude");
  return -num / den;
}

cplx position_amplitude(const MomentumAmplitude& amp, double x, double t, const Units& units) {
  cplx s = 0.0;
  const double disp = units.dispersion();
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const double k = amp.k[i];
    s += amp.weights[i] * amp.values[i] * std::exp(I * (k * x - disp * k * k * t));
  }
  return s / std::sqrt(2.0 * kPi);
}

}  // namespace arrival
