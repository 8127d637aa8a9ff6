#include "arrival/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <map>
#include <mutex>

#include "arrival/errors.hpp"

namespace arrival {

namespace {

// Reference nodes/weights on [-1, 1], cached per order.
const QuadratureRule& reference_rule(int n) {
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  // legendre_p_zeros returns the non-negative zeros in ascending order.
  const std::vector<double> half = boost::math::legendre_p_zeros<double>(n);
  QuadratureRule rule;
  rule.nodes.reserve(n);
  auto weight = [n](double x) {
    const double dp = boost::math::legendre_p_prime<double>(n, x);
    return 2.0 / ((1.0 - x * x) * dp * dp);
  };
  for (auto r = half.rbegin(); r != half.rend(); ++r) {
    if (*r == 0.0) continue;
    rule.nodes.push_back(-*r);
  }
  for (double x : half) rule.nodes.push_back(x);
  for (double x : rule.nodes) rule.weights.push_back(weight(x));
  return cache.emplace(n, std::move(rule)).first->second;
}

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ConfigurationError("Gauss-Legendre order must be positive");
  if (!(a < b)) throw ConfigurationError("quadrature interval needs a < b");
  const QuadratureRule& ref = reference_rule(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  QuadratureRule out;
  out.nodes.reserve(ref.size());
  out.weights.reserve(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    out.nodes.push_back(mid + half * ref.nodes[i]);
    out.weights.push_back(half * ref.weights[i]);
  }
  return out;
}

QuadratureRule composite_gauss_legendre(int panels, int n, double a, double b) {
  if (panels < 1) throw ConfigurationError("need at least one panel");
  QuadratureRule out;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double hi = p + 1 == panels ? b : a + (p + 1) * h;
    QuadratureRule r = gauss_legendre(n, lo, hi);
    out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
    out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
  }
  return out;
}

QuadratureRule join(const QuadratureRule& left, const QuadratureRule& right) {
  if (!left.nodes.empty() && !right.nodes.empty() && !(left.nodes.back() < right.nodes.front()))
    throw ConfigurationError("joined quadrature rules overlap");
  QuadratureRule out = left;
  out.nodes.insert(out.nodes.end(), right.nodes.begin(), right.nodes.end());
  out.weights.insert(out.weights.end(), right.weights.begin(), right.weights.end());
  return out;
}

std::vector<double> trapezoid_weights(const std::vector<double>& x) {
  std::vector<double> w(x.size(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double h = x[i + 1] - x[i];
    if (!(h > 0.0)) throw ConfigurationError("grid must be strictly increasing");
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

}  // namespace arrival
