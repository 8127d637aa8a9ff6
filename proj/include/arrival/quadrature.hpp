#pragma once

#include <cstddef>
#include <vector>

namespace arrival {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule mapped to [a, b]; nodes ascending.
QuadratureRule gauss_legendre(int n, double a, double b);

/// `panels` equal panels on [a, b] with an n-point rule on each.
QuadratureRule composite_gauss_legendre(int panels, int n, double a, double b);

/// Concatenates rules on disjoint intervals, keeping nodes ascending.
QuadratureRule join(const QuadratureRule& left, const QuadratureRule& right);

/// Trapezoid weights for an increasing (possibly non-uniform) grid.
std::vector<double> trapezoid_weights(const std::vector<double>& x);

}  // namespace arrival
