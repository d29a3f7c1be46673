#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/legendre.hpp>

namespace hsl {

/// Gauss-Legendre nodes and weights mapped to [lo, hi].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  // Boost returns the nonnegative zeros in increasing order.
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(n));
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
    if (*it != 0.0) x.push_back(-*it);
  }
  for (double z : zeros) x.push_back(z);

  GaussRule rule;
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (double xi : x) {
    const double dp = boost::math::legendre_p_prime(n, xi);
    rule.nodes.push_back(mid + half * xi);
    rule.weights.push_back(half * 2.0 / ((1.0 - xi * xi) * dp * dp));
  }
  return rule;
}

}  // namespace hsl
