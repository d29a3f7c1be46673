#pragma once

// Branch-aware complex elementary functions and the Gauss hypergeometric series.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hsl/errors.hpp"

namespace hsl {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Angular window for multivalued functions.
///
/// Arguments are taken in [arg_min, arg_min + 2π) when `min_inclusive`, otherwise in
/// (arg_min, arg_min + 2π]. The ray arg = arg_min is the cut; a point lying exactly on
/// it resolves to the side selected by the inclusivity flag.
struct BranchConvention {
  double arg_min = -kPi;
  bool min_inclusive = false;

  /// Cut on the negative half-axis, arg in (-π, π]. Points on the cut take the
  /// limit from above.
  static constexpr BranchConvention principal() { return {-kPi, false}; }
  /// Same cut, but points on it take the limit from below: arg in [-π, π).
  static constexpr BranchConvention principal_from_below() { return {-kPi, true}; }
  /// arg in [0, 2π): the logarithm is real on the positive half-axis approached from
  /// above (the reflecting side).
  static constexpr BranchConvention positive_axis_from_above() { return {0.0, true}; }
  /// arg in (0, 2π]: limits from below the positive half-axis.
  static constexpr BranchConvention positive_axis_from_below() { return {0.0, false}; }

  /// Direction of the cut ray, in [0, 2π).
  double cut_angle() const {
    double a = std::fmod(arg_min, kTwoPi);
    return a < 0.0 ? a + kTwoPi : a;
  }

  friend bool operator==(const BranchConvention&, const BranchConvention&) = default;
};

namespace detail {

inline void require_finite(Complex z, const char* who) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::domain_error(std::string(who) + ": non-finite argument");
  }
}

}  // namespace detail

/// Argument of z in the window of `conv`.
inline double branch_arg(Complex z, BranchConvention conv) {
  detail::require_finite(z, "branch_arg");
  // Signed zeros would otherwise choose a side of the cut on their own.
  const double re = z.real() == 0.0 ? 0.0 : z.real();
  const double im = z.imag() == 0.0 ? 0.0 : z.imag();
  double a = std::atan2(im, re);
  const double lo = conv.arg_min;
  const double hi = conv.arg_min + kTwoPi;
  if (conv.min_inclusive) {
    while (a < lo) a += kTwoPi;
    while (a >= hi) a -= kTwoPi;
  } else {
    while (a <= lo) a += kTwoPi;
    while (a > hi) a -= kTwoPi;
  }
  return a;
}

inline Complex branch_log(Complex z, BranchConvention conv = BranchConvention::principal()) {
  if (z == Complex(0.0, 0.0)) throw std::domain_error("branch_log: logarithm of zero");
  return {std::log(std::abs(z)), branch_arg(z, conv)};
}

/// z^s = exp(s log z) on the branch of `conv`.
inline Complex branch_pow(Complex z, double s,
                          BranchConvention conv = BranchConvention::principal()) {
  if (z == Complex(0.0, 0.0)) {
    if (s > 0.0) return {0.0, 0.0};
    if (s == 0.0) return {1.0, 0.0};
    throw std::domain_error("branch_pow: zero raised to a negative power");
  }
  return std::polar(std::pow(std::abs(z), s), s * branch_arg(z, conv));
}

/// Complex arctangent (1/2i) log((1+iw)/(1-iw)). With the principal convention it is
/// real on the real axis and has its cuts on the imaginary axis beyond ±i.
inline Complex arctan_c(Complex w, BranchConvention conv = BranchConvention::principal()) {
  detail::require_finite(w, "arctan_c");
  const Complex i(0.0, 1.0);
  if (w == i || w == -i) throw std::domain_error("arctan_c: logarithmic singularity at ±i");
  if (std::abs(w) < 0.25 && conv == BranchConvention::principal()) {
    // Taylor series; the log form loses relative accuracy near the origin.
    const Complex w2 = w * w;
    Complex term = w;
    Complex sum = w;
    for (int k = 1; k < 40; ++k) {
      term *= -w2;
      const Complex add = term / double(2 * k + 1);
      sum += add;
      if (std::abs(add) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return branch_log((1.0 + i * w) / (1.0 - i * w), conv) / (2.0 * i);
}

struct SeriesOptions {
  double rel_tol = 1e-12;
  std::size_t term_cap = 1'000'000;
};

struct SeriesValue {
  Complex value;
  double error_bound = 0.0;  ///< estimated absolute tail after truncation
  std::size_t terms = 0;
};

/// Hypergeometric value together with the scaled derivatives z F'(z) and z^2 F''(z),
/// all summed from the same terms.
struct HypergeometricJet {
  Complex value;
  Complex z_d1;
  Complex z2_d2;
  double error_bound = 0.0;
  std::size_t terms = 0;
};

namespace detail {

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

}  // namespace detail

/// Sums F(a, b; c; z) and, up to `order` (0..2), the scaled derivatives z F' and
/// z^2 F'' by direct series summation on the closed unit disk.
///
/// Terms t_n = z^n prod_{j<n} (a+j)(b+j)/((1+j)(c+j)). Once the term ratio has settled,
/// the tail of the order-k series sum n^k t_n is bounded by
/// |n^k t_n| * min(rho/(1-rho), n/(p-1)) with rho = |z| and p = c-a-b+1-k the algebraic
/// decay exponent; summation stops when every requested tail is below
/// rel_tol * max(|sum_k|, |F|).
inline HypergeometricJet gauss_2f1_jet(double a, double b, double c, Complex z, int order,
                                       SeriesOptions opts = {}) {
  detail::require_finite(z, "gauss_2f1");
  if (detail::is_nonpositive_integer(c)) {
    throw std::invalid_argument("gauss_2f1: c must not be a nonpositive integer");
  }
  if (order < 0 || order > 2) throw std::invalid_argument("gauss_2f1: order must be 0, 1 or 2");
  const double rho = std::abs(z);
  if (rho > 1.0 + 1e-12) throw std::domain_error("gauss_2f1: |z| > 1 is outside the series disk");
  const bool terminating = detail::is_nonpositive_integer(a) || detail::is_nonpositive_integer(b);
  const double excess = c - a - b;
  if (!terminating && rho >= 1.0 - 1e-15 && excess - order <= 0.0) {
    throw std::domain_error("gauss_2f1: series diverges on |z| = 1 for these parameters");
  }

  HypergeometricJet out;
  Complex t(1.0, 0.0);
  Complex s0(1.0, 0.0), s1(0.0, 0.0), s2(0.0, 0.0);
  if (z == Complex(0.0, 0.0)) {
    out.value = s0;
    out.terms = 1;
    return out;
  }

  const std::size_t trust_from =
      static_cast<std::size_t>(2.0 * (std::abs(a) + std::abs(b) + std::abs(c))) + 8;
  double bound = std::numeric_limits<double>::infinity();
  bool converged = false;
  std::size_t n = 0;
  for (; n < opts.term_cap; ++n) {
    const double dn = static_cast<double>(n);
    t *= z * ((a + dn) * (b + dn) / ((1.0 + dn) * (c + dn)));
    const double m = dn + 1.0;
    s0 += t;
    if (order >= 1) s1 += m * t;
    if (order >= 2) s2 += (m * (m - 1.0)) * t;
    if (t == Complex(0.0, 0.0)) {
      bound = 0.0;
      converged = true;
      break;
    }
    if (n + 1 < trust_from || ((n + 1) & 7u) != 0) continue;

    const double scale = std::abs(s0);
    const double at = std::abs(t);
    bool done = true;
    bound = 0.0;
    for (int k = 0; k <= order; ++k) {
      const double tk = at * std::pow(m, k);
      const double geometric = rho < 1.0 ? rho / (1.0 - rho) : std::numeric_limits<double>::infinity();
      const double p = excess + 1.0 - k;
      const double algebraic = p > 1.0 ? m / (p - 1.0) : std::numeric_limits<double>::infinity();
      const double tail = tk * std::min(geometric, algebraic);
      const double sk = k == 0 ? scale : std::abs(k == 1 ? s1 : s2);
      bound = std::max(bound, tail);
      if (!(tail <= opts.rel_tol * std::max(sk, scale))) done = false;
    }
    if (done) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError("gauss_2f1: tolerance not reached within the term cap", n, bound);
  }
  out.value = s0;
  out.z_d1 = s1;
  out.z2_d2 = s2;
  out.error_bound = bound;
  out.terms = n + 2;
  return out;
}

/// Gauss hypergeometric function F(a, b; c; z) for |z| <= 1.
inline SeriesValue gauss_2f1(double a, double b, double c, Complex z, SeriesOptions opts = {}) {
  const HypergeometricJet jet = gauss_2f1_jet(a, b, c, z, 0, opts);
  return {jet.value, jet.error_bound, jet.terms};
}

}  // namespace hsl
