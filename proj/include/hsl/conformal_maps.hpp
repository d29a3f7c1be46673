#pragma once

// Conformal maps f from a circular sector (or the cut disk) onto the asymptotic
// Hele-Shaw regions, in closed form, as hypergeometric series, and as coefficient
// series obtained from the power-series solution of the governing ODE.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsl/special_functions.hpp"

namespace hsl {

enum class MapKind {
  kNegAxisClosedForm,    ///< killing on the negative half-axis, b = 1, arctan closed form
  kAngleHypergeometric,  ///< zeta F(-1/2, 2b, 2b+3/2; -zeta^(1/b))
  kHalfPlaneClosedForm,  ///< b = 1/2, arctan closed form
  kDoubledKillReflect,   ///< b = 2 on the disk cut along the positive half-axis; elementary near |zeta| = 1
  kSeriesOnly,           ///< sum_k a_k zeta^(1+k/b) with stored coefficients
};

inline const char* to_string(MapKind kind) {
  switch (kind) {
    case MapKind::kNegAxisClosedForm: return "negaxis";
    case MapKind::kAngleHypergeometric: return "angle";
    case MapKind::kHalfPlaneClosedForm: return "halfplane";
    case MapKind::kDoubledKillReflect: return "doubled";
    case MapKind::kSeriesOnly: return "series";
  }
  return "unknown";
}

/// Immutable description of a map. Evaluation is a pure function of the model.
struct ConformalMapModel {
  MapKind kind = MapKind::kSeriesOnly;
  double angle_param = 1.0;          ///< b; the sector has opening 2*pi*b
  std::vector<double> coefficients;  ///< a_k of zeta^(1+k/b), series models only
  double scale = 1.0;                ///< multiplies f
  SeriesOptions series{1e-11, 1'000'000};
};

/// Eigenvalue h of D^2 f + (1/2b)((1-w)/(1+w)) D f = h f, D = zeta d/dzeta.
struct OdeSpec {
  double angle_param;
  double eigenvalue;
};

inline OdeSpec ode_spec(double b) { return {b, 1.0 + 1.0 / (2.0 * b)}; }

/// Parameter domain of a map in polar coordinates. For b <= 1 the sector is
/// |arg zeta| <= pi b on the principal branch; for 1 < b <= 2 it is the upper half
/// 0 <= arg zeta <= pi b of the doubled angle, with arguments in [0, 2 pi].
struct Sector {
  double theta_min;
  double theta_max;
  BranchConvention branch;  ///< branch of log z used for moments on the image region
};

inline Sector sector_for(double b) {
  if (!(b > 0.0) || b > 2.0) throw std::invalid_argument("sector_for: need 0 < b <= 2");
  if (b <= 1.0) return {-kPi * b, kPi * b, BranchConvention::principal()};
  return {0.0, kPi * b, BranchConvention::positive_axis_from_above()};
}

inline Sector sector_of(const ConformalMapModel& map) { return sector_for(map.angle_param); }

/// Side of a cut used when an evaluation point lies exactly on it.
enum class CutSide { kUpper, kLower };

/// f and its derivatives at one point. `deriv` is f'(zeta); `zeta_d2` is D^2 f.
/// Fields above the requested order are left at zero.
struct MapJet {
  Complex value;
  Complex deriv;
  Complex zeta_d2;
  double error_bound = 0.0;
};

// ---------------------------------------------------------------------------
// Construction

inline ConformalMapModel make_negaxis_map() {
  ConformalMapModel m;
  m.kind = MapKind::kNegAxisClosedForm;
  m.angle_param = 1.0;
  return m;
}

inline ConformalMapModel make_angle_map(double b) {
  if (!(b > 0.0) || b > 2.0) throw std::invalid_argument("make_angle_map: need 0 < b <= 2");
  ConformalMapModel m;
  m.kind = MapKind::kAngleHypergeometric;
  m.angle_param = b;
  return m;
}

inline ConformalMapModel make_halfplane_map() {
  ConformalMapModel m;
  m.kind = MapKind::kHalfPlaneClosedForm;
  m.angle_param = 0.5;
  return m;
}

inline ConformalMapModel make_doubled_map() {
  ConformalMapModel m;
  m.kind = MapKind::kDoubledKillReflect;
  m.angle_param = 2.0;
  return m;
}

inline ConformalMapModel make_series_map(double b, std::vector<double> coefficients) {
  if (!(b > 0.0) || b > 2.0) throw std::invalid_argument("make_series_map: need 0 < b <= 2");
  if (coefficients.empty()) throw std::invalid_argument("make_series_map: no coefficients");
  ConformalMapModel m;
  m.kind = MapKind::kSeriesOnly;
  m.angle_param = b;
  m.coefficients = std::move(coefficients);
  return m;
}

/// f(zeta) = zeta on the full disk.
inline ConformalMapModel make_identity_map() { return make_series_map(1.0, {1.0}); }

inline ConformalMapModel with_scale(ConformalMapModel map, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("with_scale: scale must be positive");
  map.scale = scale;
  return map;
}

/// Power-series solution of the ODE with h = 1 + 1/(2b), normalized by a_0 = 1.
///
/// Substituting f = sum a_k zeta^(e_k), e_k = 1 + k/b, multiplying by (1 + w) and
/// matching powers gives Q(e_k) a_k = -P(e_{k-1}) a_{k-1} with
/// Q(e) = e^2 + e/(2b) - h = (e - 1)(e + h) and P(e) = e^2 - e/(2b) - h = (e + 1)(e - h).
/// Q(e_0) = 0 is what fixes h.
inline ConformalMapModel solve_ode_series(double b, int n_terms) {
  if (!(b > 0.0)) throw std::invalid_argument("solve_ode_series: b must be positive");
  if (n_terms < 2) throw std::invalid_argument("solve_ode_series: need at least two terms");
  const double h = ode_spec(b).eigenvalue;
  const auto exponent = [b](int k) { return 1.0 + k / b; };
  const auto p_poly = [b, h](double e) { return e * e - e / (2.0 * b) - h; };
  const auto q_poly = [b, h](double e) { return e * e + e / (2.0 * b) - h; };

  std::vector<double> a(static_cast<std::size_t>(n_terms));
  a[0] = 1.0;
  for (int k = 1; k < n_terms; ++k) {
    const double q = q_poly(exponent(k));
    if (q == 0.0) throw std::logic_error("solve_ode_series: singular recurrence");
    a[k] = -a[k - 1] * p_poly(exponent(k - 1)) / q;
  }
  return make_series_map(b, std::move(a));
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

struct Jet {
  Complex v, d1, d2;
};

/// (arctan w - w) / w^3 as an analytic function of zeta = w^2, with two derivatives.
inline Jet arctan_remainder(Complex zeta) {
  if (std::abs(zeta) < 0.5) {
    // sum_{j>=0} (-1)^(j+1) zeta^j / (2j + 3)
    Jet out{};
    Complex pj(1.0, 0.0), pj1(0.0, 0.0), pj2(0.0, 0.0);  // zeta^j, zeta^(j-1), zeta^(j-2)
    for (int j = 0; j < 200; ++j) {
      const double c = ((j % 2) ? 1.0 : -1.0) / (2.0 * j + 3.0);
      out.v += c * pj;
      out.d1 += (c * j) * pj1;
      out.d2 += (c * j * (j - 1)) * pj2;
      if (j > 4 && std::abs(pj) * j * j < 1e-19) break;
      pj2 = pj1;
      pj1 = pj;
      pj *= zeta;
    }
    return out;
  }
  const Complex w = std::sqrt(zeta);
  const Complex v = (arctan_c(w) - w) / (w * zeta);
  const Complex inv1p = 1.0 / (1.0 + zeta);
  const Complex g = inv1p + 3.0 * v;
  const Complex d1 = -g / (2.0 * zeta);
  const Complex d2 = (inv1p * inv1p - 3.0 * d1) / (2.0 * zeta) + g / (2.0 * zeta * zeta);
  return {v, d1, d2};
}

// f = (15/32)(1+z)^2 (z^-1 - (1-z) z^(-3/2) arctan z^(1/2)) - 5/8
//   = (15/32)(1+z)^2 (1 - (1-z) A(z)) - 5/8,   A = arctan remainder.
inline MapJet negaxis_jet(Complex z, int order) {
  MapJet out;
  if (z == Complex(-1.0, 0.0)) {
    if (order >= 2) throw std::domain_error("negaxis map: second derivative diverges at the cusp");
    out.value = {-0.625, 0.0};
    return out;  // f'(-1) = 0
  }
  const Jet a = arctan_remainder(z);
  const Complex one_m = 1.0 - z;
  const Complex one_p = 1.0 + z;
  const Complex bb = 1.0 - one_m * a.v;
  const Complex b1 = a.v - one_m * a.d1;
  const Complex b2 = 2.0 * a.d1 - one_m * a.d2;
  out.value = (15.0 / 32.0) * one_p * one_p * bb - 0.625;
  if (order >= 1) out.deriv = (15.0 / 16.0) * one_p * bb + (15.0 / 32.0) * one_p * one_p * b1;
  if (order >= 2) {
    const Complex f2 = (15.0 / 16.0) * bb + (15.0 / 8.0) * one_p * b1 +
                       (15.0 / 32.0) * one_p * one_p * b2;
    out.zeta_d2 = z * out.deriv + z * z * f2;
  }
  return out;
}

// f = (3/8)((z - 1/z) + (z + 1/z)^2 arctan z) = (3/8)(3z + z^3 + (1+z^2)^2 z A(z^2)).
inline MapJet halfplane_jet(Complex z, int order) {
  MapJet out;
  const Complex z2 = z * z;
  const Complex one_p = 1.0 + z2;
  if (std::abs(one_p) == 0.0) {
    if (order >= 2) throw std::domain_error("halfplane map: second derivative diverges at ±i");
    out.value = 0.375 * (3.0 * z + z2 * z);
    return out;
  }
  const Jet a = arctan_remainder(z2);
  const Complex av = a.v;
  const Complex a1 = 2.0 * z * a.d1;
  const Complex a2 = 2.0 * a.d1 + 4.0 * z2 * a.d2;
  const Complex g = one_p * one_p * z;
  const Complex g1 = one_p * (1.0 + 5.0 * z2);
  const Complex g2 = 12.0 * z + 20.0 * z2 * z;
  out.value = 0.375 * (3.0 * z + z2 * z + g * av);
  if (order >= 1) out.deriv = 0.375 * (3.0 + 3.0 * z2 + g1 * av + g * a1);
  if (order >= 2) {
    const Complex f2 = 0.375 * (6.0 * z + g2 * av + 2.0 * g1 * a1 + g * a2);
    out.zeta_d2 = z * out.deriv + z2 * f2;
  }
  return out;
}

// F(-1/2, 4; 11/2; -w) = (21/4096) w^-4 (P(-w) + 15 Q(-w) T(w)), T(w) = arctan(w^(1/2)) / w^(1/2),
// with P(x) = 105x^4 - 40x^3 - 34x^2 - 40x + 105 and Q(x) = -7x^5 + 5x^4 + 2x^3 + 2x^2 + 5x - 7.
// Returns F, xF' and x^2 F'' at x = -w. The w^-4 cancellation makes this unsuitable near 0;
// near |w| = 1 it replaces a direct series whose derivative tail decays only like 1/n.
inline HypergeometricJet doubled_closed_jet(Complex w, int order) {
  HypergeometricJet out;
  if (w == Complex(-1.0, 0.0)) {
    // x = 1: Gauss's formula for F and for F' = (ab/c) F(a+1, b+1; c+1; 1).
    if (order >= 2) throw std::domain_error("doubled map: second derivative diverges at x = 1");
    out.value = 0.4921875;
    out.z_d1 = -0.984375;
    return out;
  }
  const Complex x = -w;
  const Complex p = (((105.0 * x - 40.0) * x - 34.0) * x - 40.0) * x + 105.0;
  const Complex p1 = ((420.0 * x - 120.0) * x - 68.0) * x - 40.0;
  const Complex p2 = (1260.0 * x - 240.0) * x - 68.0;
  const Complex q = ((((-7.0 * x + 5.0) * x + 2.0) * x + 2.0) * x + 5.0) * x - 7.0;
  const Complex q1 = (((-35.0 * x + 20.0) * x + 6.0) * x + 4.0) * x + 5.0;
  const Complex q2 = ((-140.0 * x + 60.0) * x + 12.0) * x + 4.0;
  const Complex u = std::sqrt(w);
  const Complex t = arctan_c(u) / u;
  const Complex inv1p = 1.0 / (1.0 + w);
  const Complex t1 = (inv1p - t) / (2.0 * w);
  const Complex t2 = (-inv1p * inv1p - t1) / (2.0 * w) - t1 / w;
  // G(w) = P(-w) + 15 Q(-w) T(w); d/dw of P(-w) is -P'(-w).
  const Complex g = p + 15.0 * q * t;
  const Complex g1 = -p1 + 15.0 * (-q1 * t + q * t1);
  const Complex g2 = p2 + 15.0 * (q2 * t - 2.0 * q1 * t1 + q * t2);
  const double c = 21.0 / 4096.0;
  const Complex w4 = (w * w) * (w * w);
  out.value = c * g / w4;
  // x d/dx = w d/dw.
  if (order >= 1) out.z_d1 = c * (-4.0 * g + w * g1) / w4;
  if (order >= 2) out.z2_d2 = c * (20.0 * g - 8.0 * w * g1 + w * w * g2) / w4;
  return out;
}

inline MapJet hypergeometric_jet(const ConformalMapModel& map, double r, double theta, int order) {
  const double b = map.angle_param;
  const Complex zeta = std::polar(r, theta);
  const Complex x = -std::polar(std::pow(r, 1.0 / b), theta / b);
  const HypergeometricJet f =
      map.kind == MapKind::kDoubledKillReflect && std::abs(x) >= 0.7
          ? doubled_closed_jet(-x, order)
          : gauss_2f1_jet(-0.5, 2.0 * b, 2.0 * b + 1.5, x, order, map.series);
  MapJet out;
  out.error_bound = f.error_bound;
  out.value = zeta * f.value;
  if (order >= 1) out.deriv = f.value + f.z_d1 / b;
  if (order >= 2) {
    out.zeta_d2 = zeta * (f.value + (2.0 / b + 1.0 / (b * b)) * f.z_d1 + f.z2_d2 / (b * b));
  }
  return out;
}

inline MapJet series_jet(const ConformalMapModel& map, double r, double theta, int order) {
  const double b = map.angle_param;
  const Complex zeta = std::polar(r, theta);
  const Complex w = std::polar(std::pow(r, 1.0 / b), theta / b);
  Complex s0(0.0, 0.0), s1(0.0, 0.0), s2(0.0, 0.0);
  for (std::size_t k = map.coefficients.size(); k-- > 0;) {
    const double a = map.coefficients[k];
    const double e = 1.0 + static_cast<double>(k) / b;
    s0 = s0 * w + a;
    s1 = s1 * w + a * e;
    s2 = s2 * w + a * e * e;
  }
  MapJet out;
  out.value = zeta * s0;
  if (order >= 1) out.deriv = s1;
  if (order >= 2) out.zeta_d2 = zeta * s2;
  return out;
}

}  // namespace detail

/// Evaluates the map at zeta = r e^(i theta), theta in the map's sector. Polar input
/// is unambiguous on cuts and slits. `order` selects how many derivatives are formed.
inline MapJet eval_polar(const ConformalMapModel& map, double r, double theta, int order = 1) {
  const Sector sec = sector_of(map);
  const double slack = 1e-12 * (1.0 + std::abs(sec.theta_max));
  if (!(r >= 0.0) || r > 1.0 + 1e-12) throw std::domain_error("eval: |zeta| > 1");
  if (theta < sec.theta_min - slack || theta > sec.theta_max + slack) {
    throw std::domain_error("eval: argument outside the map's sector");
  }
  MapJet jet;
  switch (map.kind) {
    case MapKind::kNegAxisClosedForm:
      jet = detail::negaxis_jet(r == 1.0 && std::abs(theta) == kPi ? Complex(-1.0, 0.0)
                                                                     : std::polar(r, theta),
                                order);
      break;
    case MapKind::kHalfPlaneClosedForm:
      jet = detail::halfplane_jet(std::polar(r, theta), order);
      break;
    case MapKind::kAngleHypergeometric:
    case MapKind::kDoubledKillReflect:
      jet = detail::hypergeometric_jet(map, r, theta, order);
      break;
    case MapKind::kSeriesOnly:
      jet = detail::series_jet(map, r, theta, order);
      break;
  }
  jet.value *= map.scale;
  jet.deriv *= map.scale;
  jet.zeta_d2 *= map.scale;
  jet.error_bound *= map.scale;
  return jet;
}

/// Polar coordinates of zeta in the map's sector; points on a cut resolve to `side`.
inline std::pair<double, double> to_sector_polar(const ConformalMapModel& map, Complex zeta,
                                                 CutSide side = CutSide::kUpper) {
  const double b = map.angle_param;
  BranchConvention conv;
  if (b <= 1.0) {
    conv = side == CutSide::kUpper ? BranchConvention::principal()
                                   : BranchConvention::principal_from_below();
  } else {
    conv = side == CutSide::kUpper ? BranchConvention::positive_axis_from_above()
                                   : BranchConvention::positive_axis_from_below();
  }
  const double r = std::abs(zeta);
  return {r, r == 0.0 ? 0.0 : branch_arg(zeta, conv)};
}

inline Complex eval(const ConformalMapModel& map, Complex zeta, CutSide side = CutSide::kUpper) {
  const auto [r, theta] = to_sector_polar(map, zeta, side);
  return eval_polar(map, r, theta, 0).value;
}

inline Complex eval_deriv(const ConformalMapModel& map, Complex zeta,
                          CutSide side = CutSide::kUpper) {
  const auto [r, theta] = to_sector_polar(map, zeta, side);
  return eval_polar(map, r, theta, 1).deriv;
}

// ---------------------------------------------------------------------------
// Boundary sampling

struct BoundaryPoint {
  double theta;  ///< parameter angle on |zeta| = 1; for side points, the angle of their side
  Complex z;
  bool on_arc;
};

/// Ordered closed boundary of the image region: n samples of f(e^(i theta)) on the arc,
/// plus the straight sides through the vertex f(0) = 0. Rows start at theta = 0 and run
/// counterclockwise. For b = 1 the sides collapse onto the slit [f(-1), 0], which is
/// traced out and back.
inline std::vector<BoundaryPoint> boundary_sample(const ConformalMapModel& map, int n) {
  if (n < 3) throw std::invalid_argument("boundary_sample: need n >= 3");
  ConformalMapModel m = map;
  m.series.rel_tol = std::max(m.series.rel_tol, 1e-10);
  const double b = m.angle_param;
  std::vector<BoundaryPoint> out;
  out.reserve(static_cast<std::size_t>(n) + 2);
  const auto arc = [&](double theta) {
    out.push_back({theta, eval_polar(m, 1.0, theta, 0).value, true});
  };
  const auto vertex = [&](double theta) { out.push_back({theta, Complex(0.0, 0.0), false}); };

  if (b == 1.0) {
    // Closed curve: theta_j = 2 pi j / n wrapped into (-pi, pi].
    std::vector<double> thetas;
    for (int j = 0; j < n; ++j) {
      double t = kTwoPi * j / n;
      if (t > kPi) t -= kTwoPi;
      thetas.push_back(t);
    }
    for (double t : thetas) if (t >= 0.0) arc(t);
    const bool has_pi = n % 2 == 0;
    if (!has_pi) arc(kPi);
    vertex(kPi);
    arc(-kPi);
    for (double t : thetas) if (t < 0.0) arc(t);
    // The out-and-back slit adds one or two rows beyond the n arc samples.
    return out;
  }
  if (b < 1.0) {
    std::vector<double> thetas;
    for (int j = 0; j < n; ++j) thetas.push_back(-kPi * b + 2.0 * kPi * b * j / (n - 1));
    for (double t : thetas) if (t >= 0.0) arc(t);
    vertex(kPi * b);
    for (double t : thetas) if (t < 0.0) arc(t);
    return out;
  }
  // Upper half of the doubled angle: theta in [0, pi b], one-sided limits at both ends.
  for (int j = 0; j < n; ++j) arc(kPi * b * j / (n - 1));
  vertex(0.0);
  return out;
}

inline void write_boundary_csv(std::ostream& os, const std::vector<BoundaryPoint>& rows) {
  os << "theta,x,y\n";
  os << std::setprecision(17);
  for (const auto& p : rows) os << p.theta << ',' << p.z.real() << ',' << p.z.imag() << '\n';
}

// ---------------------------------------------------------------------------
// Verification of the defining equations

struct BoundaryResidualOptions {
  double delta = 0.05;   ///< excluded half-width around the sector edges theta = ±pi b
  int grid = 4096;
  /// Check the general-b analogue Re(zeta f' conj f) = cos(theta/(2b)). That right-hand
  /// side is inferred, not derived, so it is opt-in.
  bool inferred_general_b = false;
};

struct BoundaryResidual {
  double max_residual = 0.0;
  double theta_at_max = 0.0;
  double scale = 1.0;  ///< factor applied to f so that the identity holds at theta = 0
};

/// Scale lambda > 0 for which lambda f satisfies Re(zeta f' conj f) = 1 at zeta = 1.
/// The homothety equation is quadratic in f, so the normalization f'(0) = 1 fixes f
/// only up to this factor.
inline double boundary_equation_scale(const ConformalMapModel& map) {
  const MapJet j = eval_polar(map, 1.0, 0.0, 1);
  const double lhs = (j.deriv * std::conj(j.value)).real();
  if (!(lhs > 0.0)) throw std::domain_error("boundary_equation_scale: non-positive flux at zeta = 1");
  return 1.0 / std::sqrt(lhs);
}

/// Max over |zeta| = 1, |theta| <= pi b - delta of
/// |Re(zeta f' conj f) - cos(theta / (2b))| for the rescaled map.
inline BoundaryResidual boundary_equation_residual(const ConformalMapModel& map,
                                                   BoundaryResidualOptions opts = {}) {
  const double b = map.angle_param;
  if (b != 1.0 && !opts.inferred_general_b) {
    throw std::invalid_argument(
        "boundary_equation_residual: only b = 1 is derived; set inferred_general_b");
  }
  if (b > 1.0) throw std::invalid_argument("boundary_equation_residual: needs b <= 1");
  BoundaryResidual out;
  const double lambda = boundary_equation_scale(map);
  out.scale = lambda;
  const double edge = kPi * b;
  for (int j = 0; j < opts.grid; ++j) {
    const double theta = -edge + (j + 0.5) * (2.0 * edge / opts.grid);
    if (std::abs(theta) > edge - opts.delta) continue;
    const MapJet jet = eval_polar(map, 1.0, theta, 1);
    const Complex zeta = std::polar(1.0, theta);
    const double lhs = lambda * lambda * (zeta * jet.deriv * std::conj(jet.value)).real();
    const double res = std::abs(lhs - std::cos(theta / (2.0 * b)));
    if (res > out.max_residual) {
      out.max_residual = res;
      out.theta_at_max = theta;
    }
  }
  return out;
}

struct OdeResidualOptions {
  double r_max = 0.9;
  int radial = 12;
  int angular = 25;
};

/// Max over interior sector points of |D^2 f + (1/2b)((1-w)/(1+w)) D f - h f|,
/// w = zeta^(1/b), h = 1 + 1/(2b), with D f and D^2 f taken from the representation.
inline double ode_residual(const ConformalMapModel& map, OdeResidualOptions opts = {}) {
  const double b = map.angle_param;
  const double h = ode_spec(b).eigenvalue;
  const Sector sec = sector_of(map);
  double worst = 0.0;
  for (int i = 1; i <= opts.radial; ++i) {
    const double r = opts.r_max * i / opts.radial;
    for (int j = 0; j < opts.angular; ++j) {
      const double theta =
          sec.theta_min + (j + 0.5) * (sec.theta_max - sec.theta_min) / opts.angular;
      const MapJet jet = eval_polar(map, r, theta, 2);
      const Complex zeta = std::polar(r, theta);
      const Complex w = std::polar(std::pow(r, 1.0 / b), theta / b);
      const Complex df = zeta * jet.deriv;
      const Complex res = jet.zeta_d2 + (1.0 / (2.0 * b)) * ((1.0 - w) / (1.0 + w)) * df -
                          h * jet.value;
      worst = std::max(worst, std::abs(res));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Diagnostics

/// |f(1)| / |f(-1)| for a full-plane (b = 1) map, f(-1) as the boundary limit.
inline double thickness_ratio(const ConformalMapModel& map) {
  if (map.angle_param != 1.0) {
    throw std::invalid_argument("thickness_ratio: defined only for b = 1 maps");
  }
  const Complex right = eval_polar(map, 1.0, 0.0, 0).value;
  const Complex left = eval_polar(map, 1.0, kPi, 0).value;
  if (std::abs(left) == 0.0) throw std::domain_error("thickness_ratio: f(-1) = 0");
  return std::abs(right) / std::abs(left);
}

enum class CuspClass { kPower2Log, kPower2Plain, kOther };

inline const char* to_string(CuspClass c) {
  switch (c) {
    case CuspClass::kPower2Log: return "power2_log";
    case CuspClass::kPower2Plain: return "power2_plain";
    case CuspClass::kOther: return "other";
  }
  return "other";
}

struct CuspProbe {
  CuspClass classification = CuspClass::kOther;
  double constant = 0.0;  ///< fitted c of the winning model
  double log_fit_error = 0.0;
  double plain_fit_error = 0.0;
  std::vector<double> log_ratios;  ///< |f(-1+u) - f(-1)| / (u^2 |log u|) per probe u
};

/// Local behaviour of f at zeta = -1: compares |f(-1+u) - f(-1)| against u^2 |log u|
/// and u^2 on u = 1e-2 .. 1e-5. A model wins when its ratios agree to within 25%.
inline CuspProbe cusp_probe(const ConformalMapModel& map) {
  if (map.angle_param != 1.0) throw std::invalid_argument("cusp_probe: needs a b = 1 map");
  const double us[] = {1e-2, 1e-3, 1e-4, 1e-5};
  const Complex base = eval_polar(map, 1.0, kPi, 0).value;
  std::vector<double> log_ratio, plain_ratio;
  for (double u : us) {
    const double d = std::abs(eval(map, Complex(-1.0 + u, 0.0)) - base);
    log_ratio.push_back(d / (u * u * std::abs(std::log(u))));
    plain_ratio.push_back(d / (u * u));
  }
  const auto fit = [](const std::vector<double>& ratios, double& constant) {
    double mean_log = 0.0;
    for (double q : ratios) mean_log += std::log(q);
    constant = std::exp(mean_log / ratios.size());
    double err = 0.0;
    for (double q : ratios) err = std::max(err, std::abs(q / constant - 1.0));
    return err;
  };
  CuspProbe out;
  double c_log = 0.0, c_plain = 0.0;
  out.log_fit_error = fit(log_ratio, c_log);
  out.plain_fit_error = fit(plain_ratio, c_plain);
  out.log_ratios = log_ratio;
  const bool log_wins = out.log_fit_error <= out.plain_fit_error;
  const double best = std::min(out.log_fit_error, out.plain_fit_error);
  if (best > 0.25) {
    out.classification = CuspClass::kOther;
    out.constant = log_wins ? c_log : c_plain;
  } else if (log_wins) {
    out.classification = CuspClass::kPower2Log;
    out.constant = c_log;
  } else {
    out.classification = CuspClass::kPower2Plain;
    out.constant = c_plain;
  }
  return out;
}

}  // namespace hsl
