#pragma once

// Harmonic moments of analytic regions (pullback quadrature over the parameter sector)
// and of lattice clusters (cell-centre sums).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "hsl/conformal_maps.hpp"
#include "hsl/errors.hpp"
#include "hsl/lattice.hpp"
#include "hsl/quadrature.hpp"
#include "hsl/special_functions.hpp"

namespace hsl {

/// Test function Re(z^s) or Re(z^s log z) on a fixed branch.
struct MomentSpec {
  double exponent = 1.0;
  bool with_log = false;
  BranchConvention branch = BranchConvention::principal();
};

/// Tensor Gauss-Legendre grid in (r, theta) over the parameter sector.
struct QuadratureGrid {
  int radial_nodes = 256;
  int angular_nodes = 256;

  QuadratureGrid refined() const { return {2 * radial_nodes, 2 * angular_nodes}; }
};

struct MomentResult {
  double value = 0.0;
  double error_estimate = 0.0;  ///< |value(grid) - value(refined grid)|
  double magnitude = 0.0;       ///< integral of |z|^s over the region
};

/// Value of the test function at z, zero at z = 0 for positive exponents.
inline double moment_integrand(Complex z, const MomentSpec& spec) {
  if (z == Complex(0.0, 0.0)) {
    if (spec.exponent > 0.0) return 0.0;
    if (spec.exponent == 0.0 && !spec.with_log) return 1.0;
    throw std::domain_error("moment_integrand: singular at z = 0");
  }
  Complex v = branch_pow(z, spec.exponent, spec.branch);
  if (spec.with_log) v *= branch_log(z, spec.branch);
  return v.real();
}

namespace detail {

struct RawMoments {
  std::vector<double> values;
  std::vector<double> magnitudes;
};

// Evaluates the map once per node and accumulates every spec in a fixed order.
inline RawMoments integrate_specs(const ConformalMapModel& map, const std::vector<MomentSpec>& specs,
                                  QuadratureGrid grid) {
  if (grid.radial_nodes < 8 || grid.angular_nodes < 8) {
    throw std::invalid_argument("region_moment: grids need at least 8 nodes per direction");
  }
  const Sector sec = sector_of(map);
  const GaussRule rr = gauss_legendre(grid.radial_nodes, 0.0, 1.0);
  const GaussRule rt = gauss_legendre(grid.angular_nodes, sec.theta_min, sec.theta_max);
  RawMoments out{std::vector<double>(specs.size(), 0.0), std::vector<double>(specs.size(), 0.0)};
  std::vector<double> row(specs.size()), row_mag(specs.size());
  for (std::size_t i = 0; i < rr.nodes.size(); ++i) {
    const double r = rr.nodes[i];
    std::fill(row.begin(), row.end(), 0.0);
    std::fill(row_mag.begin(), row_mag.end(), 0.0);
    for (std::size_t j = 0; j < rt.nodes.size(); ++j) {
      const MapJet jet = eval_polar(map, r, rt.nodes[j], 1);
      const double jac = std::norm(jet.deriv) * rt.weights[j];
      const double absz = std::abs(jet.value);
      for (std::size_t k = 0; k < specs.size(); ++k) {
        row[k] += moment_integrand(jet.value, specs[k]) * jac;
        row_mag[k] += std::pow(absz, specs[k].exponent) * jac;
      }
    }
    const double w = rr.weights[i] * r;
    for (std::size_t k = 0; k < specs.size(); ++k) {
      out.values[k] += w * row[k];
      out.magnitudes[k] += w * row_mag[k];
    }
  }
  return out;
}

inline std::vector<MomentResult> refine_and_check(const ConformalMapModel& map,
                                                  const std::vector<MomentSpec>& specs,
                                                  QuadratureGrid grid, double rel_tol) {
  const RawMoments coarse = integrate_specs(map, specs, grid);
  const RawMoments fine = integrate_specs(map, specs, grid.refined());
  std::vector<MomentResult> out;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    MomentResult m{fine.values[k], std::abs(fine.values[k] - coarse.values[k]), fine.magnitudes[k]};
    if (m.error_estimate > 10.0 * rel_tol * m.magnitude) {
      throw ConvergenceError("region_moment: grid refinement changed the moment by " +
                                 std::to_string(m.error_estimate),
                             static_cast<std::size_t>(grid.refined().radial_nodes) *
                                 grid.refined().angular_nodes,
                             m.error_estimate);
    }
    out.push_back(m);
  }
  return out;
}

inline void require_matching_b(const ConformalMapModel& map, double b) {
  if (map.angle_param != b) throw std::invalid_argument("moments: map does not match b");
}

}  // namespace detail

/// Moment of Re(z^s (log z)^{0|1}) over the image region, computed as
/// int_sector u(f(zeta)) |f'(zeta)|^2 r dr dtheta on `grid` and on the refined grid.
/// Throws ConvergenceError when refinement moves the value by more than
/// 10 * rel_tol * int |z|^s.
inline MomentResult region_moment(const ConformalMapModel& map, double b, const MomentSpec& spec,
                                  QuadratureGrid grid = {}, double rel_tol = 1e-6) {
  detail::require_matching_b(map, b);
  if (!(spec.exponent > -2.0)) throw std::invalid_argument("region_moment: need s > -2");
  return detail::refine_and_check(map, {spec}, grid, rel_tol).front();
}

/// Area of the image region, int_sector |f'|^2.
inline MomentResult region_area(const ConformalMapModel& map, QuadratureGrid grid = {},
                                double rel_tol = 1e-6) {
  MomentSpec s;
  s.exponent = 0.0;
  return detail::refine_and_check(map, {s}, grid, rel_tol).front();
}

/// Area from the coefficients: for b <= 1 the powers zeta^(k/b) in f' are orthogonal on
/// the sector, giving pi b sum_k (1 + k/b) a_k^2.
inline double series_area(const ConformalMapModel& map) {
  if (map.kind != MapKind::kSeriesOnly) throw std::invalid_argument("series_area: needs a series map");
  const double b = map.angle_param;
  if (b > 1.0) throw std::invalid_argument("series_area: needs b <= 1");
  double s = 0.0;
  for (std::size_t k = 0; k < map.coefficients.size(); ++k) {
    const double a = map.coefficients[k];
    s += (1.0 + k / b) * a * a;
  }
  return kPi * b * s * map.scale * map.scale;
}

/// alpha = arccos(p) / (2 pi), in [0, 1/4].
inline double alpha_of_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("alpha_of_p: p must lie in [0, 1]");
  return std::acos(p) / kTwoPi;
}

struct MomentRow {
  double exponent = 0.0;
  bool with_log = false;
  double value = 0.0;
  double error_estimate = 0.0;
  double magnitude = 0.0;
  /// Whether the vanishing identity covers this row. The source exponent 1/(2b) (n = 0)
  /// is listed for completeness; its moment is positive.
  bool expected_zero = true;
};

struct MomentSuiteOptions {
  QuadratureGrid grid;
  double rel_tol = 1e-6;
  /// Use the exponents n +- alpha_of_p(p), n = 1..n_max, instead of (2n+1)/(2b).
  /// At p = 1 the family is n together with the log moments of n.
  std::optional<double> p;
};

/// Exponents for moment_suite, with the flag telling whether each should vanish.
inline std::vector<MomentRow> moment_suite_rows(double b, int n_max, std::optional<double> p) {
  if (n_max < 1) throw std::invalid_argument("moment_suite: n_max must be at least 1");
  std::vector<MomentRow> rows;
  if (!p) {
    for (int n = 0; n <= n_max; ++n) {
      MomentRow r;
      r.exponent = (2.0 * n + 1.0) / (2.0 * b);
      r.expected_zero = n >= 1;
      rows.push_back(r);
    }
    return rows;
  }
  const double alpha = alpha_of_p(*p);
  for (int n = 1; n <= n_max; ++n) {
    if (alpha == 0.0) {
      rows.push_back({static_cast<double>(n), false});
      rows.push_back({static_cast<double>(n), true});
    } else {
      rows.push_back({n - alpha, false});
      rows.push_back({n + alpha, false});
    }
  }
  return rows;
}

/// Moment table of the region of `map` over the exponent family.
inline std::vector<MomentRow> moment_suite(const ConformalMapModel& map, double b, int n_max,
                                           const MomentSuiteOptions& opts = {}) {
  detail::require_matching_b(map, b);
  std::vector<MomentRow> rows = moment_suite_rows(b, n_max, opts.p);
  const BranchConvention branch = sector_of(map).branch;
  std::vector<MomentSpec> specs;
  for (const auto& r : rows) specs.push_back({r.exponent, r.with_log, branch});
  const std::vector<MomentResult> res = detail::refine_and_check(map, specs, opts.grid, opts.rel_tol);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k].value = res[k].value;
    rows[k].error_estimate = res[k].error_estimate;
    rows[k].magnitude = res[k].magnitude;
  }
  return rows;
}

/// Midpoint-rule moment of a cluster: cells of side `spacing` centred at spacing * (x, y).
/// Also returns sum |z_c|^s spacing^2 as the magnitude.
inline MomentResult discrete_region_moment(const std::vector<Site>& cells, double spacing,
                                           const MomentSpec& spec) {
  if (!(spacing > 0.0)) throw std::invalid_argument("discrete_region_moment: spacing must be > 0");
  MomentResult out;
  const double area = spacing * spacing;
  for (const Site& c : cells) {
    const Complex z(spacing * c.x, spacing * c.y);
    out.value += moment_integrand(z, spec) * area;
    out.magnitude += std::pow(std::abs(z), spec.exponent) * area;
  }
  return out;
}

inline MomentResult discrete_region_moment(const LatticeCluster& cluster, double spacing,
                                           const MomentSpec& spec) {
  return discrete_region_moment(cluster.occupied, spacing, spec);
}

inline void write_moments_csv(std::ostream& os, const std::vector<MomentRow>& rows) {
  os << "exponent,with_log,value,error_estimate\n" << std::setprecision(17);
  for (const auto& r : rows) {
    os << r.exponent << ',' << (r.with_log ? 1 : 0) << ',' << r.value << ',' << r.error_estimate
       << '\n';
  }
}

inline nlohmann::json moments_json(const std::vector<MomentRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"exponent", r.exponent},
                   {"with_log", r.with_log},
                   {"value", r.value},
                   {"error_estimate", r.error_estimate},
                   {"magnitude", r.magnitude},
                   {"relative", r.magnitude > 0.0 ? std::abs(r.value) / r.magnitude : 0.0},
                   {"expected_zero", r.expected_zero}});
  }
  return arr;
}

}  // namespace hsl
