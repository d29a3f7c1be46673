#pragma once

// Unit-area normalization of lattice clusters and analytic regions, and two shape
// metrics: symmetric-difference area (exact per scanline) and Hausdorff distance.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <ostream>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hsl/conformal_maps.hpp"
#include "hsl/lattice.hpp"

namespace hsl {

using Polygon = std::vector<Complex>;

struct NormalizedShape {
  Polygon boundary;  ///< closed polyline, last vertex joined to the first
  double area = 1.0;
  bool origin_inside = false;
  std::string label;
};

/// Shoelace area, positive for counterclockwise polygons.
inline double signed_area(const Polygon& p) {
  double s = 0.0;
  for (std::size_t i = 0, n = p.size(); i < n; ++i) {
    const Complex a = p[i], b = p[(i + 1) % n];
    s += a.real() * b.imag() - b.real() * a.imag();
  }
  return 0.5 * s;
}

/// Even-odd point containment.
inline bool point_in_polygon(const Polygon& p, Complex q) {
  bool in = false;
  for (std::size_t i = 0, n = p.size(), j = n - 1; i < n; j = i++) {
    const Complex a = p[i], b = p[j];
    if ((a.imag() > q.imag()) != (b.imag() > q.imag())) {
      const double x = a.real() + (q.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
      if (q.real() < x) in = !in;
    }
  }
  return in;
}

inline double point_segment_distance(Complex q, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  double t = len2 > 0.0 ? ((q - a) * std::conj(ab)).real() / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(q - (a + t * ab));
}

inline double distance_to_polyline(Complex q, const Polygon& p) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0, n = p.size(); i < n; ++i) {
    d = std::min(d, point_segment_distance(q, p[i], p[(i + 1) % n]));
  }
  return d;
}

inline bool origin_in_or_on(const Polygon& p) {
  return point_in_polygon(p, Complex(0.0, 0.0)) || distance_to_polyline(Complex(0.0, 0.0), p) < 1e-12;
}

/// True when every site is reachable from the first through lattice neighbours.
inline bool lattice_connected(const std::vector<Site>& cells) {
  if (cells.empty()) return true;
  const std::set<Site> all(cells.begin(), cells.end());
  std::set<Site> seen{cells.front()};
  std::queue<Site> q;
  q.push(cells.front());
  while (!q.empty()) {
    const Site c = q.front();
    q.pop();
    for (unsigned d = 0; d < 4; ++d) {
      const Site n{c.x + detail::kDx[d], c.y + detail::kDy[d]};
      if (all.count(n) && seen.insert(n).second) q.push(n);
    }
  }
  return seen.size() == all.size();
}

/// Lattice-connected component of `cells` containing `root` (empty if root is absent).
inline std::vector<Site> connected_component(const std::vector<Site>& cells, Site root) {
  const std::set<Site> all(cells.begin(), cells.end());
  if (!all.count(root)) return {};
  std::set<Site> seen{root};
  std::queue<Site> q;
  q.push(root);
  while (!q.empty()) {
    const Site c = q.front();
    q.pop();
    for (unsigned d = 0; d < 4; ++d) {
      const Site n{c.x + detail::kDx[d], c.y + detail::kDy[d]};
      if (all.count(n) && seen.insert(n).second) q.push(n);
    }
  }
  return {seen.begin(), seen.end()};
}

/// Outer contour of the union of unit cells centred at the sites, counterclockwise, in
/// lattice units with collinear vertices removed. Where two cells touch only at a
/// corner the tracer turns left, so the contour stays on its own cell and never runs
/// into an enclosed hole.
inline Polygon trace_outer_contour(const std::vector<Site>& cells) {
  if (cells.empty()) throw std::invalid_argument("trace_outer_contour: no cells");
  const std::set<Site> occ(cells.begin(), cells.end());
  // Corner (i, j) is the point (i - 1/2, j - 1/2). Edge directions: 0 E, 1 N, 2 W, 3 S.
  static constexpr int ex[4] = {1, 0, -1, 0};
  static constexpr int ey[4] = {0, 1, 0, -1};
  std::map<std::pair<int, int>, std::vector<int>> out;  // start corner -> directions
  for (const Site& c : occ) {
    if (!occ.count({c.x, c.y - 1})) out[{c.x, c.y}].push_back(0);
    if (!occ.count({c.x + 1, c.y})) out[{c.x + 1, c.y}].push_back(1);
    if (!occ.count({c.x, c.y + 1})) out[{c.x + 1, c.y + 1}].push_back(2);
    if (!occ.count({c.x - 1, c.y})) out[{c.x, c.y + 1}].push_back(3);
  }
  std::set<std::pair<std::pair<int, int>, int>> used;
  Polygon best;
  double best_area = -std::numeric_limits<double>::infinity();
  for (const auto& [start, dirs] : out) {
    for (int d0 : dirs) {
      if (used.count({start, d0})) continue;
      std::vector<std::pair<int, int>> verts;
      std::pair<int, int> v = start;
      int d = d0;
      for (;;) {
        used.insert({v, d});
        verts.push_back(v);
        v = {v.first + ex[d], v.second + ey[d]};
        const auto& next = out.at(v);
        int chosen = next.front();
        if (next.size() > 1) {
          const int left = (d + 1) & 3;
          chosen = std::find(next.begin(), next.end(), left) != next.end() ? left : next.back();
        }
        d = chosen;
        if (v == start && d == d0) break;
      }
      Polygon poly;
      const std::size_t n = verts.size();
      for (std::size_t i = 0; i < n; ++i) {
        const auto& a = verts[(i + n - 1) % n];
        const auto& b = verts[i];
        const auto& c = verts[(i + 1) % n];
        const bool collinear = (b.first - a.first) * (c.second - b.second) ==
                               (b.second - a.second) * (c.first - b.first);
        if (!collinear) poly.emplace_back(b.first - 0.5, b.second - 0.5);
      }
      const double a = signed_area(poly);
      if (a > best_area) {
        best_area = a;
        best = std::move(poly);
      }
    }
  }
  return best;
}

inline NormalizedShape scale_to_unit_area(Polygon poly, std::string label) {
  const double a = signed_area(poly);
  if (!(std::abs(a) > 0.0)) throw std::domain_error("normalize: polygon has zero area");
  if (a < 0.0) std::reverse(poly.begin(), poly.end());
  const double s = 1.0 / std::sqrt(std::abs(a));
  for (Complex& z : poly) z *= s;
  NormalizedShape out;
  out.boundary = std::move(poly);
  out.area = signed_area(out.boundary);
  out.origin_inside = origin_in_or_on(out.boundary);
  out.label = std::move(label);
  return out;
}

/// Cluster outline scaled to unit area. The scale is the inverse square root of the
/// contour's area, which equals N when the cluster has no holes.
inline NormalizedShape normalize_cluster(const std::vector<Site>& cells, std::string label = "cluster") {
  if (cells.size() < 100) throw std::invalid_argument("normalize_cluster: need N >= 100");
  if (!lattice_connected(cells)) throw std::invalid_argument("normalize_cluster: cluster is disconnected");
  return scale_to_unit_area(trace_outer_contour(cells), std::move(label));
}

inline NormalizedShape normalize_cluster(const LatticeCluster& c) {
  return normalize_cluster(c.occupied, std::string(to_string(c.model)) + ":" + to_string(c.bc));
}

/// Rotation taking the analytic region into the lattice frame: the quarter-plane
/// region is symmetric about the x-axis while the lattice quadrant is x, y >= 0.
inline double lattice_frame_rotation(double b) { return b == 0.25 ? kPi / 4 : 0.0; }

/// Polygon through boundary_sample(map, n), before normalization.
inline Polygon map_region_polygon(const ConformalMapModel& map, int n, double rotation = 0.0) {
  Polygon p;
  const Complex rot = std::polar(1.0, rotation);
  for (const auto& bp : boundary_sample(map, n)) {
    if (!p.empty() && std::abs(bp.z * rot - p.back()) == 0.0) continue;
    p.push_back(bp.z * rot);
  }
  if (p.size() > 1 && p.front() == p.back()) p.pop_back();
  return p;
}

/// Analytic region outline scaled by area^(-1/2), with the polygon's own area.
inline NormalizedShape normalize_map_region(const ConformalMapModel& map, double b, int n,
                                            double rotation = 0.0) {
  if (map.angle_param != b) throw std::invalid_argument("normalize_map_region: map does not match b");
  if (n < 256) throw std::invalid_argument("normalize_map_region: need n >= 256");
  return scale_to_unit_area(map_region_polygon(map, n, rotation),
                            std::string(to_string(map.kind)) + ":b=" + std::to_string(b));
}

/// Sites whose centres lie inside `shape` on a lattice of spacing (1/n_cells)^(1/2),
/// restricted to the component of the origin (which is always included).
inline std::vector<Site> rasterize_shape(const NormalizedShape& shape, std::uint64_t n_cells) {
  if (n_cells < 1) throw std::invalid_argument("rasterize_shape: need n_cells >= 1");
  const double h = 1.0 / std::sqrt(static_cast<double>(n_cells));
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  for (Complex z : shape.boundary) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  }
  std::vector<Site> cells{{0, 0}};
  for (int y = static_cast<int>(std::floor(ymin / h)); y <= static_cast<int>(std::ceil(ymax / h)); ++y) {
    for (int x = static_cast<int>(std::floor(xmin / h)); x <= static_cast<int>(std::ceil(xmax / h)); ++x) {
      if ((x != 0 || y != 0) && point_in_polygon(shape.boundary, Complex(x * h, y * h))) {
        cells.push_back({x, y});
      }
    }
  }
  return connected_component(cells, {0, 0});
}

/// Sites occupied in more than half of the clusters, restricted to the origin's component.
inline std::vector<Site> majority_cluster(const std::vector<std::vector<Site>>& clusters) {
  if (clusters.empty()) throw std::invalid_argument("majority_cluster: no clusters");
  std::map<Site, std::size_t> votes;
  for (const auto& c : clusters)
    for (const Site& s : c) ++votes[s];
  std::vector<Site> keep;
  for (const auto& [s, v] : votes)
    if (2 * v > clusters.size()) keep.push_back(s);
  return connected_component(keep, {0, 0});
}

// ---------------------------------------------------------------------------
// Metrics

namespace detail {

// Even-odd crossings of the horizontal line at height y.
inline void scanline_crossings(const Polygon& p, double y, std::vector<double>& xs) {
  xs.clear();
  for (std::size_t i = 0, n = p.size(), j = n - 1; i < n; j = i++) {
    const Complex a = p[i], b = p[j];
    if ((a.imag() > y) != (b.imag() > y)) {
      xs.push_back(a.real() + (y - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag()));
    }
  }
  std::sort(xs.begin(), xs.end());
}

enum class Combine { kXor, kAnd };

// Midpoint rule in y with `rows` rows; the x-extent of each row is exact.
inline double combined_area(const Polygon& a, const Polygon& b, int rows, Combine op) {
  double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
  for (const Polygon* p : {&a, &b})
    for (Complex z : *p) {
      ymin = std::min(ymin, z.imag());
      ymax = std::max(ymax, z.imag());
    }
  const double dy = (ymax - ymin) / rows;
  std::vector<double> xa, xb;
  std::vector<std::pair<double, int>> ev;
  double total = 0.0;
  for (int r = 0; r < rows; ++r) {
    const double y = ymin + (r + 0.5) * dy;
    scanline_crossings(a, y, xa);
    scanline_crossings(b, y, xb);
    ev.clear();
    for (double x : xa) ev.push_back({x, 0});
    for (double x : xb) ev.push_back({x, 1});
    std::sort(ev.begin(), ev.end());
    bool in[2] = {false, false};
    double len = 0.0;
    for (std::size_t k = 0; k < ev.size(); ++k) {
      in[ev[k].second] = !in[ev[k].second];
      if (k + 1 < ev.size()) {
        const bool on = op == Combine::kXor ? in[0] != in[1] : in[0] && in[1];
        if (on) len += ev[k + 1].first - ev[k].first;
      }
    }
    total += len * dy;
  }
  return total;
}

}  // namespace detail

struct RasterOptions {
  int grid = 1024;       ///< initial number of scanlines
  double tol = 1e-3;     ///< stop when doubling the grid moves the result by less
  int max_grid = 65536;
};

struct RasterResult {
  double value = 0.0;
  int grid = 0;  ///< scanlines used for the returned value
};

namespace detail {

inline RasterResult refine_area(const Polygon& a, const Polygon& b, Combine op, const RasterOptions& o) {
  int g = std::max(1, o.grid);
  double prev = combined_area(a, b, g, op);
  while (2 * g <= o.max_grid) {
    const double next = combined_area(a, b, 2 * g, op);
    g *= 2;
    const bool done = std::abs(next - prev) < o.tol;
    prev = next;
    if (done) break;
  }
  return {prev, g};
}

}  // namespace detail

/// Area of the symmetric difference of two unit-area shapes, in [0, 2].
inline RasterResult symmetric_difference(const NormalizedShape& a, const NormalizedShape& b,
                                         const RasterOptions& opts = {}) {
  return detail::refine_area(a.boundary, b.boundary, detail::Combine::kXor, opts);
}

inline double symmetric_difference_fraction(const NormalizedShape& a, const NormalizedShape& b,
                                            const RasterOptions& opts = {}) {
  return symmetric_difference(a, b, opts).value;
}

inline RasterResult intersection_area(const NormalizedShape& a, const NormalizedShape& b,
                                      const RasterOptions& opts = {}) {
  return detail::refine_area(a.boundary, b.boundary, detail::Combine::kAnd, opts);
}

/// Symmetric Hausdorff distance between the outlines, sampling each polygon at its
/// vertices and edge midpoints and measuring exact distance to the other polyline.
inline double hausdorff_distance(const NormalizedShape& a, const NormalizedShape& b) {
  const auto directed = [](const Polygon& p, const Polygon& q) {
    double d = 0.0;
    for (std::size_t i = 0, n = p.size(); i < n; ++i) {
      d = std::max(d, distance_to_polyline(p[i], q));
      d = std::max(d, distance_to_polyline(0.5 * (p[i] + p[(i + 1) % n]), q));
    }
    return d;
  };
  return std::max(directed(a.boundary, b.boundary), directed(b.boundary, a.boundary));
}

// ---------------------------------------------------------------------------
// Reports

struct ComparisonReport {
  std::string shape_a;
  std::string shape_b;
  double sym_diff = 0.0;
  double hausdorff = 0.0;
  int grid = 0;
  std::vector<std::uint64_t> seeds;
};

inline ComparisonReport compare_shapes(const NormalizedShape& a, const NormalizedShape& b,
                                       std::vector<std::uint64_t> seeds = {},
                                       const RasterOptions& opts = {}) {
  const RasterResult r = symmetric_difference(a, b, opts);
  return {a.label, b.label, r.value, hausdorff_distance(a, b), r.grid, std::move(seeds)};
}

inline nlohmann::json to_json(const ComparisonReport& r) {
  return {{"shape_a", r.shape_a}, {"shape_b", r.shape_b}, {"sym_diff", r.sym_diff},
          {"hausdorff", r.hausdorff}, {"grid", r.grid}, {"seeds", r.seeds}};
}

/// Two outlined polygons; shape a in blue, shape b in red, y pointing up.
inline void write_svg_overlay(std::ostream& os, const NormalizedShape& a, const NormalizedShape& b,
                              int pixels = 600) {
  double lo = -0.1, hi = 0.1;
  for (const Polygon* p : {&a.boundary, &b.boundary})
    for (Complex z : *p) {
      lo = std::min({lo, z.real(), z.imag()});
      hi = std::max({hi, z.real(), z.imag()});
    }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  const double s = pixels / (hi - lo);
  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pixels << "\" height=\"" << pixels
     << "\" viewBox=\"0 0 " << pixels << ' ' << pixels << "\">\n";
  const auto poly = [&](const NormalizedShape& sh, const char* colour) {
    os << "<polygon fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1\" points=\"";
    for (Complex z : sh.boundary) os << (z.real() - lo) * s << ',' << (hi - z.imag()) * s << ' ';
    os << "\"><title>" << sh.label << "</title></polygon>\n";
  };
  poly(a, "blue");
  poly(b, "red");
  os << "<circle cx=\"" << -lo * s << "\" cy=\"" << hi * s << "\" r=\"2\" fill=\"black\"/>\n</svg>\n";
}

}  // namespace hsl
