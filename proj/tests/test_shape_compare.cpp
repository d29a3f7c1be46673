#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hsl/shape_compare.hpp"

using hsl::Complex;
using hsl::kPi;
using hsl::NormalizedShape;
using hsl::Site;

namespace {

std::vector<Site> block(int k) {
  std::vector<Site> v;
  for (int y = 0; y < k; ++y)
    for (int x = 0; x < k; ++x) v.push_back({x - k / 2, y - k / 2});
  return v;
}

NormalizedShape circle(double r, int n, Complex c = 0.0) {
  NormalizedShape s;
  for (int i = 0; i < n; ++i) s.boundary.push_back(c + std::polar(r, 2 * kPi * i / n));
  s.area = hsl::signed_area(s.boundary);
  s.label = "circle";
  return s;
}

NormalizedShape square(double half, Complex c = 0.0) {
  NormalizedShape s;
  s.boundary = {c + Complex(-half, -half), c + Complex(half, -half), c + Complex(half, half),
                c + Complex(-half, half)};
  s.area = 4 * half * half;
  s.label = "square";
  return s;
}

NormalizedShape translated(NormalizedShape s, Complex t) {
  for (Complex& z : s.boundary) z += t;
  return s;
}

}  // namespace

TEST(Contour, SquareBlockIsUnitSquare) {
  const auto s = hsl::normalize_cluster(block(11));
  ASSERT_EQ(s.boundary.size(), 4u);
  EXPECT_NEAR(s.area, 1.0, 1e-12);
  for (Complex z : s.boundary) {
    EXPECT_NEAR(std::abs(z.real()), 0.5, 1e-12);
    EXPECT_NEAR(std::abs(z.imag()), 0.5, 1e-12);
  }
  EXPECT_TRUE(s.origin_inside);
}

TEST(Contour, HoleIsNotPartOfOuterContour) {
  // 12x12 ring of width 2 around a 8x8 hole: outer contour area 144.
  std::vector<Site> ring;
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x < 12; ++x)
      if (x < 2 || x >= 10 || y < 2 || y >= 10) ring.push_back({x, y});
  const auto poly = hsl::trace_outer_contour(ring);
  EXPECT_NEAR(hsl::signed_area(poly), 144.0, 1e-12);
  EXPECT_EQ(poly.size(), 4u);
}

TEST(Contour, DiagonalPinchStaysOnOneSide) {
  // Two blocks touching at one corner, joined by a long U-shaped path.
  std::vector<Site> cells{{0, 0}, {1, 1}};
  for (int x = -3; x <= 0; ++x) cells.push_back({x, -1});
  cells.push_back({-3, 0});
  for (int y = 0; y <= 3; ++y) cells.push_back({-3, y});
  for (int x = -3; x <= 1; ++x) cells.push_back({x, 3});
  cells.push_back({1, 2});
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  const auto poly = hsl::trace_outer_contour(cells);
  // The contour encloses every cell plus the pocket and has only half-integer corners.
  const double a = hsl::signed_area(poly);
  EXPECT_GE(a, static_cast<double>(cells.size()));
  for (Complex z : poly) {
    EXPECT_DOUBLE_EQ(z.real() - std::floor(z.real()), 0.5);
    EXPECT_DOUBLE_EQ(z.imag() - std::floor(z.imag()), 0.5);
  }
}

TEST(Normalize, Preconditions) {
  EXPECT_THROW(hsl::normalize_cluster(std::vector<Site>{{0, 0}}), std::invalid_argument);
  auto two = block(10);
  two.push_back({20, 20});
  EXPECT_THROW(hsl::normalize_cluster(two), std::invalid_argument);
  EXPECT_THROW(hsl::normalize_map_region(hsl::make_negaxis_map(), 1.0, 100), std::invalid_argument);
  EXPECT_THROW(hsl::normalize_map_region(hsl::make_negaxis_map(), 0.5, 512), std::invalid_argument);
}

TEST(Normalize, IdentityMapIsUnitAreaCircle) {
  const auto s = hsl::normalize_map_region(hsl::make_identity_map(), 1.0, 1024);
  EXPECT_NEAR(s.area, 1.0, 1e-9);
  // Every b = 1 outline carries the out-and-back slit to the vertex f(0) = 0.
  for (Complex z : s.boundary) {
    if (std::abs(z) > 1e-3) {
      EXPECT_NEAR(std::abs(z), 1.0 / std::sqrt(kPi), 1e-5);
    }
  }
}

TEST(Normalize, NegAxisRegionIsTwiceAsThickToTheRight) {
  // Thickness along the real axis: the outline meets it at f(1) and at the slit tip f(-1).
  // Off the axis the outline reaches further left than the slit tip.
  const auto s = hsl::normalize_map_region(hsl::make_negaxis_map(), 1.0, 1024);
  double right = 0.0, left = 0.0, leftmost = 0.0;
  for (Complex z : s.boundary) {
    leftmost = std::min(leftmost, z.real());
    if (std::abs(z.imag()) > 1e-12) continue;
    right = std::max(right, z.real());
    left = std::min(left, z.real());
  }
  EXPECT_NEAR(right / -left, 2.0, 1e-9);
  EXPECT_LT(leftmost, 1.2 * left);
  EXPECT_NEAR(s.area, 1.0, 1e-9);
}

TEST(Normalize, PolygonAreaConvergesInN) {
  for (const auto& [map, b] : std::vector<std::pair<hsl::ConformalMapModel, double>>{
           {hsl::make_negaxis_map(), 1.0}, {hsl::make_halfplane_map(), 0.5},
           {hsl::make_angle_map(0.25), 0.25}, {hsl::make_doubled_map(), 2.0}}) {
    const double a = std::abs(hsl::signed_area(hsl::map_region_polygon(map, 1024)));
    const double c = std::abs(hsl::signed_area(hsl::map_region_polygon(map, 2048)));
    EXPECT_LT(std::abs(a - c), 1e-4) << b;
    EXPECT_NEAR(hsl::normalize_map_region(map, b, 1024).area, 1.0, 1e-9);
  }
}

TEST(Normalize, QuarterPlaneRotatesIntoLatticeQuadrant) {
  const auto s = hsl::normalize_map_region(hsl::make_angle_map(0.25), 0.25, 512, hsl::lattice_frame_rotation(0.25));
  for (Complex z : s.boundary) {
    EXPECT_GE(z.real(), -1e-12);
    EXPECT_GE(z.imag(), -1e-12);
  }
}

TEST(SymmetricDifference, IdenticalAndSymmetric) {
  const auto a = hsl::normalize_map_region(hsl::make_negaxis_map(), 1.0, 512);
  const auto b = hsl::normalize_map_region(hsl::make_halfplane_map(), 0.5, 512);
  EXPECT_NEAR(hsl::symmetric_difference_fraction(a, a), 0.0, 1e-12);
  EXPECT_NEAR(hsl::symmetric_difference_fraction(a, b), hsl::symmetric_difference_fraction(b, a), 1e-12);
  EXPECT_NEAR(hsl::hausdorff_distance(a, b), hsl::hausdorff_distance(b, a), 1e-15);
  EXPECT_NEAR(hsl::hausdorff_distance(a, a), 0.0, 1e-15);
}

TEST(SymmetricDifference, DiskVersusSquareClosedForm) {
  const double r = 1.0 / std::sqrt(kPi), d = 0.5;
  // Disk minus the four circular segments beyond the square's sides.
  const double segment = r * r * std::acos(d / r) - d * std::sqrt(r * r - d * d);
  const double overlap = 1.0 - 4 * segment;
  const auto disk = circle(r, 20000);
  const auto sq = square(0.5);
  // Correct the 20000-gon area to the disk area for the comparison.
  const double poly_deficit = 1.0 - disk.area;
  const double got_overlap = hsl::intersection_area(disk, sq).value;
  EXPECT_NEAR(got_overlap, overlap, 1e-3 + poly_deficit);
  EXPECT_NEAR(hsl::symmetric_difference_fraction(disk, sq), 2 * (1 - overlap), 2e-3 + poly_deficit);
}

TEST(SymmetricDifference, TranslationInvariance) {
  const auto a = hsl::normalize_map_region(hsl::make_negaxis_map(), 1.0, 512);
  const auto b = hsl::normalize_map_region(hsl::make_identity_map(), 1.0, 512);
  const Complex t(0.37, -1.2);
  EXPECT_NEAR(hsl::symmetric_difference_fraction(a, b), hsl::symmetric_difference_fraction(translated(a, t), translated(b, t)),
              1e-9);
  EXPECT_NEAR(hsl::hausdorff_distance(a, b), hsl::hausdorff_distance(translated(a, t), translated(b, t)), 1e-9);
}

TEST(Hausdorff, ConcentricCircles) {
  const double r = 0.5, delta = 0.03;
  EXPECT_NEAR(hsl::hausdorff_distance(circle(r, 4000), circle(r + delta, 4000)), delta, 1e-6);
}

TEST(Hausdorff, IdlaDiskCalibration) {
  const auto c = hsl::run_idla(10000, hsl::BoundaryCondition::none(), 2024);
  const auto s = hsl::normalize_cluster(c);
  const double h = hsl::hausdorff_distance(s, circle(1.0 / std::sqrt(kPi), 4096));
  EXPECT_LT(h, 0.05);
}

TEST(Rasterize, MapRegionRoundTrip) {
  const auto region = hsl::normalize_map_region(hsl::make_halfplane_map(), 0.5, 2048);
  const auto cells = hsl::rasterize_shape(region, 100000);
  EXPECT_NEAR(static_cast<double>(cells.size()), 100000.0, 2000.0);
  const auto back = hsl::normalize_cluster(cells);
  EXPECT_LT(hsl::symmetric_difference_fraction(back, region), 0.01);
}

TEST(Majority, VotesAndKeepsOriginComponent) {
  const std::vector<std::vector<Site>> runs{{{0, 0}, {1, 0}, {5, 5}}, {{0, 0}, {1, 0}, {5, 5}}, {{0, 0}, {0, 1}}};
  const auto m = hsl::majority_cluster(runs);
  EXPECT_EQ(m, (std::vector<Site>{{0, 0}, {1, 0}}));
}

TEST(Report, JsonAndSvg) {
  const auto a = hsl::normalize_map_region(hsl::make_negaxis_map(), 1.0, 512);
  const auto b = hsl::normalize_map_region(hsl::make_identity_map(), 1.0, 512);
  const auto rep = hsl::compare_shapes(a, b, {1, 2});
  const auto j = hsl::to_json(rep);
  for (const char* k : {"shape_a", "shape_b", "sym_diff", "hausdorff", "grid", "seeds"}) EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_GE(j["grid"].get<int>(), 1024);
  EXPECT_EQ(j["seeds"].size(), 2u);
  std::ostringstream os;
  hsl::write_svg_overlay(os, a, b);
  const std::string svg = os.str();
  EXPECT_NE(svg.find("stroke=\"blue\""), std::string::npos);
  EXPECT_NE(svg.find("stroke=\"red\""), std::string::npos);
  EXPECT_EQ(svg.rfind("</svg>\n"), svg.size() - 7);
}
