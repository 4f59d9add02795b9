#include <algorithm>
#include <cmath>
#include <numeric>

#include <doctest.h>

#include "dissolve/geometry.hpp"
#include "dissolve/physchem.hpp"

using namespace dissolve;
using namespace dissolve::geometry;

namespace {

constexpr double um = 1e-6;

levelset::Grid2D grid_for(const ShapeSpec& s, double dx, double padding = 1.3) {
  const auto [lo, hi] = bounding_box(s);
  const double extent = std::max(hi.x - lo.x, hi.y - lo.y) * padding;
  return levelset::Grid2D::centered(0.5 * (lo + hi), static_cast<int>(std::ceil(extent / dx)) + 8,
                                    dx);
}

// Polar quadrature of the superellipse area, independent of the Gamma closed form.
double superellipse_area_quadrature(double a, double b, double n) {
  const int m = 200000;
  double sum = 0.0;
  for (int k = 0; k < m; ++k) {
    const double th = (k + 0.5) * 2.0 * kPi / m;
    const double r = std::pow(std::pow(std::abs(std::cos(th) / a), n) +
                                  std::pow(std::abs(std::sin(th) / b), n),
                              -1.0 / n);
    sum += 0.5 * r * r;
  }
  return sum * 2.0 * kPi / m;
}

}  // namespace

TEST_CASE("shape areas and validation") {
  CHECK(area({Circle{2.0}}) == doctest::Approx(4.0 * kPi));
  CHECK(area({Rectangle{2.0, 3.0}}) == doctest::Approx(6.0));
  CHECK(area({Superellipse{2.0, 1.0, 2.0}}) == doctest::Approx(2.0 * kPi));
  CHECK(area({Superellipse{3.0, 2.0, 5.0}}) ==
        doctest::Approx(superellipse_area_quadrature(3.0, 2.0, 5.0)).epsilon(1e-8));
  CHECK_THROWS(ShapeSpec{Circle{-1.0}}.validate());
  CHECK_THROWS(ShapeSpec{Superellipse{1.0, 1.0, 1.5}}.validate());
  CHECK(min_width({Superellipse{3.0, 2.0, 4.0}}) == 4.0);
}

TEST_CASE("rotated bounding box") {
  const auto [lo, hi] = bounding_box({Rectangle{4.0, 2.0}, {1.0, 1.0}, kPi / 2});
  CHECK(lo.x == doctest::Approx(0.0));
  CHECK(hi.x == doctest::Approx(2.0));
  CHECK(lo.y == doctest::Approx(-1.0));
  CHECK(hi.y == doctest::Approx(3.0));
}

TEST_CASE("boundary sampling is dense and counter-clockwise") {
  for (const ShapeSpec& s : {ShapeSpec{Circle{5.0}}, ShapeSpec{Superellipse{4.0, 2.0, 39.0}},
                             ShapeSpec{Rectangle{3.0, 1.0}, {}, 0.3}}) {
    const auto pts = sample_boundary(s, 0.05);
    double signed_area = 0.0;
    double max_gap = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const Vec2 a = pts[k], b = pts[(k + 1) % pts.size()];
      signed_area += 0.5 * cross(a, b);
      max_gap = std::max(max_gap, norm(b - a));
    }
    CHECK(max_gap <= 0.05 * (1 + 1e-12));
    CHECK(signed_area == doctest::Approx(area(s)).epsilon(2e-3));
  }
}

TEST_CASE("signed distance initialization") {
  const double dx = 1 * um;
  const ShapeSpec c{Circle{50 * um}};
  const levelset::Grid2D g = grid_for(c, dx);
  const levelset::LevelSetField f = sdf_init(c, g);
  double worst = 0.0;
  for (int j = 0; j <= g.n; ++j) {
    for (int i = 0; i <= g.n; ++i) worst = std::max(worst, std::abs(f(i, j) - (norm(g.node(i, j)) - 50 * um)));
  }
  CHECK(worst <= 1e-3 * dx);

  const ShapeSpec sq{Rectangle{20 * um, 20 * um}};
  const levelset::Grid2D gs = levelset::Grid2D::centered({}, 40, dx);
  const levelset::LevelSetField fs = sdf_init(sq, gs);
  CHECK(fs(20, 20) == doctest::Approx(-10 * um).epsilon(1e-3));

  const levelset::Grid2D tight = levelset::Grid2D::centered({}, 102, dx);
  CHECK_THROWS_AS(sdf_init(c, tight), PaddingViolation);
}

TEST_CASE("contour of a circle") {
  const double dx = 1 * um, r = 50 * um;
  const ShapeSpec c{Circle{r}};
  const levelset::LevelSetField f = sdf_init(c, grid_for(c, dx));
  const Contour contour = extract_contour(f);
  REQUIRE(contour.size() == 1);
  CHECK(contour[0].closed);
  for (const Vec2& p : contour[0].points) CHECK(std::abs(norm(p) - r) <= dx / 2);
  CHECK(total_turning_angle(contour[0]) == doctest::Approx(2 * kPi).epsilon(1e-9));
  CHECK(std::abs(perimeter(contour) - 2 * kPi * r) / (2 * kPi * r) < 0.01);
  CHECK(std::abs(shoelace_area(contour) - kPi * r * r) / (kPi * r * r) < 0.01);
  CHECK(std::abs(interior_area(f) - shoelace_area(contour)) <= 2 * dx * dx);
}

TEST_CASE("contour of a square and an empty field") {
  const double dx = 0.5 * um;
  const ShapeSpec sq{Rectangle{30 * um, 30 * um}};
  const levelset::LevelSetField f = sdf_init(sq, grid_for(sq, dx));
  const Contour contour = extract_contour(f);
  REQUIRE(contour.size() == 1);
  CHECK(total_turning_angle(contour[0]) == doctest::Approx(2 * kPi).epsilon(1e-9));
  CHECK(std::abs(interior_area(f) - shoelace_area(contour)) <= 2 * dx * dx);

  levelset::LevelSetField empty(levelset::Grid2D{10, dx, {}});
  for (double& v : empty.values()) v = 1.0;
  CHECK(extract_contour(empty).empty());
  CHECK(interior_area(empty) == 0.0);
}

TEST_CASE("two separate blobs give two loops") {
  const levelset::Grid2D g = levelset::Grid2D::centered({}, 60, 1 * um);
  levelset::LevelSetField f(g);
  for (int j = 0; j <= g.n; ++j) {
    for (int i = 0; i <= g.n; ++i) {
      const Vec2 p = g.node(i, j);
      f(i, j) = std::min(norm(p - Vec2{-12 * um, 0}) - 8 * um, norm(p - Vec2{12 * um, 0}) - 8 * um);
    }
  }
  const Contour c = extract_contour(f);
  CHECK(c.size() == 2);
  CHECK(shoelace_area(c) == doctest::Approx(2 * kPi * 64e-12).epsilon(0.02));
}

TEST_CASE("superellipse n = 39 contour area matches quadrature") {
  const double a = 40 * um;
  const ShapeSpec s{Superellipse{a, a, 39.0}};
  const levelset::LevelSetField f = sdf_init(s, grid_for(s, a / 50));
  const double exact = superellipse_area_quadrature(a, a, 39.0);
  CHECK(std::abs(shoelace_area(extract_contour(f)) - exact) / exact < 0.01);
}

TEST_CASE("measure of a circle: K uniform, p and A accurate") {
  const physchem::DrugParams d = physchem::preset("theophylline-37");
  const double r = 50 * um;
  const ShapeSpec c{Circle{r}};
  const levelset::LevelSetField f = sdf_init(c, grid_for(c, 1 * um));
  const ContourMeasure m = measure(extract_contour(f), f, d);
  CHECK(std::abs(m.perimeter - 314.159 * um) / (314.159 * um) < 0.01);
  CHECK(std::abs(m.area - 7853.98e-12) / 7853.98e-12 < 0.01);
  const double k_exact = physchem::overall_k(r, r, d).k;
  for (const auto& s : m.segments) CHECK(std::abs(s.k - k_exact) / k_exact < 0.02);
  // constant integrand
  double lengths = 0.0;
  for (const auto& s : m.segments) lengths += s.length;
  ContourMeasure constant = m;
  for (auto& s : constant.segments) s.k = 3.0;
  CHECK(boundary_integral_k(constant) == doctest::Approx(3.0 * lengths).epsilon(1e-14));
  CHECK(std::abs(boundary_integral_k(constant) - 3.0 * 2 * kPi * r) / (3.0 * 2 * kPi * r) < 0.01);
  ContourMeasure doubled = m;
  for (auto& s : doubled.segments) s.k *= 2.0;
  CHECK(boundary_integral_k(doubled) == 2.0 * boundary_integral_k(m));
}

TEST_CASE("100 circles of 5.39 um have a total perimeter of 3386.41 um") {
  const physchem::DrugParams d = physchem::preset("griseofulvin-37");
  const ShapeSpec c{Circle{5.39 * um}};
  const levelset::LevelSetField f = sdf_init(c, grid_for(c, 2 * 5.39 * um / 20, 2.5));
  const double total = 100 * measure(extract_contour(f), f, d).perimeter;
  CHECK(std::abs(total - 3386.41 * um) / (3386.41 * um) < 0.005);
}

TEST_CASE("square: K at the corners exceeds K at mid-edge") {
  const physchem::DrugParams d = physchem::preset("theophylline-37");
  const double a = 44.3 * um;
  const ShapeSpec s{Superellipse{a, a, 39.0}};
  const levelset::LevelSetField f = sdf_init(s, grid_for(s, 1 * um, 2.0));
  const ContourMeasure m = measure(extract_contour(f), f, d);
  double corner = 0.0, mid = 0.0, best = 1e9;
  for (const auto& seg : m.segments) {
    const Vec2 p = seg.midpoint;
    if (std::abs(std::abs(p.x) - a) < 6 * um && std::abs(std::abs(p.y) - a) < 6 * um) {
      corner = std::max(corner, seg.k);
    }
    if (std::abs(p.x) < best && p.y > 0) {
      best = std::abs(p.x);
      mid = seg.k;
    }
  }
  CHECK(corner >= 2.0 * mid);
}

TEST_CASE("speed extension takes the value of the nearest segment") {
  const ShapeSpec c{Circle{10 * um}};
  const levelset::LevelSetField f = sdf_init(c, grid_for(c, 0.5 * um, 2.0));
  const Contour contour = extract_contour(f);
  std::vector<double> values;
  for (const auto& line : contour) {
    for (std::size_t k = 0; k + 1 < line.points.size(); ++k) {
      const Vec2 mid = 0.5 * (line.points[k] + line.points[k + 1]);
      values.push_back(mid.x > 0 ? 1.0 : -1.0);
    }
  }
  const auto& g = f.grid();
  const std::vector<double> ext = extend_from_contour(contour, values, g);
  REQUIRE(ext.size() == g.node_count());
  int mismatches = 0;
  for (int j = 0; j <= g.n; ++j) {
    for (int i = 0; i <= g.n; ++i) {
      const double x = g.node(i, j).x;
      if (std::abs(x) < 1.5 * um) continue;
      if (ext[g.index(i, j)] != (x > 0 ? 1.0 : -1.0)) ++mismatches;
    }
  }
  CHECK(mismatches == 0);
  CHECK(extend_from_contour({}, {}, g) == std::vector<double>(g.node_count(), 0.0));
}

TEST_CASE("reinitialization restores a signed distance") {
  const levelset::Grid2D g = levelset::Grid2D::centered({}, 60, 1 * um);
  levelset::LevelSetField f(g);
  for (int j = 0; j <= g.n; ++j) {
    for (int i = 0; i <= g.n; ++i) {
      const double r = norm(g.node(i, j));
      f(i, j) = 3.0 * (r - 15 * um) * (1.0 + r / (10 * um));
    }
  }
  reinitialize(f);
  double worst = 0.0;
  for (int j = 0; j <= g.n; ++j) {
    for (int i = 0; i <= g.n; ++i) worst = std::max(worst, std::abs(f(i, j) - (norm(g.node(i, j)) - 15 * um)));
  }
  CHECK(worst < 0.1 * um);
}

TEST_CASE("bilinear interpolation is exact for bilinear data") {
  const levelset::Grid2D g{10, 0.5, {1.0, -2.0}};
  std::vector<double> v(g.node_count());
  for (int j = 0; j <= g.n; ++j) {
    for (int i = 0; i <= g.n; ++i) {
      const Vec2 p = g.node(i, j);
      v[g.index(i, j)] = 2.0 + p.x - 3.0 * p.y + 0.5 * p.x * p.y;
    }
  }
  const Vec2 q{2.3, -0.7};
  CHECK(interpolate(g, v, q) == doctest::Approx(2.0 + q.x - 3.0 * q.y + 0.5 * q.x * q.y));
}
