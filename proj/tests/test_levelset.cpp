#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <doctest.h>

#include "dissolve/geometry.hpp"
#include "dissolve/levelset.hpp"

using namespace dissolve;
using namespace dissolve::levelset;

namespace {

constexpr double um = 1e-6;

LevelSetField from_function(const Grid2D& g, auto f) {
  LevelSetField field(g);
  for (int j = 0; j <= g.n; ++j) {
    for (int i = 0; i <= g.n; ++i) field(i, j) = f(g.node(i, j));
  }
  return field;
}

LevelSetField circle_sdf(const Grid2D& g, double r) {
  return from_function(g, [r](Vec2 p) { return norm(p) - r; });
}

// Front radius from the measured area of {phi < 0}.
double front_radius(const LevelSetField& f) {
  return std::sqrt(geometry::interior_area(f) / kPi);
}

double shrink_error(double dx) {
  const double r0 = 20 * um, c = 1e-6, t_end = 10.0;
  const int n = static_cast<int>(std::lround(60 * um / dx));
  const Grid2D g = Grid2D::centered({}, n, dx);
  LevelSetField f = circle_sdf(g, r0);
  SpeedField v{std::vector<double>(g.node_count(), -c)};
  const double dt_full = cfl_dt(v, g, 0.5, 1e9);
  double t = 0.0;
  while (t < t_end - 1e-12) {
    const double dt = std::min(dt_full, t_end - t);
    f = upwind_step(f, v, dt);
    t += dt;
  }
  return std::abs(front_radius(f) - (r0 - c * t_end));
}

}  // namespace

TEST_CASE("grid basics") {
  const Grid2D g = Grid2D::centered({1.0, 2.0}, 10, 0.5);
  CHECK(g.node_count() == 121);
  CHECK(g.node(5, 5).x == doctest::Approx(1.0));
  CHECK(g.node(5, 5).y == doctest::Approx(2.0));
  CHECK_THROWS(Grid2D{4, 1.0, {}}.validate());
  CHECK_THROWS(Grid2D{10, 0.0, {}}.validate());
}

TEST_CASE("CFL time step") {
  const Grid2D g{10, 1e-6, {}};
  SpeedField v{std::vector<double>(g.node_count(), 0.0)};
  v.v[7] = -1.0;
  CHECK(cfl_dt(v, g, 0.9, 1.0) == doctest::Approx(9e-7).epsilon(1e-12));
  SpeedField zero{std::vector<double>(g.node_count(), 0.0)};
  CHECK(cfl_dt(zero, g, 0.9, 0.25) == 0.25);
}

TEST_CASE("zero speed leaves phi unchanged and CFL violations throw") {
  const Grid2D g = Grid2D::centered({}, 40, 1 * um);
  const LevelSetField f = circle_sdf(g, 10 * um);
  SpeedField zero{std::vector<double>(g.node_count(), 0.0)};
  CHECK(upwind_step(f, zero, 1.0) == f);
  SpeedField fast{std::vector<double>(g.node_count(), -1.0)};
  CHECK_THROWS_AS(upwind_step(f, fast, 2e-6), CflViolation);
}

TEST_CASE("planar front recedes at the speed magnitude") {
  const double dx = 1 * um, x0 = 10 * um, c = 1e-6;
  const Grid2D g = Grid2D::centered({}, 60, dx);
  LevelSetField f = from_function(g, [x0](Vec2 p) { return p.x - x0; });
  SpeedField v{std::vector<double>(g.node_count(), -c)};
  const double dt = 0.9 * dx / c;
  const int steps = 15;
  for (int s = 0; s < steps; ++s) f = upwind_step(f, v, dt);
  // a negative speed shrinks {phi < 0} = {x < x0}
  const double expected = x0 - c * dt * steps;
  // zero crossing along the middle row
  const int j = g.n / 2;
  double front = 0.0;
  for (int i = 0; i < g.n; ++i) {
    if (f(i, j) <= 0.0 && f(i + 1, j) > 0.0) {
      front = g.node(i, j).x + dx * f(i, j) / (f(i, j) - f(i + 1, j));
    }
  }
  CHECK(std::abs(front - expected) <= dx);
}

TEST_CASE("shrinking circle follows R0 - c t and converges at first order") {
  const double e1 = shrink_error(1 * um);
  const double e2 = shrink_error(0.5 * um);
  const double e4 = shrink_error(0.25 * um);
  CHECK(e1 <= 2 * um);
  CHECK(e2 <= 1 * um);
  CHECK(e1 / e2 >= 1.7);
  CHECK(e1 / e2 <= 2.3);
  CHECK(e2 / e4 >= 1.7);
  CHECK(e2 / e4 <= 2.3);
}

TEST_CASE("curvature of a circle and a plane") {
  const double r = 50 * um, dx = 1 * um;
  const Grid2D g = Grid2D::centered({}, 140, dx);
  const LevelSetField f = circle_sdf(g, r);
  int checked = 0;
  for (int j = 1; j < g.n; ++j) {
    for (int i = 1; i < g.n; ++i) {
      if (std::abs(f(i, j)) > 0.9 * dx) continue;
      const CurvatureSample k = curvature(f, i, j);
      CHECK_FALSE(k.degenerate);
      CHECK(std::abs(k.kappa * r - 1.0) < 0.02);
      ++checked;
    }
  }
  CHECK(checked > 100);

  const LevelSetField plane = from_function(g, [](Vec2 p) { return p.x - 3 * um; });
  for (int j = 1; j < g.n; j += 7) {
    for (int i = 1; i < g.n; i += 7) CHECK(std::abs(curvature(plane, i, j).kappa) <= 1e-6 / dx);
  }
}

TEST_CASE("normals") {
  const Grid2D g = Grid2D::centered({}, 40, 1 * um);
  const LevelSetField f = circle_sdf(g, 10 * um);
  const NormalSample east = normal(f, 35, 20);
  CHECK(east.n.x == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(east.n.y) < 1e-9);
  const LevelSetField plane = from_function(g, [](Vec2 p) { return p.y - 2 * um; });
  const NormalSample up = normal(plane, 12, 17);
  CHECK(std::abs(up.n.x) < 1e-12);
  CHECK(up.n.y == doctest::Approx(1.0).epsilon(1e-12));
  // the central node of the circle has a vanishing gradient
  CHECK(normal(f, 20, 20).degenerate);
}

TEST_CASE("normals have unit length on random smooth fields") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Grid2D g = Grid2D::centered({}, 30, 1 * um);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = u(rng), b = u(rng), c = u(rng), w = 1e5 * (1.5 + u(rng));
    const LevelSetField f = from_function(g, [&](Vec2 p) {
      return 1e-6 * (a * std::sin(w * p.x) + b * std::cos(w * p.y) + c * std::sin(w * (p.x + p.y)));
    });
    for (int j = 1; j < g.n; ++j) {
      for (int i = 1; i < g.n; ++i) {
        const NormalSample n = normal(f, i, j);
        if (!n.degenerate) CHECK(std::abs(norm(n.n) - 1.0) < 1e-12);
      }
    }
  }
}

TEST_CASE("curvature field fills degenerate and boundary nodes") {
  const Grid2D g = Grid2D::centered({}, 40, 1 * um);
  const LevelSetField f = circle_sdf(g, 10 * um);
  const std::vector<double> k = curvature_field(f);
  CHECK(k.size() == g.node_count());
  CHECK(std::all_of(k.begin(), k.end(), [](double v) { return std::isfinite(v); }));
  CHECK(k[g.index(0, 0)] == k[g.index(1, 1)]);
}

TEST_CASE("padding guard") {
  const Grid2D g = Grid2D::centered({}, 40, 1 * um);
  CHECK_NOTHROW(check_padding(circle_sdf(g, 15 * um)));
  CHECK_THROWS_AS(check_padding(circle_sdf(g, 18 * um)), PaddingViolation);
}

TEST_CASE("crop keeps node positions and values") {
  const Grid2D g = Grid2D::centered({}, 40, 1 * um);
  const LevelSetField f = circle_sdf(g, 5 * um);
  const LevelSetField c = crop(f, 10, 12, 16);
  CHECK(c.grid().n == 16);
  CHECK(norm(c.grid().node(0, 0) - g.node(10, 12)) < 1e-18);
  CHECK(c(3, 4) == f(13, 16));
  CHECK_THROWS(crop(f, 30, 0, 16));
  CHECK_THROWS(crop(f, 0, 0, 4));
}

TEST_CASE("field csv round trip") {
  const Grid2D g = Grid2D::centered({1e-6, -2e-6}, 12, 0.5 * um);
  const LevelSetField f = circle_sdf(g, 2 * um);
  std::stringstream ss;
  write_field_csv(ss, f, 12.5);
  double t = 0.0;
  const LevelSetField back = read_field_csv(ss, &t);
  CHECK(t == 12.5);
  CHECK(back == f);
}
