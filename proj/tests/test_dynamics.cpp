#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "dissolve/dynamics.hpp"
#include "dissolve/geometry.hpp"

using namespace dissolve;
using namespace dissolve::dynamics;

namespace {

constexpr double um = 1e-6;

ParticleInit circle(double r, double dx, int multiplicity = 1, Vec2 center = {}) {
  const int n = static_cast<int>(std::ceil(2.5 * 2 * r / dx));
  return {{geometry::Circle{r}, center}, multiplicity, levelset::Grid2D::centered(center, n, dx)};
}

EngineOptions options(double t_end) {
  EngineOptions o;
  o.t_end = t_end;
  o.dt_max = 1e9;
  o.output_interval = t_end / 20;
  return o;
}

}  // namespace

TEST_CASE("initial state") {
  const physchem::DrugParams d = physchem::preset("theophylline-37");
  const SimState s = initialize({circle(10 * um, 0.5 * um, 3)}, d, 100.0, 0.0, options(1.0));
  CHECK(s.m_0 == doctest::Approx(d.rho_s * 3 * kPi * 1e-10).epsilon(0.01));
  CHECK(s.bulk.v_ext == doctest::Approx(100.0 * s.m_0 / d.rho_s).epsilon(1e-12));
  CHECK(s.bulk.c_b == 0.0);
  CHECK(s.bulk.regime == Regime::dissolution);
  CHECK(mass_residual(s) == 0.0);
  CHECK_FALSE(check_regime(const_cast<SimState&>(s)));
}

TEST_CASE("speed is uniform on a circle and vanishes at saturation") {
  const physchem::DrugParams d = physchem::preset("theophylline-37");
  const SimState s = initialize({circle(30 * um, 1 * um)}, d, 100.0, 0.0, options(1.0));
  const ParticleState& p = s.particles[0];
  const levelset::SpeedField v = speed_field(p, s.bulk, 0.0, d);
  const double expected = -physchem::overall_k(30 * um, 30 * um, d).k * d.c_s0 / d.rho_s;
  for (const auto& seg : p.last_measure.segments) {
    CHECK(std::abs(geometry::interpolate(p.field.grid(), v.v, seg.midpoint) - expected) <
          0.03 * std::abs(expected));
  }
  BulkState saturated = s.bulk;
  saturated.c_b = physchem::solubility(0.0, d);
  CHECK(speed_field(p, saturated, 0.0, d).max_abs() == 0.0);
  CHECK(speed_field(p, saturated, 0.0, d, physchem::SigmaPolicy::continuous, SpeedExtension::node)
            .max_abs() == 0.0);
}

TEST_CASE("no particles: C_b stays constant") {
  const physchem::DrugParams d = physchem::preset("griseofulvin-37");
  SimState s = initialize({}, d, 0.0, 1e-12, options(10.0));
  const RunResult r = run(s, options(10.0));
  for (const auto& rec : r.series) CHECK(rec.c_b == 0.0);
}

TEST_CASE("mass closure with area coupling") {
  const physchem::DrugParams d = physchem::preset("theophylline-37");
  SimState s = initialize({circle(15 * um, 0.75 * um), circle(8 * um, 0.5 * um, 4, {1e-4, 0})}, d,
                          50.0, 0.0, options(60.0));
  const RunResult r = run(s, options(60.0));
  CHECK(r.max_mass_residual < 1e-12);
  for (std::size_t k = 1; k < r.series.size(); ++k) {
    if (r.series[k].regime == Regime::dissolution) CHECK(r.series[k].c_b >= r.series[k - 1].c_b);
  }
}

TEST_CASE("flux coupling tracks the area budget") {
  const physchem::DrugParams d = physchem::preset("theophylline-37");
  EngineOptions o = options(60.0);
  o.coupling = Coupling::flux;
  SimState s = initialize({circle(20 * um, 0.5 * um)}, d, 100.0, 0.0, o);
  const RunResult r = run(s, o);
  CHECK(std::abs(r.series.back().flux_gap) < 0.1);
  CHECK(r.series.back().c_b > 0.0);
}

TEST_CASE("multiplicity is equivalent to identical copies") {
  const physchem::DrugParams d = physchem::preset("griseofulvin-37");
  const double r = 4 * um, dx = r / 10;
  const EngineOptions o = options(20.0);
  SimState one = initialize({circle(r, dx, 10)}, d, 1000.0, 0.0, o);
  std::vector<ParticleInit> copies;
  for (int k = 0; k < 10; ++k) copies.push_back(circle(r, dx));
  SimState many = initialize(copies, d, 1000.0, 0.0, o);
  const RunResult a = run(one, o);
  const RunResult b = run(many, o);
  REQUIRE(a.series.size() == b.series.size());
  CHECK(a.steps == b.steps);
  for (std::size_t k = 0; k < a.series.size(); ++k) {
    CHECK(a.series[k].t == b.series[k].t);
    const double ref = std::max(std::abs(a.series[k].c_b), 1e-300);
    CHECK(std::abs(a.series[k].c_b - b.series[k].c_b) <= 1e-10 * ref);
  }
}

TEST_CASE("regime switch is detected at the crossing") {
  const physchem::DrugParams d = physchem::preset("theophylline-37");
  const EngineOptions o = options(400.0);
  SimState s = initialize({circle(20 * um, 0.5 * um)}, d, 20.0, 0.0, o);
  const RunResult r = run(s, o);
  REQUIRE(!std::isnan(r.t_star));
  CHECK(s.bulk.regime == Regime::recrystallization);
  CHECK(s.bulk.switches >= 1);
  // C_b at t* lies within one step's increment of C_s(t*)
  const double cs = physchem::solubility(s.bulk.t_star, d);
  const double increment = d.rho_s * 2 * kPi * 20 * um * 0.5 * um / s.bulk.v_ext;
  CHECK(s.bulk.c_b_star >= cs * (1 - 1e-12));
  CHECK(s.bulk.c_b_star - cs <= increment);
  // recrystallized mass appears and mass closes
  CHECK(s.bulk.m_c > 0.0);
  CHECK(r.max_mass_residual < 1e-10);
}

TEST_CASE("recrystallization step follows the closed form") {
  const physchem::DrugParams d = physchem::preset("nimesulide-37");
  SimState s = initialize({}, d, 0.0, 1e-12, options(1.0));
  s.t = 50.0;
  s.bulk.c_b = physchem::solubility(50.0, d) * (1.0 - 1e-9);
  REQUIRE(check_regime(s) == false);
  s.bulk.c_b = physchem::solubility(50.0, d) * (1.0 + 1e-9);
  REQUIRE(check_regime(s));
  const double c0 = s.bulk.c_b;
  step_recrystallization(s, 100.0);
  CHECK(s.bulk.c_b < c0);
  CHECK(s.bulk.m_c > 0.0);
  CHECK(std::abs(s.bulk.c_b * s.bulk.v_ext + s.bulk.m_c - c0 * s.bulk.v_ext) < 1e-12 * c0 * s.bulk.v_ext);
}

TEST_CASE("particles die and grids shrink") {
  const physchem::DrugParams d = physchem::preset("griseofulvin-37");
  EngineOptions o = options(200.0);
  SimState s = initialize({circle(3 * um, 0.3 * um)}, d, 1e5, 0.0, o);
  const int n0 = s.particles[0].field.grid().n;
  bool cropped = false;
  run(s, o, [&](const SimState& st) {
    if (st.particles[0].alive && st.particles[0].field.grid().n < n0) cropped = true;
  });
  CHECK(cropped);
  CHECK_FALSE(s.particles[0].alive);
  CHECK(s.particles[0].death_time > 0.0);
  CHECK(mass_residual(s) < 1e-12);
}

TEST_CASE("stable dt respects CFL and dt_max") {
  const physchem::DrugParams d = physchem::preset("theophylline-37");
  EngineOptions o = options(10.0);
  SimState s = initialize({circle(10 * um, 0.5 * um)}, d, 100.0, 0.0, o);
  const double dt = stable_dt(s, o);
  const levelset::SpeedField v = speed_field(s.particles[0], s.bulk, 0.0, d);
  CHECK(dt * v.max_abs() <= o.cfl * 0.5 * um * (1 + 1e-12));
  o.dt_max = dt / 4;
  CHECK(stable_dt(s, o) == dt / 4);
  const double taken = step_dissolution(s, o, 1e-3);
  CHECK(taken <= 1e-3);
  CHECK(s.t == taken);
}
