#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>
#include <doctest.h>

#include "dissolve/oracle.hpp"

using namespace dissolve;
using namespace dissolve::oracle;

namespace {

constexpr double um = 1e-6;

// Adaptive Dormand-Prince integration of dC_b/dt = k_rb (C_s(t) - C_b) from C_b(t*) = C_s(t*).
double integrate_c_b(const physchem::DrugParams& d, double t_star, double t) {
  using State = std::array<double, 1>;
  State y{physchem::solubility(t_star, d)};
  auto rhs = [&](const State& x, State& dx, double s) {
    dx[0] = d.k_rb * (physchem::solubility(s, d) - x[0]);
  };
  namespace ode = boost::numeric::odeint;
  ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<State>>(1e-14, 1e-14), rhs,
                          y, t_star, t, 1e-3);
  return y[0];
}

double r_at_end(double dt) {
  const physchem::DrugParams d = physchem::preset("theophylline-25");
  const double r0 = 50 * um;
  return solve_circle(r0, d, 300 * kPi * r0 * r0, 300.0, dt).samples.back().r;
}

}  // namespace

TEST_CASE("recrystallization closed form matches adaptive integration") {
  for (const auto& name : physchem::preset_names()) {
    CAPTURE(name);
    const physchem::DrugParams d = physchem::preset(name);
    const double t_star = 150.0;
    double worst = 0.0;
    for (double t = t_star; t <= t_star + 1000.0; t += 25.0) {
      const double exact = integrate_c_b(d, t_star, t);
      const double closed = recrystallization_closed_form(t, t_star, d).c_b;
      worst = std::max(worst, std::abs(closed - exact) / exact);
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("recrystallization start and limit") {
  const physchem::DrugParams d = physchem::preset("theophylline-25");
  const double t_star = 200.0;
  const RecrystallizationValue at = recrystallization_closed_form(t_star, t_star, d);
  CHECK(at.c_b == doctest::Approx(physchem::solubility(t_star, d)).epsilon(1e-14));
  CHECK(std::abs(at.mc_over_v_krb) < 1e-14);
  CHECK(recrystallization_closed_form(t_star + 1e5, t_star, d).c_b ==
        doctest::Approx(d.c_sf).epsilon(1e-12));
  CHECK_THROWS_AS(recrystallization_closed_form(t_star - 1.0, t_star, d), std::invalid_argument);
  physchem::DrugParams equal = d;
  equal.k_rb = equal.k_r;
  CHECK_THROWS_AS(recrystallization_closed_form(t_star + 1.0, t_star, equal), std::invalid_argument);
}

TEST_CASE("C_b turns downward after t*") {
  const physchem::DrugParams d = physchem::preset("griseofulvin-37");
  const double t_star = 100.0, h = 1e-3;
  auto c = [&](double t) { return recrystallization_closed_form(t, t_star, d).c_b; };
  const double slope = (c(t_star + h) - c(t_star)) / h;
  CHECK(std::abs(slope) < 1e-5 * d.k_rb * d.c_s0);
  const double curvature = (c(t_star + 2 * h) - 2 * c(t_star + h) + c(t_star)) / (h * h);
  CHECK(curvature < 0.0);
}

TEST_CASE("general anchor agrees with the saturated anchor") {
  const physchem::DrugParams d = physchem::preset("nimesulide-37");
  const double t_star = 60.0;
  const double cs = physchem::solubility(t_star, d);
  CHECK(recrystallization_c_b(400.0, t_star, cs, d) ==
        doctest::Approx(recrystallization_closed_form(400.0, t_star, d).c_b).epsilon(1e-12));
}

TEST_CASE("RK3 converges at third order") {
  const double ref = r_at_end(0.0125);
  const double e1 = std::abs(r_at_end(0.2) - ref);
  const double e2 = std::abs(r_at_end(0.1) - ref);
  CHECK(e1 / e2 > 6.0);
  CHECK(e1 / e2 < 10.0);
}

TEST_CASE("circle trajectories reproduce both regimes") {
  const physchem::DrugParams d = physchem::preset("theophylline-25");
  const double r0 = 50 * um;
  const CircleTrajectory full = solve_circle(r0, d, 300 * kPi * r0 * r0, 1000.0, 0.01);
  CHECK(full.stop == StopReason::dissolved);
  CHECK_FALSE(full.non_monotone);
  for (const auto& s : full.samples) CHECK(s.c_b < s.c_s);
  CHECK(full.samples.back().t == doctest::Approx(719.3).epsilon(2e-3));

  const CircleTrajectory sw = solve_circle(r0, d, 150 * kPi * r0 * r0, 1000.0, 0.01);
  CHECK(sw.stop == StopReason::regime_switch);
  CHECK(sw.samples.back().c_b >= sw.samples.back().c_s);
  CHECK(sw.samples.back().r > 0.0);

  CHECK(radius_at(full, 0.0) == r0);
  CHECK(radius_at(full, 5000.0) == 0.0);
}

TEST_CASE("mass is conserved by the reduced model") {
  const physchem::DrugParams d = physchem::preset("theophylline-37");
  const double r0 = 40 * um, v_ext = 200 * kPi * r0 * r0;
  const CircleTrajectory tr = solve_circle(r0, d, v_ext, 150.0, 0.01);
  const auto& s = tr.samples.back();
  const double m0 = d.rho_s * kPi * r0 * r0;
  const double m = d.rho_s * kPi * s.r * s.r + s.c_b * v_ext;
  CHECK(std::abs(m - m0) / m0 < 1e-6);
}

TEST_CASE("sphere surface term is 2R times the disc term") {
  const physchem::DrugParams d = physchem::preset("theophylline-37");
  const double r0 = 30 * um, v_ext = 1.0;
  CircleOptions sphere;
  sphere.dimension = Dimension::three_d;
  const auto a = solve_circle(r0, d, v_ext, 1e-3, 1e-3);
  const auto b = solve_circle(r0, d, v_ext, 1e-3, 1e-3, sphere);
  CHECK(b.samples.back().c_b / a.samples.back().c_b == doctest::Approx(2 * r0).epsilon(1e-6));
}

TEST_CASE("trajectory csv") {
  const physchem::DrugParams d = physchem::preset("theophylline-37");
  const auto tr = solve_circle(10 * um, d, 1e-12, 1.0, 0.5);
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  CHECK(os.str().rfind("t,R,C_b,C_s,regime\n", 0) == 0);
}
