#pragma once

#include <iosfwd>
#include <vector>

#include "dissolve/common.hpp"
#include "dissolve/physchem.hpp"

namespace dissolve::oracle {

/// Surface term of the reduced circle model: 2 pi R (disc) or 4 pi R^2 (sphere).
enum class Dimension { two_d, three_d };

struct CircleSample {
  double t = 0.0;
  double r = 0.0;
  double c_b = 0.0;
  double c_s = 0.0;
  Regime regime = Regime::dissolution;
};

enum class StopReason { t_end, dissolved, regime_switch };
const char* to_string(StopReason s);

struct CircleTrajectory {
  std::vector<CircleSample> samples;  ///< every accepted step, starting at t = 0
  StopReason stop = StopReason::t_end;
  bool non_monotone = false;  ///< R grew during a dissolution step: dt too large
};

struct CircleOptions {
  Dimension dimension = Dimension::two_d;
  physchem::SigmaPolicy sigma_policy = physchem::SigmaPolicy::continuous;
};

/// Fixed-step SSP-RK3 integration of
///   dR/dt = -K(R, R) (C_s(t) - C_b) / rho_s,
///   dC_b/dt = S(R) K(R, R) (C_s(t) - C_b) / V_ext,
/// stopping at t_end, when R reaches zero (the remaining solid is moved into
/// the bulk) or when C_b >= C_s.
CircleTrajectory solve_circle(double r0, const physchem::DrugParams& drug, double v_ext,
                              double t_end, double dt, const CircleOptions& opts = {});

/// Interpolated radius at time t (linear between samples; 0 past dissolution).
double radius_at(const CircleTrajectory& traj, double t);

struct RecrystallizationValue {
  double c_b = 0.0;
  double mc_over_v_krb = 0.0;  ///< M_c / (V_ext k_rb)
};

/// Analytical solution of dC_b/dt = k_rb (C_s - C_b), dM_c/dt = -k_rb V_ext (C_s - C_b)
/// with C_b(t*) = C_s(t*), M_c(t*) = 0. Throws std::invalid_argument if t < t*
/// or k_rb == k_r.
RecrystallizationValue recrystallization_closed_form(double t, double t_star,
                                                     const physchem::DrugParams& drug);

/// Same linear ODE from an arbitrary anchor C_b(t*) = c_b_star.
double recrystallization_c_b(double t, double t_star, double c_b_star,
                             const physchem::DrugParams& drug);

/// CSV with columns t,R,C_b,C_s,regime.
void write_trajectory_csv(std::ostream& out, const CircleTrajectory& traj);

}  // namespace dissolve::oracle
