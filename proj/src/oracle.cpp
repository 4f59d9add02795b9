#include "dissolve/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "text_util.hpp"

namespace dissolve::oracle {

const char* to_string(StopReason s) {
  switch (s) {
    case StopReason::t_end: return "t_end";
    case StopReason::dissolved: return "dissolved";
    case StopReason::regime_switch: return "regime_switch";
  }
  return "unknown";
}

namespace {

struct Rates {
  double dr;
  double dc;
};

double surface(double r, Dimension d) {
  return d == Dimension::two_d ? 2.0 * kPi * r : 4.0 * kPi * r * r;
}

double solid_volume(double r, Dimension d) {
  return d == Dimension::two_d ? kPi * r * r : 4.0 / 3.0 * kPi * r * r * r;
}

Rates rates(double t, double r, double c_b, const physchem::DrugParams& drug, double v_ext,
            const CircleOptions& opts) {
  const double drive = physchem::solubility(t, drug) - c_b;
  const double k = physchem::overall_k(r, r, drug, opts.sigma_policy).k;
  return {-k * drive / drug.rho_s, surface(r, opts.dimension) * k * drive / v_ext};
}

}  // namespace

CircleTrajectory solve_circle(double r0, const physchem::DrugParams& drug, double v_ext,
                              double t_end, double dt, const CircleOptions& opts) {
  physchem::validate(drug);
  if (!(r0 > 0.0)) throw std::invalid_argument("oracle needs R0 > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("oracle needs dt > 0");
  if (!(v_ext > 0.0)) throw std::invalid_argument("oracle needs V_ext > 0");
  if (!(t_end >= 0.0)) throw std::invalid_argument("oracle needs t_end >= 0");

  CircleTrajectory traj;
  double t = 0.0;
  double r = r0;
  double c = 0.0;
  traj.samples.push_back({t, r, c, physchem::solubility(t, drug), Regime::dissolution});

  auto finish_dissolved = [&](double t_new) {
    // the last sliver of solid goes straight into the bulk
    c += drug.rho_s * solid_volume(r, opts.dimension) / v_ext;
    r = 0.0;
    t = t_new;
    const double cs = physchem::solubility(t, drug);
    traj.samples.push_back(
        {t, r, c, cs, c >= cs ? Regime::recrystallization : Regime::dissolution});
    traj.stop = StopReason::dissolved;
  };

  while (t < t_end) {
    const double h = std::min(dt, t_end - t);
    // SSP-RK3 (Shu-Osher)
    const Rates k1 = rates(t, r, c, drug, v_ext, opts);
    const double r1 = r + h * k1.dr;
    const double c1 = c + h * k1.dc;
    if (!(r1 > 0.0)) {
      finish_dissolved(t + h);
      return traj;
    }
    const Rates k2 = rates(t + h, r1, c1, drug, v_ext, opts);
    const double r2 = 0.75 * r + 0.25 * (r1 + h * k2.dr);
    const double c2 = 0.75 * c + 0.25 * (c1 + h * k2.dc);
    if (!(r2 > 0.0)) {
      finish_dissolved(t + h);
      return traj;
    }
    const Rates k3 = rates(t + 0.5 * h, r2, c2, drug, v_ext, opts);
    const double r_new = r / 3.0 + 2.0 / 3.0 * (r2 + h * k3.dr);
    const double c_new = c / 3.0 + 2.0 / 3.0 * (c2 + h * k3.dc);
    if (!(r_new > 0.0)) {
      finish_dissolved(t + h);
      return traj;
    }
    if (r_new > r) traj.non_monotone = true;
    r = r_new;
    c = c_new;
    t += h;
    const double cs = physchem::solubility(t, drug);
    if (c >= cs) {
      traj.samples.push_back({t, r, c, cs, Regime::recrystallization});
      traj.stop = StopReason::regime_switch;
      return traj;
    }
    traj.samples.push_back({t, r, c, cs, Regime::dissolution});
  }
  traj.stop = StopReason::t_end;
  return traj;
}

double radius_at(const CircleTrajectory& traj, double t) {
  const auto& s = traj.samples;
  if (s.empty()) throw std::invalid_argument("empty trajectory");
  if (t <= s.front().t) return s.front().r;
  if (t >= s.back().t) return traj.stop == StopReason::dissolved ? 0.0 : s.back().r;
  const auto it = std::lower_bound(s.begin(), s.end(), t,
                                   [](const CircleSample& a, double v) { return a.t < v; });
  const CircleSample& b = *it;
  const CircleSample& a = *(it - 1);
  const double w = (t - a.t) / (b.t - a.t);
  return a.r + w * (b.r - a.r);
}

RecrystallizationValue recrystallization_closed_form(double t, double t_star,
                                                     const physchem::DrugParams& drug) {
  if (drug.k_rb == drug.k_r) throw std::invalid_argument("closed form needs k_rb != k_r");
  if (t < t_star) throw std::invalid_argument("closed form needs t >= t*");
  const double krb = drug.k_rb;
  const double kr = drug.k_r;
  const double dk = krb - kr;
  const double dc = drug.c_s0 - drug.c_sf;
  const double cs_star = physchem::solubility(t_star, drug);

  RecrystallizationValue v;
  v.c_b = cs_star * std::exp(-krb * (t - t_star)) +
          dc * krb / dk * std::exp(-krb * t) * (std::exp(dk * t) - std::exp(dk * t_star)) +
          drug.c_sf * (1.0 - std::exp(-krb * (t - t_star)));

  const double e_rb = std::exp(-krb * t) - std::exp(-krb * t_star);
  v.mc_over_v_krb =
      -cs_star / krb * std::exp(krb * t_star) * e_rb +
      dc / kr * (1.0 - krb / dk) * (std::exp(-kr * t) - std::exp(-kr * t_star)) +
      (krb * dc * std::exp(dk * t_star) + dk * drug.c_sf * std::exp(krb * t_star)) / (krb * dk) *
          e_rb;
  return v;
}

double recrystallization_c_b(double t, double t_star, double c_b_star,
                             const physchem::DrugParams& drug) {
  if (drug.k_rb == drug.k_r) throw std::invalid_argument("closed form needs k_rb != k_r");
  if (t < t_star) throw std::invalid_argument("closed form needs t >= t*");
  const double krb = drug.k_rb;
  const double dk = krb - drug.k_r;
  const double tau = t - t_star;
  // exp(-krb t)(exp(dk t) - exp(dk t*)) rewritten relative to t* to avoid overflow
  const double transient = std::exp(-drug.k_r * t_star) * (std::exp(-drug.k_r * tau) - std::exp(-krb * tau));
  return c_b_star * std::exp(-krb * tau) + (drug.c_s0 - drug.c_sf) * krb / dk * transient +
         drug.c_sf * -std::expm1(-krb * tau);
}

void write_trajectory_csv(std::ostream& out, const CircleTrajectory& traj) {
  out << "t,R,C_b,C_s,regime\n";
  for (const auto& s : traj.samples) {
    out << text_util::format_double(s.t) << ',' << text_util::format_double(s.r) << ','
        << text_util::format_double(s.c_b) << ',' << text_util::format_double(s.c_s) << ','
        << to_string(s.regime) << '\n';
  }
}

}  // namespace dissolve::oracle
