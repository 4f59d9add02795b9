#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dissolve::physchem {

/// Physico-chemical constants of one drug / dissolution-medium pairing.
/// Everything is SI.
struct DrugParams {
  double rho_s = 0.0;          ///< solid density [kg/m^3]
  double c_s0 = 0.0;           ///< initial solubility [kg/m^3]
  double c_sf = 0.0;           ///< final solubility [kg/m^3]
  double k_r = 0.0;            ///< surface recrystallization constant [1/s]
  double k_rb = 0.0;           ///< bulk recrystallization constant [1/s]
  double k_m_inf = 0.0;        ///< flat-surface interfacial coefficient [m/s]
  double diffusivity = 0.0;    ///< D [m^2/s]
  double rho_f = 0.0;          ///< fluid density [kg/m^3]
  double eta_f = 0.0;          ///< dynamic viscosity [Pa s]
  double nu_f = 0.0;           ///< kinematic viscosity [m^2/s]
  double alpha = 0.0;          ///< k_m curvature fitting parameter [m^3]
  double tolman_length = 0.0;  ///< d_T [m]
  double g = 9.81;             ///< gravitational acceleration [m/s^2]

  bool operator==(const DrugParams&) const = default;
};

/// Throws std::invalid_argument unless every field is finite and positive,
/// C_s0 >= C_sf and k_rb != k_r.
void validate(const DrugParams& drug);

/// Names of the built-in presets, in table order.
const std::vector<std::string>& preset_names();
/// Throws std::invalid_argument for an unknown name.
DrugParams preset(std::string_view name);

/// Key names used by the parameter file format and by `drug.<key>` overrides.
const std::vector<std::string>& field_names();
double get_field(const DrugParams& drug, std::string_view key);
void set_field(DrugParams& drug, std::string_view key, double value);

/// Parses `name = value` lines (SI units, `#` comments). Keys missing from
/// the text keep the values of `base`.
DrugParams parse_param_text(std::string_view text, const DrugParams& base = {});
DrugParams load_param_file(const std::filesystem::path& path);
std::string format_param_text(const DrugParams& drug);

/// C_s(t) = C_sf + (C_s0 - C_sf) exp(-k_r t).
double solubility(double t, const DrugParams& drug);

/// Stokes settling velocity of the equivalent particle. Throws if rho_s <= rho_f.
double delta_u(double r_eq, const DrugParams& drug);

/// Radius of the circle with the given area.
double r_equivalent(double area);

/// Hydrodynamic coefficient of a convex surface of curvature radius r.
double k_d_curved(double r, double r_eq, const DrugParams& drug);

/// Levich coefficient of an almost flat surface.
double k_d_flat(double r_eq, const DrugParams& drug);

/// Curvature radius at which k_d_curved(r, r_eq) == k_d_flat(r_eq).
double r_plane(double r_eq, const DrugParams& drug);

/// Curvature-dependent interfacial coefficient k_m(R).
double k_m_curved(double r, const DrugParams& drug);

/// How the boundary-layer ratio sigma is evaluated when the flat k_d law is in
/// use for a convex point (R > R_plane).
enum class SigmaPolicy {
  continuous,  ///< sigma = 1 + D / (k_d R) with k_d from the flat law
  unity,       ///< sigma = 1
};

struct TransferEval {
  double radius = 0.0;  ///< curvature radius used [m]; +inf for flat/concave points
  double r_eq = 0.0;
  double k_d = 0.0;
  double k_m = 0.0;
  double sigma = 1.0;
  double k = 0.0;       ///< overall coefficient K [m/s]
  bool used_flat_branch = false;
};

/// K = [sigma (1/k_d + sigma/k_m)]^-1 at a convex point of radius r.
TransferEval overall_k(double r, double r_eq, const DrugParams& drug,
                       SigmaPolicy policy = SigmaPolicy::continuous);

/// K at a flat or concave point: Levich k_d, sigma = 1, k_m = k_m_inf.
TransferEval overall_k_flat(double r_eq, const DrugParams& drug);

/// Maps a signed curvature onto overall_k: kappa <= 0 takes the flat limit,
/// otherwise R = max(1/kappa, r_min).
TransferEval transfer_at_curvature(double kappa, double r_eq, double r_min, const DrugParams& drug,
                                   SigmaPolicy policy = SigmaPolicy::continuous);

/// overall_k with everything that depends only on (drug, R_eq) hoisted out.
/// Used on every grid node of every step, so it avoids pow() per call.
class TransferModel {
 public:
  TransferModel(const DrugParams& drug, double r_eq, double r_min,
                SigmaPolicy policy = SigmaPolicy::continuous);

  double k_at_curvature(double kappa) const;
  double r_plane() const { return r_plane_; }
  double r_eq() const { return r_eq_; }

 private:
  double diffusivity_;
  double k_m_inf_;
  double alpha_;
  double two_d_t_;
  double r_eq_;
  double r_min_;
  double r_plane_;
  double k_d_flat_;
  double curved_coeff_;  // 0.6 (nu/D)^(1/3) sqrt(2 dU / nu)
  double k_flat_limit_;
  SigmaPolicy policy_;
};

}  // namespace dissolve::physchem
