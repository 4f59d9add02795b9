#include "dissolve/physchem.hpp"

#include "dissolve/common.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "text_util.hpp"

namespace dissolve::physchem {

namespace {

struct NamedPreset {
  const char* name;
  DrugParams params;
};

// Per-drug parameter columns.
const std::array<NamedPreset, 4> kPresets{{
    {"theophylline-25",
     {1490.0, 11.6, 6.1, 6e-3, 6.6e-3, 3.7e-3, 6.2e-10, 1000.0, 1e-3, 1e-6, 1e-15, 1e-9, 9.81}},
    {"theophylline-37",
     {1490.0, 12.495, 6.569, 6e-3, 5.7e-3, 2e-3, 8.2e-10, 993.0, 6.91e-4, 6.96e-7, 1e-15, 2.6e-10,
      9.81}},
    {"griseofulvin-37",
     {1495.0, 0.494, 0.025, 8.8e-3, 8.36e-3, 0.126, 7.057e-10, 993.0, 6.91e-4, 6.96e-7, 1e-15,
      3.10e-10, 9.81}},
    {"nimesulide-37",
     {1476.0, 4.108, 0.028, 1.3e-2, 1.235e-2, 1.8e-7, 7.388e-10, 993.0, 6.91e-4, 6.96e-7, 1e-15,
      2.82e-10, 9.81}},
}};

struct FieldRef {
  const char* key;
  double DrugParams::*member;
};

const std::array<FieldRef, 13> kFields{{
    {"rho_s", &DrugParams::rho_s},
    {"C_s0", &DrugParams::c_s0},
    {"C_sf", &DrugParams::c_sf},
    {"k_r", &DrugParams::k_r},
    {"k_rb", &DrugParams::k_rb},
    {"k_m_inf", &DrugParams::k_m_inf},
    {"D", &DrugParams::diffusivity},
    {"rho_f", &DrugParams::rho_f},
    {"eta_f", &DrugParams::eta_f},
    {"nu_f", &DrugParams::nu_f},
    {"alpha", &DrugParams::alpha},
    {"d_T", &DrugParams::tolman_length},
    {"g", &DrugParams::g},
}};

const FieldRef* find_field(std::string_view key) {
  for (const auto& f : kFields) {
    if (key == f.key) return &f;
  }
  return nullptr;
}

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

void validate(const DrugParams& drug) {
  for (const auto& f : kFields) require_positive(drug.*f.member, f.key);
  if (drug.c_s0 < drug.c_sf) throw std::invalid_argument("C_s0 must be >= C_sf");
  if (drug.k_rb == drug.k_r) {
    throw std::invalid_argument("k_rb == k_r makes the recrystallization closed form singular");
  }
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& p : kPresets) out.emplace_back(p.name);
    return out;
  }();
  return names;
}

DrugParams preset(std::string_view name) {
  for (const auto& p : kPresets) {
    if (name == p.name) return p.params;
  }
  throw std::invalid_argument("unknown drug preset '" + std::string(name) + "'");
}

const std::vector<std::string>& field_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& f : kFields) out.emplace_back(f.key);
    return out;
  }();
  return names;
}

double get_field(const DrugParams& drug, std::string_view key) {
  const FieldRef* f = find_field(key);
  if (!f) throw std::invalid_argument("unknown drug parameter '" + std::string(key) + "'");
  return drug.*f->member;
}

void set_field(DrugParams& drug, std::string_view key, double value) {
  const FieldRef* f = find_field(key);
  if (!f) throw std::invalid_argument("unknown drug parameter '" + std::string(key) + "'");
  drug.*f->member = value;
}

DrugParams parse_param_text(std::string_view text, const DrugParams& base) {
  DrugParams out = base;
  int line_no = 0;
  for (std::string_view line : text_util::split_lines(text)) {
    ++line_no;
    line = text_util::trim(text_util::strip_comment(line));
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 'name = value'");
    }
    auto key = text_util::trim(line.substr(0, eq));
    auto value = text_util::trim(line.substr(eq + 1));
    double v = 0.0;
    if (!text_util::parse_double(value, v)) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": bad number '" +
                                  std::string(value) + "'");
    }
    try {
      set_field(out, key, v);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

DrugParams load_param_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open parameter file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  DrugParams drug = parse_param_text(buf.str());
  validate(drug);
  return drug;
}

std::string format_param_text(const DrugParams& drug) {
  std::string out;
  for (const auto& f : kFields) {
    out += f.key;
    out += " = ";
    out += text_util::format_double(drug.*f.member);
    out += '\n';
  }
  return out;
}

double solubility(double t, const DrugParams& drug) {
  return drug.c_sf + (drug.c_s0 - drug.c_sf) * std::exp(-drug.k_r * t);
}

double delta_u(double r_eq, const DrugParams& drug) {
  if (drug.rho_s <= drug.rho_f) {
    throw std::invalid_argument("delta_u: solid must be denser than the fluid");
  }
  const double diameter = 2.0 * r_eq;
  return (drug.rho_s - drug.rho_f) * drug.g * diameter * diameter / (18.0 * drug.eta_f);
}

double r_equivalent(double area) { return std::sqrt(area / kPi); }

double k_d_curved(double r, double r_eq, const DrugParams& drug) {
  if (!(r > 0.0)) throw std::invalid_argument("k_d_curved: radius must be positive");
  const double d = drug.diffusivity;
  const double reynolds_term = std::sqrt(2.0 * r * delta_u(r_eq, drug) / drug.nu_f);
  return d / (2.0 * r) * (2.0 + 0.6 * reynolds_term * std::cbrt(drug.nu_f / d));
}

double k_d_flat(double r_eq, const DrugParams& drug) {
  if (!(r_eq > 0.0)) throw std::invalid_argument("k_d_flat: R_eq must be positive");
  const double d = drug.diffusivity;
  return 0.621 * std::pow(d, 2.0 / 3.0) * std::pow(drug.nu_f, -1.0 / 6.0) *
         std::sqrt(delta_u(r_eq, drug) / r_eq);
}

double r_plane(double r_eq, const DrugParams& drug) {
  if (!(r_eq > 0.0)) throw std::invalid_argument("r_plane: R_eq must be positive");
  const double d = drug.diffusivity;
  const double base = std::pow(d, 2.0 / 3.0) * std::pow(drug.nu_f, -1.0 / 6.0);
  const double buoyancy = drug.g * (drug.rho_s - drug.rho_f) / drug.eta_f;
  const double gamma1 = 0.1 * base * std::sqrt(4.0 * buoyancy) * r_eq;
  const double gamma2 = 0.207 * base * std::sqrt(2.0 * buoyancy) * std::sqrt(r_eq);
  const double root = std::sqrt(gamma1 * gamma1 + 4.0 * d * gamma2);
  return 0.5 * gamma1 * ((gamma1 + root) / (gamma2 * gamma2)) + d / gamma2;
}

double k_m_curved(double r, const DrugParams& drug) {
  if (!(r > 0.0)) throw std::invalid_argument("k_m_curved: radius must be positive");
  return drug.k_m_inf * (drug.alpha / (r * r * r) + r / (r + 2.0 * drug.tolman_length));
}

namespace {

double combine(double k_d, double k_m, double sigma) {
  return 1.0 / (sigma * (1.0 / k_d + sigma / k_m));
}

}  // namespace

TransferEval overall_k(double r, double r_eq, const DrugParams& drug, SigmaPolicy policy) {
  if (!(r_eq > 0.0)) throw std::invalid_argument("overall_k: R_eq must be positive");
  if (!(r > 0.0)) throw std::invalid_argument("overall_k: radius must be positive");
  TransferEval e;
  e.radius = r;
  e.r_eq = r_eq;
  e.used_flat_branch = r > r_plane(r_eq, drug);
  e.k_d = e.used_flat_branch ? k_d_flat(r_eq, drug) : k_d_curved(r, r_eq, drug);
  e.k_m = k_m_curved(r, drug);
  if (e.used_flat_branch && policy == SigmaPolicy::unity) {
    e.sigma = 1.0;
  } else {
    e.sigma = 1.0 + drug.diffusivity / (e.k_d * r);
  }
  e.k = combine(e.k_d, e.k_m, e.sigma);
  return e;
}

TransferEval overall_k_flat(double r_eq, const DrugParams& drug) {
  TransferEval e;
  e.radius = std::numeric_limits<double>::infinity();
  e.r_eq = r_eq;
  e.used_flat_branch = true;
  e.k_d = k_d_flat(r_eq, drug);
  e.k_m = drug.k_m_inf;
  e.sigma = 1.0;
  e.k = combine(e.k_d, e.k_m, e.sigma);
  return e;
}

TransferEval transfer_at_curvature(double kappa, double r_eq, double r_min, const DrugParams& drug,
                                   SigmaPolicy policy) {
  if (!(kappa > 0.0)) return overall_k_flat(r_eq, drug);
  const double r = 1.0 / kappa;
  if (!std::isfinite(r)) return overall_k_flat(r_eq, drug);
  return overall_k(std::max(r, r_min), r_eq, drug, policy);
}

TransferModel::TransferModel(const DrugParams& drug, double r_eq, double r_min, SigmaPolicy policy)
    : diffusivity_(drug.diffusivity),
      k_m_inf_(drug.k_m_inf),
      alpha_(drug.alpha),
      two_d_t_(2.0 * drug.tolman_length),
      r_eq_(r_eq),
      r_min_(r_min),
      r_plane_(physchem::r_plane(r_eq, drug)),
      k_d_flat_(k_d_flat(r_eq, drug)),
      curved_coeff_(0.6 * std::cbrt(drug.nu_f / drug.diffusivity) *
                    std::sqrt(2.0 * delta_u(r_eq, drug) / drug.nu_f)),
      k_flat_limit_(overall_k_flat(r_eq, drug).k),
      policy_(policy) {}

double TransferModel::k_at_curvature(double kappa) const {
  if (!(kappa > 0.0)) return k_flat_limit_;
  double r = 1.0 / kappa;
  if (!std::isfinite(r)) return k_flat_limit_;
  if (r < r_min_) r = r_min_;
  double k_d;
  double sigma;
  if (r <= r_plane_) {
    k_d = diffusivity_ / (2.0 * r) * (2.0 + curved_coeff_ * std::sqrt(r));
    sigma = 1.0 + diffusivity_ / (k_d * r);
  } else {
    k_d = k_d_flat_;
    sigma = policy_ == SigmaPolicy::unity ? 1.0 : 1.0 + diffusivity_ / (k_d * r);
  }
  const double k_m = k_m_inf_ * (alpha_ / (r * r * r) + r / (r + two_d_t_));
  return combine(k_d, k_m, sigma);
}

}  // namespace dissolve::physchem
