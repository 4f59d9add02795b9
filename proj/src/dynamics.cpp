#include "dissolve/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dissolve/oracle.hpp"

namespace dissolve::dynamics {

namespace {

// Static partition over [0, n); per-index exceptions are rethrown in index
// order so failures do not depend on scheduling.
template <class F>
void parallel_for(std::size_t n, int jobs, F&& body) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) body(k);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (std::size_t k = w; k < n; k += workers) {
        try {
          body(k);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void remeasure(ParticleState& p, const physchem::DrugParams& drug, physchem::SigmaPolicy policy) {
  p.kappa = levelset::curvature_field(p.field);
  p.contour = geometry::extract_contour(p.field);
  if (p.contour.empty()) {
    p.last_measure = geometry::ContourMeasure{};
    return;
  }
  p.last_measure = geometry::measure(p.contour, p.field, p.kappa, drug, policy);
}

// Cells kept between the contour bounding box and a cropped grid's edge.
constexpr int kCropMargin = levelset::kGuardCells + 7;

// Particles only shrink, so the grid is cut down to the contour bounding box
// plus a margin once that saves at least a fifth of the side. Node positions
// and values are unchanged.
void maybe_crop(ParticleState& p, const physchem::DrugParams& drug, physchem::SigmaPolicy policy) {
  if (p.contour.empty()) return;
  const auto& g = p.field.grid();
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = x0;
  double x1 = -x0;
  double y1 = -x0;
  for (const auto& line : p.contour) {
    for (const Vec2& q : line.points) {
      x0 = std::min(x0, q.x);
      y0 = std::min(y0, q.y);
      x1 = std::max(x1, q.x);
      y1 = std::max(y1, q.y);
    }
  }
  const int i_lo = static_cast<int>(std::floor((x0 - g.origin.x) / g.dx)) - kCropMargin;
  const int i_hi = static_cast<int>(std::ceil((x1 - g.origin.x) / g.dx)) + kCropMargin;
  const int j_lo = static_cast<int>(std::floor((y0 - g.origin.y) / g.dx)) - kCropMargin;
  const int j_hi = static_cast<int>(std::ceil((y1 - g.origin.y) / g.dx)) + kCropMargin;
  const int n = std::max({i_hi - i_lo, j_hi - j_lo, 8});
  if (5 * n > 4 * g.n) return;
  auto place = [&](int lo, int hi) { return std::clamp(lo - (n - (hi - lo)) / 2, 0, g.n - n); };
  p.field = levelset::crop(p.field, place(i_lo, i_hi), place(j_lo, j_hi), n);
  remeasure(p, drug, policy);
}

// Curvature-dependent speed acts as diffusion of the front with coefficient
// |dK/dkappa| |C_s - C_b| / rho_s, which bounds explicit steps by dx^2.
// The slope is a +-10% secant in kappa. Curvatures below 1 / (grid side) are
// not resolvable from flat, so there the secant spans [kappa - 1/L, kappa + 1/L].
double diffusive_dt(const ParticleState& p, double drive, const physchem::DrugParams& drug,
                    physchem::SigmaPolicy policy, double cfl) {
  const double dx = p.field.grid().dx;
  const physchem::TransferModel model(drug, p.last_measure.r_eq, 0.5 * dx, policy);
  const double kappa_resolved = 1.0 / p.field.grid().side();
  double slope = 0.0;
  for (const auto& seg : p.last_measure.segments) {
    const double h =
        std::abs(seg.kappa) < kappa_resolved ? kappa_resolved : 0.1 * std::abs(seg.kappa);
    const double hi = model.k_at_curvature(seg.kappa + h);
    const double lo = model.k_at_curvature(seg.kappa - h);
    slope = std::max(slope, std::abs(hi - lo) / (2.0 * h));
  }
  const double b = slope * std::abs(drive) / drug.rho_s;
  return b > 0.0 ? 0.5 * cfl * dx * dx / b : std::numeric_limits<double>::infinity();
}

bool below_resolution(const ParticleState& p) {
  const double dx = p.field.grid().dx;
  return p.contour.empty() || p.last_measure.area < dx * dx;
}

void resolve_defaults(EngineOptions& o) {
  if (!(o.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (!(o.cfl > 0.0 && o.cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
  if (!(o.dt_max > 0.0)) o.dt_max = o.t_end / 1e4;
  if (!(o.output_interval > 0.0)) o.output_interval = o.t_end / 200.0;
}

std::string context(const SimState& s, const char* what) {
  std::ostringstream os;
  os << what << " (step " << s.step << ", t = " << s.t << " s)";
  return os.str();
}

}  // namespace

SimState initialize(const std::vector<ParticleInit>& inits, const physchem::DrugParams& drug,
                    double v_plus, double v_ext, const EngineOptions& opts) {
  physchem::validate(drug);
  SimState s;
  s.drug = drug;
  s.particles.reserve(inits.size());
  for (std::size_t k = 0; k < inits.size(); ++k) {
    const ParticleInit& in = inits[k];
    if (in.multiplicity < 1) throw std::invalid_argument("multiplicity must be at least 1");
    s.particles.push_back({static_cast<int>(k), geometry::sdf_init(in.shape, in.grid),
                           in.multiplicity, true, std::numeric_limits<double>::quiet_NaN(), {}, {}, {}});
  }
  parallel_for(s.particles.size(), opts.jobs,
               [&](std::size_t k) { remeasure(s.particles[k], drug, opts.sigma_policy); });
  double total_area = 0.0;
  for (const auto& p : s.particles) {
    if (below_resolution(p)) {
      throw std::invalid_argument("particle " + std::to_string(p.id) +
                                  " is smaller than one grid cell");
    }
    total_area += p.multiplicity * p.last_measure.area;
  }
  const bool have_plus = v_plus > 0.0;
  const bool have_ext = v_ext > 0.0;
  if (have_plus == have_ext) throw std::invalid_argument("give exactly one of V+ and V_ext");
  if (have_plus) {
    if (total_area <= 0.0) throw std::invalid_argument("V+ needs at least one particle");
    s.bulk.v_ext = v_plus * total_area;
  } else {
    s.bulk.v_ext = v_ext;
  }
  s.m_0 = solid_mass(s);
  return s;
}

double solid_mass(const SimState& s) {
  double a = 0.0;
  for (const auto& p : s.particles) {
    if (p.alive) a += p.multiplicity * p.last_measure.area;
  }
  return s.drug.rho_s * a;
}

double mass_residual(const SimState& s) {
  if (s.m_0 <= 0.0) return 0.0;
  const double now = solid_mass(s) + s.bulk.c_b * s.bulk.v_ext + s.bulk.m_c;
  return std::abs(s.m_0 - now) / s.m_0;
}

levelset::SpeedField speed_field(const ParticleState& p, const BulkState& bulk, double t,
                                 const physchem::DrugParams& drug, physchem::SigmaPolicy policy,
                                 SpeedExtension extension) {
  const auto& g = p.field.grid();
  levelset::SpeedField v{std::vector<double>(g.node_count(), 0.0)};
  const double drive = physchem::solubility(t, drug) - bulk.c_b;
  if (!p.alive || drive == 0.0) return v;
  const double scale = -drive / drug.rho_s;
  if (extension == SpeedExtension::contour) {
    std::vector<double> k;
    k.reserve(p.last_measure.segments.size());
    for (const auto& seg : p.last_measure.segments) k.push_back(seg.k);
    v.v = geometry::extend_from_contour(p.contour, k, g);
    for (double& x : v.v) x *= scale;
    return v;
  }
  const physchem::TransferModel model(drug, p.last_measure.r_eq, 0.5 * g.dx, policy);
  for (std::size_t k = 0; k < v.v.size(); ++k) v.v[k] = scale * model.k_at_curvature(p.kappa[k]);
  return v;
}

double stable_dt(const SimState& s, const EngineOptions& opts) {
  double dt = opts.dt_max;
  for (const auto& p : s.particles) {
    if (!p.alive) continue;
    const auto v = speed_field(p, s.bulk, s.t, s.drug, opts.sigma_policy, opts.extension);
    dt = std::min(dt, levelset::cfl_dt(v, p.field.grid(), opts.cfl, opts.dt_max));
    const double drive = physchem::solubility(s.t, s.drug) - s.bulk.c_b;
    dt = std::min(dt, diffusive_dt(p, drive, s.drug, opts.sigma_policy, opts.cfl));
  }
  return dt;
}

double step_dissolution(SimState& s, const EngineOptions& opts, double dt_cap) {
  if (s.bulk.regime != Regime::dissolution) {
    throw std::logic_error("step_dissolution called in the recrystallization regime");
  }
  std::vector<std::size_t> alive;
  for (std::size_t k = 0; k < s.particles.size(); ++k) {
    if (s.particles[k].alive) alive.push_back(k);
  }
  if (alive.empty()) {
    s.t += dt_cap;
    ++s.step;
    return dt_cap;
  }

  std::vector<levelset::SpeedField> speeds(alive.size());
  parallel_for(alive.size(), opts.jobs, [&](std::size_t a) {
    speeds[a] = speed_field(s.particles[alive[a]], s.bulk, s.t, s.drug, opts.sigma_policy,
                            opts.extension);
  });
  const double drive = physchem::solubility(s.t, s.drug) - s.bulk.c_b;
  double dt = dt_cap;
  for (std::size_t a = 0; a < alive.size(); ++a) {
    const ParticleState& p = s.particles[alive[a]];
    dt = std::min(dt, levelset::cfl_dt(speeds[a], p.field.grid(), opts.cfl, dt_cap));
    dt = std::min(dt, diffusive_dt(p, drive, s.drug, opts.sigma_policy, opts.cfl));
  }

  // bulk update from the state at the start of the step
  double flux = 0.0;
  double area_before = 0.0;
  for (std::size_t k : alive) {
    const auto& p = s.particles[k];
    flux += p.multiplicity * geometry::boundary_integral_k(p.last_measure);
    area_before += p.multiplicity * p.last_measure.area;
  }
  s.dissolved_by_flux += dt * drive * flux;
  if (opts.coupling == Coupling::flux) s.bulk.c_b += dt * drive / s.bulk.v_ext * flux;

  const bool reinit = opts.reinit_every > 0 && (s.step + 1) % opts.reinit_every == 0;
  parallel_for(alive.size(), opts.jobs, [&](std::size_t a) {
    ParticleState& p = s.particles[alive[a]];
    levelset::LevelSetField next(p.field.grid());
    levelset::upwind_step_into(p.field, speeds[a], dt, next);
    p.field = std::move(next);
    if (reinit) geometry::reinitialize(p.field);
    try {
      levelset::check_padding(p.field);
    } catch (const PaddingViolation& e) {
      throw PaddingViolation("particle " + std::to_string(p.id) + ": " + e.what());
    }
    remeasure(p, s.drug, opts.sigma_policy);
    if (opts.crop_grids) maybe_crop(p, s.drug, opts.sigma_policy);
  });

  s.t += dt;
  ++s.step;
  double area_after = 0.0;
  for (std::size_t k : alive) {
    ParticleState& p = s.particles[k];
    if (!below_resolution(p)) {
      area_after += p.multiplicity * p.last_measure.area;
      continue;
    }
    // the unresolved remainder dissolves at once
    s.dissolved_by_flux += s.drug.rho_s * p.multiplicity * p.last_measure.area;
    if (opts.coupling == Coupling::flux) {
      s.bulk.c_b += s.drug.rho_s * p.multiplicity * p.last_measure.area / s.bulk.v_ext;
    }
    p.alive = false;
    p.death_time = s.t;
    p.last_measure = geometry::ContourMeasure{};
  }
  s.dissolved_by_area += s.drug.rho_s * (area_before - area_after);
  if (opts.coupling == Coupling::area) {
    s.bulk.c_b += s.drug.rho_s * (area_before - area_after) / s.bulk.v_ext;
  }
  return dt;
}

bool check_regime(SimState& s) {
  const double cs = physchem::solubility(s.t, s.drug);
  BulkState& b = s.bulk;
  if (b.regime == Regime::dissolution && b.c_b >= cs) {
    b.regime = Regime::recrystallization;
    b.t_star = s.t;
    b.c_b_star = b.c_b;
    b.m_c_star = b.m_c;
    ++b.switches;
    return true;
  }
  if (b.regime == Regime::recrystallization && b.c_b < cs) {
    b.regime = Regime::dissolution;
    ++b.switches;
    return true;
  }
  return false;
}

void step_recrystallization(SimState& s, double dt) {
  BulkState& b = s.bulk;
  if (b.regime != Regime::recrystallization) {
    throw std::logic_error("step_recrystallization called in the dissolution regime");
  }
  const double t = s.t + dt;
  b.c_b = oracle::recrystallization_c_b(t, b.t_star, b.c_b_star, s.drug);
  // dM_c/dt = -V_ext dC_b/dt
  b.m_c = b.m_c_star + b.v_ext * (b.c_b_star - b.c_b);
  s.t = t;
  ++s.step;
}

SeriesRecord series_record(const SimState& s) {
  SeriesRecord r;
  r.t = s.t;
  r.c_b = s.bulk.c_b;
  r.c_s = physchem::solubility(s.t, s.drug);
  r.regime = s.bulk.regime;
  r.m_c = s.bulk.m_c;
  for (const auto& p : s.particles) {
    if (!p.alive) continue;
    ++r.alive_count;
    r.total_p += p.multiplicity * p.last_measure.perimeter;
    r.total_a += p.multiplicity * p.last_measure.area;
  }
  r.mass_residual = mass_residual(s);
  r.flux_gap = s.m_0 > 0.0 ? (s.dissolved_by_flux - s.dissolved_by_area) / s.m_0 : 0.0;
  return r;
}

std::vector<ParticleRecord> particle_records(const SimState& s) {
  std::vector<ParticleRecord> out;
  out.reserve(s.particles.size());
  for (const auto& p : s.particles) {
    const auto& m = p.last_measure;
    out.push_back({p.id, s.t, p.alive, m.perimeter, m.area, m.r_eq, p.alive ? m.min_radius : 0.0,
                   m.max_k});
  }
  return out;
}

RunResult run(SimState& s, const EngineOptions& options, const Observer& on_output) {
  EngineOptions opts = options;
  resolve_defaults(opts);
  RunResult result;

  auto record = [&] {
    result.series.push_back(series_record(s));
    result.max_mass_residual = std::max(result.max_mass_residual, result.series.back().mass_residual);
    const auto rows = particle_records(s);
    result.particles.insert(result.particles.end(), rows.begin(), rows.end());
    if (on_output) on_output(s);
  };

  check_regime(s);
  if (s.bulk.regime == Regime::recrystallization) result.t_star = s.t;
  record();
  long next_index = 1;
  while (s.t < opts.t_end) {
    const double out_t = std::min(opts.t_end, static_cast<double>(next_index) * opts.output_interval);
    const double dt_cap = std::min(opts.dt_max, out_t - s.t);
    try {
      if (s.bulk.regime == Regime::dissolution) {
        step_dissolution(s, opts, dt_cap);
      } else {
        step_recrystallization(s, dt_cap);
      }
    } catch (const CflViolation& e) {
      throw CflViolation(context(s, e.what()));
    } catch (const PaddingViolation& e) {
      throw PaddingViolation(context(s, e.what()));
    } catch (const std::exception& e) {
      throw Error(context(s, e.what()));
    }
    if (std::abs(s.t - out_t) <= 1e-9 * opts.output_interval) s.t = out_t;
    if (check_regime(s) && s.bulk.regime == Regime::recrystallization && std::isnan(result.t_star)) {
      result.t_star = s.t;
    }
    if (s.t >= out_t) {
      record();
      ++next_index;
    }
  }
  result.steps = s.step;
  return result;
}

}  // namespace dissolve::dynamics
