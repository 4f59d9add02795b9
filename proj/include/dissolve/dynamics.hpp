#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "dissolve/common.hpp"
#include "dissolve/geometry.hpp"
#include "dissolve/levelset.hpp"
#include "dissolve/physchem.hpp"

namespace dissolve::dynamics {

/// One particle family: a level-set field standing for `multiplicity`
/// identical copies.
struct ParticleState {
  int id = 0;
  levelset::LevelSetField field;
  int multiplicity = 1;
  bool alive = true;
  double death_time = std::numeric_limits<double>::quiet_NaN();
  geometry::Contour contour;
  geometry::ContourMeasure last_measure;
  std::vector<double> kappa;  ///< node curvature of `field`
};

struct BulkState {
  double c_b = 0.0;
  double m_c = 0.0;  ///< recrystallized mass per unit depth [kg/m]
  Regime regime = Regime::dissolution;
  double t_star = std::numeric_limits<double>::quiet_NaN();  ///< last switch into recrystallization
  double c_b_star = 0.0;  ///< C_b at t_star
  double m_c_star = 0.0;  ///< M_c at t_star
  double v_ext = 0.0;     ///< [m^3] with unit depth
  int switches = 0;
};

struct SimState {
  double t = 0.0;
  std::vector<ParticleState> particles;
  BulkState bulk;
  physchem::DrugParams drug;
  long step = 0;
  double m_0 = 0.0;  ///< initial solid mass per unit depth [kg/m]
  double dissolved_by_area = 0.0;  ///< rho_s x measured area lost [kg/m]
  double dissolved_by_flux = 0.0;  ///< time integral of (C_s - C_b) sum M_p int K ds [kg/m]
};

/// How C_b follows the particles during dissolution.
enum class Coupling {
  area,  ///< C_b gains rho_s times the measured area lost in the step
  flux,  ///< forward Euler on dt (C_s - C_b) / V_ext sum_p M_p int K ds
};

/// How the normal speed is defined away from the zero level set.
enum class SpeedExtension {
  contour,  ///< every node takes K of its nearest contour segment
  node,     ///< every node evaluates K from its own curvature
};

struct EngineOptions {
  double cfl = 0.9;
  double t_end = 0.0;
  double dt_max = 0.0;           ///< <= 0 selects t_end / 1e4
  double output_interval = 0.0;  ///< <= 0 selects t_end / 200
  physchem::SigmaPolicy sigma_policy = physchem::SigmaPolicy::continuous;
  int jobs = 1;
  int reinit_every = 0;  ///< 0 disables reinitialization
  Coupling coupling = Coupling::area;
  SpeedExtension extension = SpeedExtension::contour;
  bool crop_grids = true;  ///< shrink particle grids along with the particles
};

struct ParticleInit {
  geometry::ShapeSpec shape;
  int multiplicity = 1;
  levelset::Grid2D grid;
};

/// Builds the initial state. V_ext is either given directly or derived from
/// V+ times the measured total initial area (unit depth).
SimState initialize(const std::vector<ParticleInit>& particles, const physchem::DrugParams& drug,
                    double v_plus, double v_ext, const EngineOptions& opts);

/// Solid mass per unit depth: rho_s sum_p M_p A_p.
double solid_mass(const SimState& s);
/// |M_0 - (M_s + C_b V_ext + M_c)| / M_0, or 0 when M_0 = 0.
double mass_residual(const SimState& s);

/// v = -K (C_s(t) - C_b) / rho_s at every node, with K taken per `extension`.
levelset::SpeedField speed_field(const ParticleState& p, const BulkState& bulk, double t,
                                 const physchem::DrugParams& drug,
                                 physchem::SigmaPolicy policy = physchem::SigmaPolicy::continuous,
                                 SpeedExtension extension = SpeedExtension::contour);

/// Largest stable dt over the alive particles: the CFL bound, the diffusive
/// bound dx^2 / (2 |dK/dkappa| |C_s - C_b| / rho_s) scaled by cfl, and dt_max.
double stable_dt(const SimState& s, const EngineOptions& opts);

/// One forward-Euler / upwind step of length at most dt_cap. Returns the dt taken.
double step_dissolution(SimState& s, const EngineOptions& opts, double dt_cap);

/// Guard-based switch on sign(C_s(t) - C_b). Returns true if the regime changed.
bool check_regime(SimState& s);

/// Exact advance of C_b and M_c over dt with frozen particles.
void step_recrystallization(SimState& s, double dt);

struct SeriesRecord {
  double t = 0.0;
  double c_b = 0.0;
  double c_s = 0.0;
  Regime regime = Regime::dissolution;
  double m_c = 0.0;
  int alive_count = 0;
  double total_p = 0.0;  ///< multiplicity-weighted [m]
  double total_a = 0.0;  ///< multiplicity-weighted [m^2]
  double mass_residual = 0.0;
  double flux_gap = 0.0;  ///< (dissolved_by_flux - dissolved_by_area) / M_0
};

struct ParticleRecord {
  int id = 0;
  double t = 0.0;
  bool alive = true;
  double p = 0.0;
  double a = 0.0;
  double r_eq = 0.0;
  double min_r = 0.0;
  double max_k = 0.0;
};

struct RunResult {
  std::vector<SeriesRecord> series;
  std::vector<ParticleRecord> particles;  ///< per output time, in particle order
  double t_star = std::numeric_limits<double>::quiet_NaN();  ///< first switch, if any
  double max_mass_residual = 0.0;
  long steps = 0;
};

SeriesRecord series_record(const SimState& s);
std::vector<ParticleRecord> particle_records(const SimState& s);

/// Called after every output record with the current state.
using Observer = std::function<void(const SimState&)>;

/// Advances to t_end, recording every output interval (and at t = 0, t_end).
/// Errors are rethrown as dissolve::Error carrying the step and time.
RunResult run(SimState& s, const EngineOptions& opts, const Observer& on_output = {});

}  // namespace dissolve::dynamics
