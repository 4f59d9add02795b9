#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dissolve/common.hpp"
#include "dissolve/dynamics.hpp"
#include "dissolve/geometry.hpp"
#include "dissolve/physchem.hpp"
#include "dissolve/sampling.hpp"

namespace dissolve::scenario {

/// Invalid configuration text. `line` is 0 when the problem is not tied to a line.
class ConfigError : public Error {
 public:
  ConfigError(int line, std::string key, const std::string& message);
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

enum class ShapeFamily { circle, superellipse, rectangle };

struct ParticleSpec {
  geometry::ShapeSpec shape;
  int multiplicity = 1;
  bool operator==(const ParticleSpec&) const = default;
};

/// Random population: equivalent radii from a fixed value or a Weibull law,
/// shapes of one family with a uniformly drawn aspect ratio.
struct SamplerSpec {
  int count = 0;
  ShapeFamily family = ShapeFamily::circle;
  double radius = 0.0;  ///< fixed equivalent radius [m]; 0 selects the Weibull law
  sampling::WeibullParams weibull{};  ///< lengths in metres
  double aspect_min = 1.0;
  double aspect_max = 1.0;
  double exponent = 2.0;  ///< superellipse exponent
  bool random_rotation = false;
  double target_total_area = 0.0;  ///< rescale radii to this total area when > 0 [m^2]
  bool operator==(const SamplerSpec&) const = default;
};

enum class GridMode { shared, per_particle };

struct GridSpec {
  GridMode mode = GridMode::shared;
  double dx = 0.0;  ///< 0 selects min width / cells_across
  int n = 0;        ///< 0 selects padding x extent / dx
  double padding = 2.5;
  int cells_across = 10;
  bool operator==(const GridSpec&) const = default;
};

struct ScenarioConfig {
  std::string name;
  std::string drug_name;  ///< preset name; empty when drug_file is used
  std::string drug_file;
  std::vector<std::pair<std::string, double>> drug_overrides;
  physchem::DrugParams drug;  ///< resolved parameters
  std::vector<ParticleSpec> particles;
  std::optional<SamplerSpec> sampler;
  double v_plus = 0.0;
  double v_ext = 0.0;  ///< [m^3] with unit depth
  double t_end = 0.0;
  double cfl = 0.9;
  double dt_max = 0.0;  ///< 0 selects t_end / 1e4
  double output_interval = 0.0;  ///< 0 selects t_end / 200
  double snapshot_interval = 0.0;  ///< 0 disables contour snapshots
  bool snapshot_fields = false;
  bool per_particle_csv = true;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  GridSpec grid;
  physchem::SigmaPolicy sigma_policy = physchem::SigmaPolicy::continuous;
  int reinit_every = 0;
  dynamics::Coupling coupling = dynamics::Coupling::area;
  dynamics::SpeedExtension speed_extension = dynamics::SpeedExtension::contour;
  bool crop_grids = true;
  int jobs = 1;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses the declarative format: `key = value` lines with optional units
/// (um, nm, mm, m; um2, mm2, m2 for areas), `[particle]` and `[sampler]`
/// blocks, `#` comments. Relative drug files resolve against `base_dir`.
ScenarioConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);

/// Canonical text form in SI units; parse_config(serialize_config(c)) == c.
/// `standalone` inlines every drug parameter instead of naming a file.
std::string serialize_config(const ScenarioConfig& config, bool standalone = false);

/// Checks the invariants of a resolved config; throws ConfigError.
void validate(const ScenarioConfig& config);

/// Shapes of the sampler population, reproducible from config.seed.
std::vector<ParticleSpec> sample_particles(const SamplerSpec& sampler, std::uint64_t seed);

/// Explicit particles followed by the sampled population.
std::vector<ParticleSpec> all_particles(const ScenarioConfig& config);

/// Grid per particle following the sizing rules of config.grid.
std::vector<dynamics::ParticleInit> build_particles(const ScenarioConfig& config);

dynamics::EngineOptions engine_options(const ScenarioConfig& config);

const char* to_string(ShapeFamily f);
const char* to_string(GridMode m);
const char* to_string(physchem::SigmaPolicy p);
const char* to_string(dynamics::Coupling c);
const char* to_string(dynamics::SpeedExtension e);

}  // namespace dissolve::scenario
