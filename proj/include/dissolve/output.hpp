#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "dissolve/dynamics.hpp"
#include "dissolve/scenario.hpp"

namespace dissolve::output {

/// Bumped whenever a CSV column set or the manifest layout changes.
inline constexpr int kSchemaVersion = 1;

const char* version();

inline constexpr const char* kTimeseriesHeader =
    "t,C_b,C_s,regime,M_c,alive_count,total_p,total_A,mass_residual,flux_gap";
inline constexpr const char* kMeasuresHeader = "particle,t,alive,p,A,R_eq,min_R,max_K";
inline constexpr const char* kParticleHeader = "t,R,C_b,C_s,regime";
inline constexpr const char* kRadiiHeader = "particle,shape,multiplicity,area,R_eq";
inline constexpr const char* kContourHeader = "particle,t,loop,x,y";

struct RunReport {
  dynamics::RunResult result;
  bool completed = false;
  std::string error;  ///< empty when completed
  double wall_seconds = 0.0;
  std::filesystem::path directory;
};

/// Runs a config and writes into config.output_dir:
///   timeseries.csv, measures.csv, radii.csv, particles/particle_<id>.csv,
///   contours.csv and contours.json when snapshots are enabled,
///   fields/particle_<id>_<k>.csv when field snapshots are enabled,
///   manifest.json (standalone config, seed, version, wall time, schemas, status).
/// Engine failures do not throw: rows written so far stay on disk, the CSVs get
/// a trailing `# truncated` line and the manifest status is "failed".
/// Throws only when the output directory cannot be written.
RunReport run_scenario(const scenario::ScenarioConfig& config, std::ostream* progress = nullptr);

/// Config stored in a manifest written by run_scenario.
scenario::ScenarioConfig config_from_manifest(const std::filesystem::path& manifest);

}  // namespace dissolve::output
