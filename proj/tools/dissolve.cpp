#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dissolve/oracle.hpp"
#include "dissolve/output.hpp"
#include "dissolve/physchem.hpp"
#include "dissolve/presets.hpp"
#include "dissolve/scenario.hpp"

namespace {

using namespace dissolve;

struct RunArgs {
  std::string config;
  std::string preset;
  std::string manifest;
  std::string out;
  std::optional<double> dx_um;
  std::optional<double> cfl;
  std::optional<double> t_end;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<double> snapshot_every;
  bool quiet = false;
};

int do_run(const RunArgs& a) {
  scenario::ScenarioConfig c;
  if (!a.config.empty()) c = scenario::load_config(a.config);
  else if (!a.preset.empty()) c = presets::load(a.preset);
  else c = output::config_from_manifest(a.manifest);

  if (!a.out.empty()) c.output_dir = a.out;
  if (a.dx_um) c.grid.dx = *a.dx_um * 1e-6;
  if (a.cfl) c.cfl = *a.cfl;
  if (a.t_end) c.t_end = *a.t_end;
  if (a.seed) c.seed = *a.seed;
  if (a.jobs) c.jobs = *a.jobs;
  if (a.snapshot_every) c.snapshot_interval = *a.snapshot_every;
  scenario::validate(c);

  const output::RunReport r = output::run_scenario(c, a.quiet ? nullptr : &std::cerr);
  if (!r.completed) {
    std::cerr << "error: " << r.error << "\npartial output in " << r.directory.string() << '\n';
    return 1;
  }
  std::cout << "completed " << (c.name.empty() ? std::string("run") : c.name) << " in "
            << r.wall_seconds << " s, " << r.result.steps << " steps\n"
            << "max mass residual " << r.result.max_mass_residual << '\n';
  if (!std::isnan(r.result.t_star)) std::cout << "recrystallization from t* = " << r.result.t_star << " s\n";
  std::cout << "output in " << r.directory.string() << '\n';
  return 0;
}

struct OracleArgs {
  std::string drug;
  double r0_um = 0.0;
  double v_plus = 0.0;
  double t_end = 1000.0;
  double dt = 0.01;
  std::string out;
};

int do_oracle(const OracleArgs& a) {
  const physchem::DrugParams drug = physchem::preset(a.drug);
  const double r0 = a.r0_um * 1e-6;
  const double v_ext = a.v_plus * kPi * r0 * r0;
  const oracle::CircleTrajectory traj = oracle::solve_circle(r0, drug, v_ext, a.t_end, a.dt);
  if (a.out.empty()) {
    oracle::write_trajectory_csv(std::cout, traj);
  } else {
    std::ofstream f(a.out);
    if (!f) throw Error("cannot write " + a.out);
    oracle::write_trajectory_csv(f, traj);
  }
  std::cerr << "stop: " << oracle::to_string(traj.stop) << " at t = " << traj.samples.back().t
            << " s, R = " << traj.samples.back().r * 1e6 << " um\n";
  if (traj.non_monotone) std::cerr << "warning: R(t) is not monotone, reduce --dt\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Level-set simulator for drug particle dissolution and recrystallization"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write its outputs");
  auto* src_config = run_cmd->add_option("--config", run.config, "Scenario file")->check(CLI::ExistingFile);
  auto* src_preset = run_cmd->add_option("--preset", run.preset, "Built-in preset name");
  auto* src_manifest =
      run_cmd->add_option("--manifest", run.manifest, "Rerun from a manifest.json")->check(CLI::ExistingFile);
  src_config->excludes(src_preset, src_manifest);
  src_preset->excludes(src_manifest);
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--dx", run.dx_um, "Grid spacing [um]")->check(CLI::PositiveNumber);
  run_cmd->add_option("--cfl", run.cfl, "CFL ratio in (0, 1]");
  run_cmd->add_option("--t-end", run.t_end, "Final time [s]")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", run.seed, "Sampler seed");
  run_cmd->add_option("--jobs", run.jobs, "Parallel particle workers")->check(CLI::PositiveNumber);
  run_cmd->add_option("--snapshot-every", run.snapshot_every, "Contour snapshot interval [s]");
  run_cmd->add_flag("--quiet", run.quiet, "No progress lines");

  auto* presets_cmd = app.add_subcommand("presets", "List or print built-in scenarios");
  presets_cmd->require_subcommand(1);
  presets_cmd->add_subcommand("list", "Names and summaries");
  std::string show_name;
  auto* show_cmd = presets_cmd->add_subcommand("show", "Print a preset's config text");
  show_cmd->add_option("name", show_name)->required();

  OracleArgs orc;
  auto* oracle_cmd = app.add_subcommand("oracle", "Reference trajectory of one circle (RK3)");
  oracle_cmd->add_option("--drug", orc.drug, "Drug preset")->required();
  oracle_cmd->add_option("--r0", orc.r0_um, "Initial radius [um]")->required()->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--vplus", orc.v_plus, "V_ext / V_0")->required()->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--t-end", orc.t_end, "Final time [s]")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--dt", orc.dt, "RK3 step [s]")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--out", orc.out, "CSV file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      if (run.config.empty() && run.preset.empty() && run.manifest.empty()) {
        std::cerr << "run: give one of --config, --preset, --manifest\n";
        return 2;
      }
      return do_run(run);
    }
    if (presets_cmd->parsed()) {
      if (show_cmd->parsed()) {
        std::cout << presets::find(show_name).text;
      } else {
        for (const auto& p : presets::all()) std::cout << p.name << "\t" << p.summary << '\n';
      }
      return 0;
    }
    return do_oracle(orc);
  } catch (const scenario::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
