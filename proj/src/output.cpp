#include "dissolve/output.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <variant>
#include <vector>

#include <json.hpp>

#include "text_util.hpp"

#ifndef DISSOLVE_VERSION
#define DISSOLVE_VERSION "unknown"
#endif

namespace dissolve::output {

const char* version() { return DISSOLVE_VERSION; }

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using text_util::format_double;

std::string num(double v) { return format_double(v); }

std::ofstream open_csv(const fs::path& path, const char* header) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << header << '\n';
  return out;
}

const char* shape_name(const geometry::ShapeSpec& s) {
  return std::visit(
      [](const auto& v) -> const char* {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, geometry::Circle>) return "circle";
        else if constexpr (std::is_same_v<T, geometry::Superellipse>) return "superellipse";
        else return "rectangle";
      },
      s.shape);
}

json schemas() {
  return {{"timeseries.csv", kTimeseriesHeader},
          {"measures.csv", kMeasuresHeader},
          {"particles/particle_<id>.csv", kParticleHeader},
          {"radii.csv", kRadiiHeader},
          {"contours.csv", kContourHeader},
          {"fields/particle_<id>_<k>.csv", "header lines then i,j,phi"}};
}

// Streams every output record to disk as it is produced so that a failed run
// leaves all rows up to the failure behind.
class Writer {
 public:
  Writer(const scenario::ScenarioConfig& c, const std::vector<dynamics::ParticleInit>& inits,
         const fs::path& dir)
      : config_(c), dir_(dir) {
    series_ = open_csv(dir / "timeseries.csv", kTimeseriesHeader);
    measures_ = open_csv(dir / "measures.csv", kMeasuresHeader);
    std::ofstream radii = open_csv(dir / "radii.csv", kRadiiHeader);
    for (std::size_t k = 0; k < inits.size(); ++k) {
      const double a = geometry::area(inits[k].shape);
      radii << k << ',' << shape_name(inits[k].shape) << ',' << inits[k].multiplicity << ','
            << num(a) << ',' << num(physchem::r_equivalent(a)) << '\n';
    }
    if (c.per_particle_csv) {
      fs::create_directories(dir / "particles");
      for (std::size_t k = 0; k < inits.size(); ++k) {
        particle_.push_back(std::make_unique<std::ofstream>(
            open_csv(dir / "particles" / ("particle_" + std::to_string(k) + ".csv"), kParticleHeader)));
      }
    }
    if (c.snapshot_interval > 0.0) {
      contours_ = open_csv(dir / "contours.csv", kContourHeader);
      if (c.snapshot_fields) fs::create_directories(dir / "fields");
    }
  }

  void observe(const dynamics::SimState& s) {
    const dynamics::SeriesRecord r = dynamics::series_record(s);
    series_ << num(r.t) << ',' << num(r.c_b) << ',' << num(r.c_s) << ',' << to_string(r.regime)
            << ',' << num(r.m_c) << ',' << r.alive_count << ',' << num(r.total_p) << ','
            << num(r.total_a) << ',' << num(r.mass_residual) << ',' << num(r.flux_gap) << '\n';
    for (const auto& p : dynamics::particle_records(s)) {
      measures_ << p.id << ',' << num(p.t) << ',' << (p.alive ? 1 : 0) << ',' << num(p.p) << ','
                << num(p.a) << ',' << num(p.r_eq) << ',' << num(p.min_r) << ',' << num(p.max_k)
                << '\n';
      if (!particle_.empty()) {
        *particle_[static_cast<std::size_t>(p.id)] << num(p.t) << ',' << num(p.r_eq) << ','
                                                   << num(r.c_b) << ',' << num(r.c_s) << ','
                                                   << to_string(r.regime) << '\n';
      }
    }
    if (config_.snapshot_interval > 0.0 && s.t >= next_snapshot_ * (1.0 - 1e-12)) {
      snapshot(s);
      next_snapshot_ += config_.snapshot_interval;
      while (next_snapshot_ <= s.t) next_snapshot_ += config_.snapshot_interval;
    }
  }

  void finish(const std::string& error) {
    auto mark = [&](std::ostream& out) {
      if (!error.empty()) out << "# truncated: " << error << '\n';
      out.flush();
    };
    mark(series_);
    mark(measures_);
    for (auto& p : particle_) mark(*p);
    if (config_.snapshot_interval > 0.0) {
      mark(contours_);
      std::ofstream js(dir_ / "contours.json");
      js << json{{"snapshots", snapshots_}, {"truncated", !error.empty()}}.dump() << '\n';
    }
  }

 private:
  void snapshot(const dynamics::SimState& s) {
    json particles = json::array();
    for (const auto& p : s.particles) {
      json loops = json::array();
      for (std::size_t l = 0; l < p.contour.size() && p.alive; ++l) {
        const auto& line = p.contour[l];
        json pts = json::array();
        for (const Vec2& q : line.points) {
          contours_ << p.id << ',' << num(s.t) << ',' << l << ',' << num(q.x) << ',' << num(q.y)
                    << '\n';
          pts.push_back({q.x, q.y});
        }
        loops.push_back({{"closed", line.closed}, {"points", std::move(pts)}});
      }
      particles.push_back({{"id", p.id}, {"alive", p.alive}, {"loops", std::move(loops)}});
      if (config_.snapshot_fields) {
        std::ofstream f(dir_ / "fields" /
                        ("particle_" + std::to_string(p.id) + "_" + std::to_string(snapshot_index_) + ".csv"));
        levelset::write_field_csv(f, p.field, s.t);
      }
    }
    snapshots_.push_back({{"t", s.t}, {"particles", std::move(particles)}});
    ++snapshot_index_;
  }

  const scenario::ScenarioConfig& config_;
  fs::path dir_;
  std::ofstream series_;
  std::ofstream measures_;
  std::ofstream contours_;
  std::vector<std::unique_ptr<std::ofstream>> particle_;
  json snapshots_ = json::array();
  double next_snapshot_ = 0.0;
  int snapshot_index_ = 0;
};

void write_manifest(const scenario::ScenarioConfig& c, const RunReport& report) {
  const auto& r = report.result;
  json m{
      {"schema_version", kSchemaVersion},
      {"version", version()},
      {"name", c.name},
      {"seed", c.seed},
      {"config", scenario::serialize_config(c, true)},
      {"status", report.completed ? "completed" : "failed"},
      {"truncated", !report.completed},
      {"error", report.error},
      {"wall_seconds", report.wall_seconds},
      {"steps", r.steps},
      {"t_star", std::isnan(r.t_star) ? json(nullptr) : json(r.t_star)},
      {"max_mass_residual", r.max_mass_residual},
      {"t_star_rule", "first step end with C_b >= C_s"},
      {"schemas", schemas()},
  };
  std::ofstream out(report.directory / "manifest.json");
  if (!out) throw Error("cannot write " + (report.directory / "manifest.json").string());
  out << m.dump(2) << '\n';
}

}  // namespace

RunReport run_scenario(const scenario::ScenarioConfig& config, std::ostream* progress) {
  RunReport report;
  report.directory = config.output_dir;
  fs::create_directories(report.directory);
  const auto start = std::chrono::steady_clock::now();

  std::unique_ptr<Writer> writer;
  try {
    const auto inits = scenario::build_particles(config);
    writer = std::make_unique<Writer>(config, inits, report.directory);
    const dynamics::EngineOptions opts = scenario::engine_options(config);
    dynamics::SimState state =
        dynamics::initialize(inits, config.drug, config.v_plus, config.v_ext, opts);
    double next_report = 0.0;
    report.result = dynamics::run(state, opts, [&](const dynamics::SimState& s) {
      writer->observe(s);
      if (progress && s.t >= next_report) {
        *progress << "t = " << s.t << " s, C_b = " << s.bulk.c_b << " kg/m3, "
                  << to_string(s.bulk.regime) << '\n';
        next_report += config.t_end / 10.0;
      }
    });
    report.completed = true;
  } catch (const Error& e) {
    report.error = e.what();
  } catch (const std::exception& e) {
    report.error = e.what();
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (writer) writer->finish(report.error);
  write_manifest(config, report);
  return report;
}

scenario::ScenarioConfig config_from_manifest(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw Error("cannot open manifest " + manifest.string());
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw Error("invalid manifest " + manifest.string() + ": " + e.what());
  }
  if (!m.contains("config") || !m["config"].is_string()) {
    throw Error("manifest " + manifest.string() + " has no config");
  }
  return scenario::parse_config(m["config"].get<std::string>());
}

}  // namespace dissolve::output
