#include "dissolve/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace dissolve::scenario {

ConfigError::ConfigError(int line, std::string key, const std::string& message)
    : Error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
            (key.empty() ? std::string() : "'" + key + "': ") + message),
      line_(line),
      key_(std::move(key)) {}

const char* to_string(ShapeFamily f) {
  switch (f) {
    case ShapeFamily::circle: return "circle";
    case ShapeFamily::superellipse: return "superellipse";
    case ShapeFamily::rectangle: return "rectangle";
  }
  return "?";
}

const char* to_string(GridMode m) { return m == GridMode::shared ? "shared" : "per_particle"; }

const char* to_string(physchem::SigmaPolicy p) {
  return p == physchem::SigmaPolicy::continuous ? "continuous" : "unity";
}

const char* to_string(dynamics::Coupling c) {
  return c == dynamics::Coupling::area ? "area" : "flux";
}

const char* to_string(dynamics::SpeedExtension e) {
  return e == dynamics::SpeedExtension::contour ? "contour" : "node";
}

namespace {

using text_util::format_double;

enum class Unit { none, length, area, volume, time, angle };

struct Suffix {
  std::string_view name;
  double factor;
};

double unit_factor(Unit kind, std::string_view suffix, bool& ok) {
  static constexpr Suffix lengths[] = {
      {"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"\xC2\xB5m", 1e-6}, {"nm", 1e-9}};
  static constexpr Suffix areas[] = {
      {"m2", 1.0}, {"mm2", 1e-6}, {"um2", 1e-12}, {"\xC2\xB5m2", 1e-12}, {"nm2", 1e-18}};
  // 2D volumes carry a unit depth, so an area unit is accepted as well
  static constexpr Suffix volumes[] = {{"m3", 1.0},      {"m2", 1.0},    {"mm2", 1e-6},
                                       {"um2", 1e-12}, {"\xC2\xB5m2", 1e-12}};
  static constexpr Suffix times[] = {{"s", 1.0}, {"ms", 1e-3}, {"min", 60.0}, {"h", 3600.0}};
  static constexpr Suffix angles[] = {{"rad", 1.0}, {"deg", kPi / 180.0}};
  ok = true;
  if (suffix.empty()) return 1.0;
  auto find = [&](std::span<const Suffix> table) {
    for (const auto& s : table) {
      if (s.name == suffix) return s.factor;
    }
    ok = false;
    return 1.0;
  };
  switch (kind) {
    case Unit::length: return find(lengths);
    case Unit::area: return find(areas);
    case Unit::volume: return find(volumes);
    case Unit::time: return find(times);
    case Unit::angle: return find(angles);
    case Unit::none: break;
  }
  ok = false;
  return 1.0;
}

struct Entry {
  int line;
  std::string key;
  std::string value;
};

class Reader {
 public:
  explicit Reader(const Entry& e) : e_(e) {}

  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(e_.line, e_.key, msg); }

  double number(Unit kind = Unit::none) const { return number_in(e_.value, kind); }

  double number_in(std::string_view text, Unit kind) const {
    text = text_util::trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr == text.data()) fail("expected a number, got '" + e_.value + "'");
    const std::string_view suffix = text_util::trim(text.substr(static_cast<std::size_t>(ptr - text.data())));
    bool ok = false;
    const double f = unit_factor(kind, suffix, ok);
    if (!ok) fail("unknown unit '" + std::string(suffix) + "'");
    if (!std::isfinite(v)) fail("value must be finite");
    return v * f;
  }

  int integer() const {
    const std::string_view t = text_util::trim(e_.value);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) fail("expected an integer, got '" + e_.value + "'");
    return v;
  }

  std::uint64_t u64() const {
    const std::string_view t = text_util::trim(e_.value);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) fail("expected an unsigned integer, got '" + e_.value + "'");
    return v;
  }

  bool boolean() const {
    const std::string_view t = text_util::trim(e_.value);
    if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
    if (t == "false" || t == "no" || t == "off" || t == "0") return false;
    fail("expected true or false, got '" + e_.value + "'");
  }

  std::string text() const { return std::string(text_util::trim(e_.value)); }

  /// "x, y [unit]"; a unit on the last component applies to both.
  Vec2 point() const {
    const std::string_view t = text_util::trim(e_.value);
    const auto comma = t.find(',');
    if (comma == std::string_view::npos) fail("expected 'x, y'");
    std::string_view xs = text_util::trim(t.substr(0, comma));
    std::string_view ys = text_util::trim(t.substr(comma + 1));
    double y = number_in(ys, Unit::length);
    double y_plain = 0.0;
    const auto [yp, yec] = std::from_chars(ys.data(), ys.data() + ys.size(), y_plain);
    const bool y_has_unit = yec == std::errc{} && yp != ys.data() + ys.size();
    double x_plain = 0.0;
    const auto [xp, xec] = std::from_chars(xs.data(), xs.data() + xs.size(), x_plain);
    const bool x_has_unit = xec == std::errc{} && xp != xs.data() + xs.size();
    double x = number_in(xs, Unit::length);
    if (y_has_unit && !x_has_unit && y_plain != 0.0) x = x_plain * (y / y_plain);
    else if (y_has_unit && !x_has_unit) {
      bool ok = false;
      x = x_plain * unit_factor(Unit::length,
                                text_util::trim(ys.substr(static_cast<std::size_t>(yp - ys.data()))), ok);
    }
    return {x, y};
  }

 private:
  const Entry& e_;
};

ShapeFamily parse_family(const Reader& r) {
  const std::string t = r.text();
  if (t == "circle") return ShapeFamily::circle;
  if (t == "superellipse" || t == "supercircle") return ShapeFamily::superellipse;
  if (t == "rectangle" || t == "square") return ShapeFamily::rectangle;
  r.fail("unknown shape '" + t + "'");
}

struct Block {
  std::string kind;  // "", "particle" or "sampler"
  int line = 0;
  std::vector<Entry> entries;
};

std::vector<Block> split_blocks(std::string_view text) {
  std::vector<Block> blocks(1);
  int line_no = 0;
  for (std::string_view raw : text_util::split_lines(text)) {
    ++line_no;
    const std::string_view line = text_util::trim(text_util::strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "", "malformed block header");
      const std::string kind(text_util::trim(line.substr(1, line.size() - 2)));
      if (kind != "particle" && kind != "sampler") {
        throw ConfigError(line_no, kind, "unknown block (expected [particle] or [sampler])");
      }
      blocks.push_back({kind, line_no, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "", "expected 'key = value'");
    Entry e{line_no, std::string(text_util::trim(line.substr(0, eq))),
            std::string(text_util::trim(line.substr(eq + 1)))};
    if (e.key.empty()) throw ConfigError(line_no, "", "missing key");
    for (const auto& other : blocks.back().entries) {
      if (other.key == e.key) throw ConfigError(line_no, e.key, "duplicate key");
    }
    blocks.back().entries.push_back(std::move(e));
  }
  return blocks;
}

ParticleSpec parse_particle(const Block& b) {
  ParticleSpec p;
  std::optional<ShapeFamily> family;
  double radius = 0.0, a = 0.0, bb = 0.0, exponent = 2.0, width = 0.0, height = 0.0;
  int shape_line = b.line;
  std::set<std::string> seen;
  for (const Entry& e : b.entries) {
    const Reader r(e);
    seen.insert(e.key);
    if (e.key == "shape") {
      family = parse_family(r);
      shape_line = e.line;
    } else if (e.key == "radius") radius = r.number(Unit::length);
    else if (e.key == "a") a = r.number(Unit::length);
    else if (e.key == "b") bb = r.number(Unit::length);
    else if (e.key == "exponent") exponent = r.number();
    else if (e.key == "width") width = r.number(Unit::length);
    else if (e.key == "height") height = r.number(Unit::length);
    else if (e.key == "side") width = height = r.number(Unit::length);
    else if (e.key == "center") p.shape.center = r.point();
    else if (e.key == "rotation") p.shape.rotation = r.number(Unit::angle);
    else if (e.key == "multiplicity") {
      p.multiplicity = r.integer();
      if (p.multiplicity < 1) r.fail("multiplicity must be at least 1");
    } else {
      r.fail("unknown particle key");
    }
  }
  if (!family) throw ConfigError(b.line, "shape", "particle block needs a shape");
  auto need = [&](const char* key) {
    if (!seen.count(key)) throw ConfigError(shape_line, key, "required for this shape");
  };
  switch (*family) {
    case ShapeFamily::circle:
      need("radius");
      p.shape.shape = geometry::Circle{radius};
      break;
    case ShapeFamily::superellipse:
      need("a");
      if (!seen.count("b")) bb = a;
      p.shape.shape = geometry::Superellipse{a, bb, exponent};
      break;
    case ShapeFamily::rectangle:
      if (!seen.count("side")) {
        need("width");
        if (!seen.count("height")) height = width;
      }
      p.shape.shape = geometry::Rectangle{width, height};
      break;
  }
  try {
    p.shape.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(shape_line, "shape", ex.what());
  }
  return p;
}

SamplerSpec parse_sampler(const Block& b) {
  SamplerSpec s;
  bool have_count = false;
  bool have_weibull = false;
  for (const Entry& e : b.entries) {
    const Reader r(e);
    if (e.key == "count") {
      s.count = r.integer();
      have_count = true;
      if (s.count < 1) r.fail("count must be at least 1");
    } else if (e.key == "shape") s.family = parse_family(r);
    else if (e.key == "radius") s.radius = r.number(Unit::length);
    else if (e.key == "weibull.lambda") {
      s.weibull.lambda = r.number(Unit::length);
      have_weibull = true;
    } else if (e.key == "weibull.k") {
      s.weibull.k = r.number();
      have_weibull = true;
    } else if (e.key == "weibull.x0") {
      s.weibull.x0 = r.number(Unit::length);
      have_weibull = true;
    } else if (e.key == "aspect_min") s.aspect_min = r.number();
    else if (e.key == "aspect_max") s.aspect_max = r.number();
    else if (e.key == "exponent") s.exponent = r.number();
    else if (e.key == "random_rotation") s.random_rotation = r.boolean();
    else if (e.key == "target_total_area") s.target_total_area = r.number(Unit::area);
    else r.fail("unknown sampler key");
  }
  if (!have_count) throw ConfigError(b.line, "count", "sampler block needs a count");
  if ((s.radius > 0.0) == have_weibull) {
    throw ConfigError(b.line, "radius", "give either a fixed radius or weibull.* parameters");
  }
  if (have_weibull) {
    try {
      s.weibull.validate();
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(b.line, "weibull", ex.what());
    }
  } else {
    s.weibull = {};
  }
  if (!(s.aspect_min >= 1.0) || s.aspect_max < s.aspect_min) {
    throw ConfigError(b.line, "aspect_min", "need 1 <= aspect_min <= aspect_max");
  }
  if (!(s.exponent >= 2.0)) throw ConfigError(b.line, "exponent", "exponent must be >= 2");
  if (s.target_total_area < 0.0) throw ConfigError(b.line, "target_total_area", "must be >= 0");
  return s;
}

void parse_top(const std::vector<Entry>& entries, ScenarioConfig& c, bool& have_drug) {
  for (const Entry& e : entries) {
    const Reader r(e);
    const std::string& k = e.key;
    if (k == "name") c.name = r.text();
    else if (k == "drug") {
      c.drug_name = r.text();
      have_drug = true;
    } else if (k == "drug_file") c.drug_file = r.text();
    else if (k.rfind("drug.", 0) == 0) {
      const std::string field = k.substr(5);
      const auto& names = physchem::field_names();
      if (std::find(names.begin(), names.end(), field) == names.end()) r.fail("unknown drug parameter");
      c.drug_overrides.emplace_back(field, r.number());
    } else if (k == "v_plus") c.v_plus = r.number();
    else if (k == "v_ext") c.v_ext = r.number(Unit::volume);
    else if (k == "t_end") c.t_end = r.number(Unit::time);
    else if (k == "cfl") c.cfl = r.number();
    else if (k == "dt_max") c.dt_max = r.number(Unit::time);
    else if (k == "output_interval") c.output_interval = r.number(Unit::time);
    else if (k == "snapshot_interval") c.snapshot_interval = r.number(Unit::time);
    else if (k == "snapshot_fields") c.snapshot_fields = r.boolean();
    else if (k == "per_particle_csv") c.per_particle_csv = r.boolean();
    else if (k == "output_dir") c.output_dir = r.text();
    else if (k == "seed") c.seed = r.u64();
    else if (k == "grid.mode") {
      const std::string m = r.text();
      if (m == "shared") c.grid.mode = GridMode::shared;
      else if (m == "per_particle") c.grid.mode = GridMode::per_particle;
      else r.fail("expected shared or per_particle");
    } else if (k == "grid.dx") c.grid.dx = r.number(Unit::length);
    else if (k == "grid.n") c.grid.n = r.integer();
    else if (k == "grid.padding") c.grid.padding = r.number();
    else if (k == "grid.cells_across") c.grid.cells_across = r.integer();
    else if (k == "sigma_policy") {
      const std::string m = r.text();
      if (m == "continuous") c.sigma_policy = physchem::SigmaPolicy::continuous;
      else if (m == "unity") c.sigma_policy = physchem::SigmaPolicy::unity;
      else r.fail("expected continuous or unity");
    } else if (k == "coupling") {
      const std::string m = r.text();
      if (m == "area") c.coupling = dynamics::Coupling::area;
      else if (m == "flux") c.coupling = dynamics::Coupling::flux;
      else r.fail("expected area or flux");
    } else if (k == "speed_extension") {
      const std::string m = r.text();
      if (m == "contour") c.speed_extension = dynamics::SpeedExtension::contour;
      else if (m == "node") c.speed_extension = dynamics::SpeedExtension::node;
      else r.fail("expected contour or node");
    } else if (k == "crop_grids") c.crop_grids = r.boolean();
    else if (k == "reinit_every") c.reinit_every = r.integer();
    else if (k == "jobs") c.jobs = r.integer();
    else r.fail("unknown key");
  }
}

int line_of(const std::vector<Entry>& entries, std::string_view key) {
  for (const auto& e : entries) {
    if (e.key == key) return e.line;
  }
  return 0;
}

}  // namespace

void validate(const ScenarioConfig& c) {
  if ((c.v_plus > 0.0) == (c.v_ext > 0.0)) {
    throw ConfigError(0, "v_plus", "give exactly one of v_plus and v_ext, positive");
  }
  if (c.v_plus < 0.0 || c.v_ext < 0.0) throw ConfigError(0, "v_plus", "volumes must be positive");
  if (!(c.t_end > 0.0)) throw ConfigError(0, "t_end", "t_end must be positive");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw ConfigError(0, "cfl", "cfl must lie in (0, 1]");
  if (c.dt_max < 0.0) throw ConfigError(0, "dt_max", "must be >= 0");
  if (c.output_interval < 0.0) throw ConfigError(0, "output_interval", "must be >= 0");
  if (c.snapshot_interval < 0.0) throw ConfigError(0, "snapshot_interval", "must be >= 0");
  if (c.grid.dx < 0.0) throw ConfigError(0, "grid.dx", "must be >= 0");
  if (c.grid.n != 0 && c.grid.n < 8) throw ConfigError(0, "grid.n", "needs at least 8 cells");
  if (!(c.grid.padding >= 1.0)) throw ConfigError(0, "grid.padding", "must be >= 1");
  if (c.grid.cells_across < 2) throw ConfigError(0, "grid.cells_across", "must be >= 2");
  if (c.reinit_every < 0) throw ConfigError(0, "reinit_every", "must be >= 0");
  if (c.jobs < 1) throw ConfigError(0, "jobs", "must be >= 1");
  if (c.v_plus > 0.0 && c.particles.empty() && !c.sampler) {
    throw ConfigError(0, "v_plus", "v_plus needs at least one particle");
  }
  if (c.drug_name.empty() == c.drug_file.empty()) {
    throw ConfigError(0, "drug", "give exactly one of drug and drug_file");
  }
  try {
    physchem::validate(c.drug);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(0, "drug", ex.what());
  }
}

ScenarioConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  const std::vector<Block> blocks = split_blocks(text);
  ScenarioConfig c;
  bool have_drug = false;
  parse_top(blocks.front().entries, c, have_drug);
  for (std::size_t k = 1; k < blocks.size(); ++k) {
    const Block& b = blocks[k];
    if (b.kind == "particle") {
      c.particles.push_back(parse_particle(b));
    } else {
      if (c.sampler) throw ConfigError(b.line, "sampler", "only one sampler block is allowed");
      c.sampler = parse_sampler(b);
    }
  }

  const auto& top = blocks.front().entries;
  if (have_drug && !c.drug_file.empty()) {
    throw ConfigError(line_of(top, "drug_file"), "drug_file", "give either drug or drug_file");
  }
  if (!have_drug && c.drug_file.empty()) throw ConfigError(0, "drug", "missing drug");
  if (c.t_end <= 0.0 && line_of(top, "t_end") == 0) throw ConfigError(0, "t_end", "missing t_end");
  if (c.v_plus > 0.0 && c.v_ext > 0.0) {
    throw ConfigError(line_of(top, "v_ext"), "v_ext", "v_plus and v_ext are mutually exclusive");
  }

  if (have_drug) {
    if (c.drug_name == "custom") {
      c.drug = physchem::DrugParams{};
    } else {
      try {
        c.drug = physchem::preset(c.drug_name);
      } catch (const std::invalid_argument& ex) {
        throw ConfigError(line_of(top, "drug"), "drug", ex.what());
      }
    }
  } else {
    std::filesystem::path p(c.drug_file);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    std::ifstream in(p);
    if (!in) throw ConfigError(line_of(top, "drug_file"), "drug_file", "cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
      c.drug = physchem::parse_param_text(ss.str());
    } catch (const std::exception& ex) {
      throw ConfigError(line_of(top, "drug_file"), "drug_file", ex.what());
    }
  }
  for (const auto& [key, value] : c.drug_overrides) physchem::set_field(c.drug, key, value);
  try {
    validate(c);
  } catch (const ConfigError& ex) {
    const int line = line_of(top, ex.key());
    if (line == 0 || ex.line() != 0) throw;
    // re-raise with the line of the offending key
    std::string msg = ex.what();
    const std::string prefix = "'" + ex.key() + "': ";
    if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
    throw ConfigError(line, ex.key(), msg);
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "", "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::string serialize_config(const ScenarioConfig& c, bool standalone) {
  std::ostringstream os;
  auto kv = [&](std::string_view key, const std::string& value) { os << key << " = " << value << '\n'; };
  auto num = [&](std::string_view key, double v) { kv(key, format_double(v)); };
  auto flag = [&](std::string_view key, bool v) { kv(key, v ? "true" : "false"); };

  if (!c.name.empty()) kv("name", c.name);
  if (standalone && !c.drug_file.empty()) {
    kv("drug", "custom");
    for (const auto& f : physchem::field_names()) num("drug." + f, physchem::get_field(c.drug, f));
  } else {
    if (!c.drug_name.empty()) kv("drug", c.drug_name);
    if (!c.drug_file.empty()) kv("drug_file", c.drug_file);
    for (const auto& [key, value] : c.drug_overrides) num("drug." + key, value);
  }
  if (c.v_plus > 0.0) num("v_plus", c.v_plus);
  if (c.v_ext > 0.0) num("v_ext", c.v_ext);
  num("t_end", c.t_end);
  num("cfl", c.cfl);
  num("dt_max", c.dt_max);
  num("output_interval", c.output_interval);
  num("snapshot_interval", c.snapshot_interval);
  flag("snapshot_fields", c.snapshot_fields);
  flag("per_particle_csv", c.per_particle_csv);
  kv("output_dir", c.output_dir);
  kv("seed", std::to_string(c.seed));
  kv("grid.mode", to_string(c.grid.mode));
  num("grid.dx", c.grid.dx);
  kv("grid.n", std::to_string(c.grid.n));
  num("grid.padding", c.grid.padding);
  kv("grid.cells_across", std::to_string(c.grid.cells_across));
  kv("sigma_policy", to_string(c.sigma_policy));
  kv("coupling", to_string(c.coupling));
  kv("speed_extension", to_string(c.speed_extension));
  flag("crop_grids", c.crop_grids);
  kv("reinit_every", std::to_string(c.reinit_every));
  kv("jobs", std::to_string(c.jobs));

  for (const auto& p : c.particles) {
    os << "\n[particle]\n";
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, geometry::Circle>) {
            kv("shape", "circle");
            num("radius", s.radius);
          } else if constexpr (std::is_same_v<T, geometry::Superellipse>) {
            kv("shape", "superellipse");
            num("a", s.a);
            num("b", s.b);
            num("exponent", s.exponent);
          } else {
            kv("shape", "rectangle");
            num("width", s.width);
            num("height", s.height);
          }
        },
        p.shape.shape);
    kv("center", format_double(p.shape.center.x) + ", " + format_double(p.shape.center.y));
    num("rotation", p.shape.rotation);
    kv("multiplicity", std::to_string(p.multiplicity));
  }
  if (c.sampler) {
    const SamplerSpec& s = *c.sampler;
    os << "\n[sampler]\n";
    kv("count", std::to_string(s.count));
    kv("shape", to_string(s.family));
    if (s.radius > 0.0) {
      num("radius", s.radius);
    } else {
      num("weibull.lambda", s.weibull.lambda);
      num("weibull.k", s.weibull.k);
      num("weibull.x0", s.weibull.x0);
    }
    num("aspect_min", s.aspect_min);
    num("aspect_max", s.aspect_max);
    num("exponent", s.exponent);
    flag("random_rotation", s.random_rotation);
    num("target_total_area", s.target_total_area);
  }
  return os.str();
}

std::vector<ParticleSpec> sample_particles(const SamplerSpec& s, std::uint64_t seed) {
  std::vector<double> radii;
  if (s.radius > 0.0) {
    radii.assign(static_cast<std::size_t>(s.count), s.radius);
  } else {
    radii = sampling::sample_radii(static_cast<std::size_t>(s.count), s.weibull, seed, 0);
  }
  if (s.target_total_area > 0.0) {
    double total = 0.0;
    for (double r : radii) total += kPi * r * r;
    const double scale = std::sqrt(s.target_total_area / total);
    for (double& r : radii) r *= scale;
  }
  auto aspect_rng = sampling::make_engine(seed, 1);
  auto rotation_rng = sampling::make_engine(seed, 2);
  const double g1 = std::tgamma(1.0 + 1.0 / s.exponent);
  const double superellipse_factor = 4.0 * g1 * g1 / std::tgamma(1.0 + 2.0 / s.exponent);

  std::vector<ParticleSpec> out;
  out.reserve(radii.size());
  for (double r : radii) {
    const double aspect = s.aspect_min + (s.aspect_max - s.aspect_min) * sampling::uniform01(aspect_rng);
    const double theta = 2.0 * kPi * sampling::uniform01(rotation_rng);
    const double area = kPi * r * r;
    ParticleSpec p;
    switch (s.family) {
      case ShapeFamily::circle:
        p.shape.shape = geometry::Circle{r};
        break;
      case ShapeFamily::rectangle: {
        const double h = std::sqrt(area / aspect);
        p.shape.shape = geometry::Rectangle{aspect * h, h};
        break;
      }
      case ShapeFamily::superellipse: {
        const double b = std::sqrt(area / (aspect * superellipse_factor));
        p.shape.shape = geometry::Superellipse{aspect * b, b, s.exponent};
        break;
      }
    }
    p.shape.rotation = s.random_rotation ? theta : 0.0;
    out.push_back(p);
  }
  return out;
}

std::vector<ParticleSpec> all_particles(const ScenarioConfig& c) {
  std::vector<ParticleSpec> out = c.particles;
  if (c.sampler) {
    const auto sampled = sample_particles(*c.sampler, c.seed);
    out.insert(out.end(), sampled.begin(), sampled.end());
  }
  return out;
}

std::vector<dynamics::ParticleInit> build_particles(const ScenarioConfig& c) {
  const std::vector<ParticleSpec> specs = all_particles(c);
  struct Extent {
    double side;
    double width;
    Vec2 center;
  };
  std::vector<Extent> ext;
  ext.reserve(specs.size());
  for (const auto& p : specs) {
    const auto [lo, hi] = geometry::bounding_box(p.shape);
    ext.push_back({std::max(hi.x - lo.x, hi.y - lo.y), geometry::min_width(p.shape),
                   {0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)}});
  }
  // the zero level set needs kGuardCells plus one cell of slack on each side
  const int margin = 2 * (levelset::kGuardCells + 1);
  auto cells_for = [&](double side, double dx) {
    const int auto_n = static_cast<int>(std::ceil(c.grid.padding * side / dx - 1e-9));
    const int min_n = static_cast<int>(std::ceil(side / dx - 1e-9)) + margin;
    return std::max({auto_n, min_n, 8});
  };

  std::vector<dynamics::ParticleInit> out;
  out.reserve(specs.size());
  if (specs.empty()) return out;
  if (c.grid.mode == GridMode::shared) {
    double dx = c.grid.dx;
    double side = 0.0;
    double width = std::numeric_limits<double>::infinity();
    for (const auto& e : ext) {
      side = std::max(side, e.side);
      width = std::min(width, e.width);
    }
    if (!(dx > 0.0)) dx = width / c.grid.cells_across;
    const int n = c.grid.n > 0 ? c.grid.n : cells_for(side, dx);
    for (std::size_t k = 0; k < specs.size(); ++k) {
      out.push_back({specs[k].shape, specs[k].multiplicity, levelset::Grid2D::centered(ext[k].center, n, dx)});
    }
  } else {
    for (std::size_t k = 0; k < specs.size(); ++k) {
      const double dx = c.grid.dx > 0.0 ? c.grid.dx : ext[k].width / c.grid.cells_across;
      const int n = c.grid.n > 0 ? c.grid.n : cells_for(ext[k].side, dx);
      out.push_back({specs[k].shape, specs[k].multiplicity, levelset::Grid2D::centered(ext[k].center, n, dx)});
    }
  }
  return out;
}

dynamics::EngineOptions engine_options(const ScenarioConfig& c) {
  dynamics::EngineOptions o;
  o.cfl = c.cfl;
  o.t_end = c.t_end;
  o.dt_max = c.dt_max;
  o.output_interval = c.output_interval;
  o.sigma_policy = c.sigma_policy;
  o.jobs = c.jobs;
  o.reinit_every = c.reinit_every;
  o.coupling = c.coupling;
  o.extension = c.speed_extension;
  o.crop_grids = c.crop_grids;
  return o;
}

}  // namespace dissolve::scenario
