#include "dissolve/presets.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dissolve/sampling.hpp"
#include "text_util.hpp"

namespace dissolve::presets {

namespace {

using text_util::format_double;

std::string um(double metres) { return format_double(metres * 1e6) + " um"; }

// Half-side of the supercircle |x/a|^n + |y/a|^n = 1 with the given area.
double supercircle_half_side(double area, double n) {
  const double g = std::tgamma(1.0 + 1.0 / n);
  return std::sqrt(area * std::tgamma(1.0 + 2.0 / n) / (4.0 * g * g));
}

std::string header(std::string_view name, std::string_view drug, double v_plus, double t_end) {
  std::ostringstream os;
  os << "name = " << name << "\n"
     << "drug = " << drug << "\n"
     << "v_plus = " << format_double(v_plus) << "\n"
     << "t_end = " << format_double(t_end) << " s\n";
  return os.str();
}

std::string circle_block(double radius, int multiplicity = 1) {
  std::ostringstream os;
  os << "\n[particle]\nshape = circle\nradius = " << um(radius) << "\n";
  if (multiplicity != 1) os << "multiplicity = " << multiplicity << "\n";
  return os.str();
}

std::string superellipse_block(double a, double b, double n, double rotation = 0.0) {
  std::ostringstream os;
  os << "\n[particle]\nshape = superellipse\na = " << um(a) << "\nb = " << um(b)
     << "\nexponent = " << format_double(n) << "\n";
  if (rotation != 0.0) os << "rotation = " << format_double(rotation) << " rad\n";
  return os.str();
}

std::string rectangle_block(double w, double h, double rotation) {
  std::ostringstream os;
  os << "\n[particle]\nshape = rectangle\nwidth = " << um(w) << "\nheight = " << um(h) << "\n";
  if (rotation != 0.0) os << "rotation = " << format_double(rotation) << " rad\n";
  return os.str();
}

constexpr double kCircleArea50 = kPi * 50e-6 * 50e-6;

Preset test1(std::string_view drug, std::string_view tag, double v_plus, double t_end) {
  const std::string name = std::string(tag) + "-" + format_double(v_plus);
  std::string text = header(name, drug, v_plus, t_end) + "grid.dx = 1 um\ndt_max = 10 s\n" +
                     circle_block(50e-6);
  return {name, "single circle R0 = 50 um, " + std::string(drug) + ", V+ = " + format_double(v_plus),
          text};
}

// Equal-area shapes at theophylline 37 C, V+ = 150.
Preset shape_test(std::string name, std::string summary, std::string particle, double padding) {
  std::string text = header(name, "theophylline-37", 150.0, 600.0) + "grid.dx = 1 um\n" +
                     "grid.padding = " + format_double(padding) + "\n" + particle;
  return {std::move(name), std::move(summary), std::move(text)};
}

Preset rectangle_n39(std::string name, double aspect) {
  const double n = 39.0;
  const double g = std::tgamma(1.0 + 1.0 / n);
  const double factor = 4.0 * g * g / std::tgamma(1.0 + 2.0 / n);
  const double b = std::sqrt(kCircleArea50 / (aspect * factor));
  return shape_test(std::move(name),
                    "superellipse n = 39, aspect " + format_double(aspect) + ", area of R = 50 um",
                    superellipse_block(aspect * b, b, n), aspect > 2.0 ? 1.4 : 2.5);
}

Preset test4(std::string_view drug, std::string_view short_name, double alpha, std::string_view tag) {
  const std::string name = "test4-" + std::string(short_name) + "-" + std::string(tag);
  std::string text = header(name, drug, 150.0, 2000.0) + "drug.alpha = " + format_double(alpha) +
                     "\ngrid.dx = 5 um\ndt_max = 1 s\noutput_interval = 10 s\n" +
                     circle_block(250e-6);
  return {name, "circle R0 = 250 um, " + std::string(drug) + ", alpha = " + format_double(alpha),
          text};
}

// Griseofulvin populations use one grid per particle, resolved by
// `cells_across` cells across its narrowest width.
std::string population_header(std::string_view name, double v_plus, double t_end,
                              int cells_across = 20) {
  return header(name, "griseofulvin-37", v_plus, t_end) +
         "grid.mode = per_particle\ngrid.cells_across = " + std::to_string(cells_across) +
         "\ndt_max = 1 s\n";
}

constexpr double kTest5Area = 100.0 * kPi * 5.39e-6 * 5.39e-6;

Preset test5(char tag) {
  const std::string name = std::string("test5") + tag;
  std::string text = population_header(name, 1000.0, 400.0);
  std::string summary;
  switch (tag) {
    case 'a':
      text += circle_block(53.90e-6);
      summary = "one circle R0 = 53.90 um, griseofulvin 37 C, V+ = 1000";
      break;
    case 'b':
      text += circle_block(5.39e-6, 100);
      summary = "100 equal circles R0 = 5.39 um, griseofulvin 37 C, V+ = 1000";
      break;
    default:
      text += "seed = 20231\n\n[sampler]\ncount = 100\nshape = circle\nweibull.lambda = 5.4 um\n"
              "weibull.k = 1.9\nweibull.x0 = 0 um\ntarget_total_area = " +
              format_double(kTest5Area * 1e12) + " um2\n";
      summary = "100 Weibull circles (lambda 5.4 um, k 1.9) rescaled to the area of case a";
      break;
  }
  return {name, summary, text};
}

Preset test6() {
  std::string text = population_header("test6", 1000.0, 400.0, 10) +
                     "grid.padding = 1.5\nseed = 20232\n\n[sampler]\n"
                     "count = 100\nshape = rectangle\nradius = 5.39 um\naspect_min = 1\n"
                     "aspect_max = 13.75\nrandom_rotation = false\n";
  return {"test6", "100 rectangles of the area of a 5.39 um circle, aspect uniform in [1, 13.75]",
          text};
}

constexpr double kTest7Area = 48456.72e-12;

// 20 circles, 50 ellipses and 30 rectangles with Weibull sizes rescaled to
// the mixture area; drawn once from a fixed seed and stored explicitly.
Preset test7_mixture() {
  constexpr std::uint64_t seed = 20233;
  const sampling::WeibullParams w{5.4e-6, 1.9, 0.0};
  std::vector<double> r = sampling::sample_radii(100, w, seed);
  double total = 0.0;
  for (double x : r) total += kPi * x * x;
  const double scale = std::sqrt(kTest7Area / total);
  auto aspect_rng = sampling::make_engine(seed, 1);
  auto rotation_rng = sampling::make_engine(seed, 2);

  std::string text = population_header("test7", 10000.0, 600.0) + "grid.padding = 1.5\n";
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double radius = r[k] * scale;
    const double area = kPi * radius * radius;
    const double u = sampling::uniform01(aspect_rng);
    const double rotation = kPi * sampling::uniform01(rotation_rng);
    if (k < 20) {
      text += circle_block(radius);
    } else if (k < 70) {
      const double aspect = 1.0 + 2.0 * u;
      const double b = std::sqrt(area / (kPi * aspect));
      text += superellipse_block(aspect * b, b, 2.0, rotation);
    } else {
      const double aspect = 1.0 + 3.0 * u;
      const double h = std::sqrt(area / aspect);
      text += rectangle_block(aspect * h, h, rotation);
    }
  }
  return {"test7", "mixture of 20 circles, 50 ellipses, 30 rectangles, griseofulvin 37 C, V+ = 1e4",
          text};
}

Preset test7_circles() {
  // equal circles cannot match both the mixture's p and A; A is matched
  const double radius = std::sqrt(kTest7Area / (61.0 * kPi));
  std::string text = population_header("test7-circles", 10000.0, 600.0) + circle_block(radius, 61);
  return {"test7-circles", "61 equal circles with the area of the test7 mixture", text};
}

std::vector<Preset> build() {
  std::vector<Preset> p;
  p.push_back(test1("theophylline-25", "test1a", 150.0, 1000.0));
  p.push_back(test1("theophylline-25", "test1a", 300.0, 800.0));
  p.push_back(test1("theophylline-37", "test1b", 150.0, 600.0));
  p.push_back(test1("theophylline-37", "test1b", 300.0, 500.0));

  p.push_back(shape_test("test2-circle", "circle R0 = 50 um", circle_block(50e-6), 2.5));
  const double a3 = supercircle_half_side(kCircleArea50, 3.0);
  p.push_back(shape_test("test2-supercircle", "supercircle n = 3, area of R = 50 um",
                         superellipse_block(a3, a3, 3.0), 2.5));
  const double a39 = supercircle_half_side(kCircleArea50, 39.0);
  p.push_back(shape_test("test2-square", "supercircle n = 39, area of R = 50 um",
                         superellipse_block(a39, a39, 39.0), 2.5));

  p.push_back(rectangle_n39("test3-ar1", 1.0));
  p.push_back(rectangle_n39("test3-ar4", 177.0 / 44.0));
  p.push_back(rectangle_n39("test3-ar7", 231.0 / 34.0));

  const struct {
    const char* drug;
    const char* short_name;
  } drugs[] = {{"theophylline-37", "theo"}, {"griseofulvin-37", "gris"}, {"nimesulide-37", "nime"}};
  for (const auto& d : drugs) {
    p.push_back(test4(d.drug, d.short_name, 1e-15, "a1"));
    p.push_back(test4(d.drug, d.short_name, 1e-2, "a2"));
  }

  p.push_back(test5('a'));
  p.push_back(test5('b'));
  p.push_back(test5('c'));
  p.push_back(test6());
  p.push_back(test7_mixture());
  p.push_back(test7_circles());
  return p;
}

}  // namespace

const std::vector<Preset>& all() {
  static const std::vector<Preset> presets = build();
  return presets;
}

const Preset& find(std::string_view name) {
  for (const auto& p : all()) {
    if (p.name == name) return p;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

scenario::ScenarioConfig load(std::string_view name) {
  return scenario::parse_config(find(name).text);
}

}  // namespace dissolve::presets
