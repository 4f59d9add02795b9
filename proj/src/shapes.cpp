#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dissolve/geometry.hpp"

namespace dissolve::geometry {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("shape ") + what + " must be positive");
  }
}

// Polar radius of the superellipse, scaled so that large exponents do not overflow.
double superellipse_radius(const Superellipse& s, double theta) {
  const double u = std::abs(std::cos(theta)) / s.a;
  const double w = std::abs(std::sin(theta)) / s.b;
  const double m = std::max(u, w);
  const double sum = std::pow(u / m, s.exponent) + std::pow(w / m, s.exponent);
  return 1.0 / (m * std::pow(sum, 1.0 / s.exponent));
}

Vec2 superellipse_point(const Superellipse& s, double theta) {
  const double r = superellipse_radius(s, theta);
  return {r * std::cos(theta), r * std::sin(theta)};
}

void refine(const Superellipse& s, double t0, Vec2 p0, double t1, Vec2 p1, double max_segment,
            int depth, std::vector<Vec2>& out) {
  out.push_back(p0);
  if (depth >= 30 || norm(p1 - p0) <= max_segment) return;
  const double tm = 0.5 * (t0 + t1);
  const Vec2 pm = superellipse_point(s, tm);
  out.pop_back();
  refine(s, t0, p0, tm, pm, max_segment, depth + 1, out);
  refine(s, tm, pm, t1, p1, max_segment, depth + 1, out);
}

constexpr int kBaseSamples = 4096;

std::vector<Vec2> local_boundary(const ShapeSpec& spec, double max_segment) {
  std::vector<Vec2> pts;
  std::visit(
      Overloaded{
          [&](const Circle& c) {
            const int count = std::max(
                kBaseSamples, static_cast<int>(std::ceil(2.0 * kPi * c.radius / max_segment)));
            pts.reserve(static_cast<std::size_t>(count));
            for (int k = 0; k < count; ++k) {
              const double t = 2.0 * kPi * k / count;
              pts.push_back({c.radius * std::cos(t), c.radius * std::sin(t)});
            }
          },
          [&](const Superellipse& s) {
            std::vector<double> thetas;
            thetas.reserve(kBaseSamples * 2);
            for (int k = 0; k < kBaseSamples; ++k) {
              const double t = 2.0 * kPi * k / kBaseSamples;
              const double dt = 2.0 * kPi / kBaseSamples;
              // four times denser where the polar parameterisation runs along the axes
              const bool near_axis = std::abs(std::cos(t)) < 0.1 || std::abs(std::sin(t)) < 0.1;
              const int sub = near_axis ? 4 : 1;
              for (int q = 0; q < sub; ++q) thetas.push_back(t + dt * q / sub);
            }
            for (std::size_t k = 0; k < thetas.size(); ++k) {
              const double t0 = thetas[k];
              const double t1 = k + 1 < thetas.size() ? thetas[k + 1] : 2.0 * kPi;
              refine(s, t0, superellipse_point(s, t0), t1, superellipse_point(s, t1), max_segment, 0,
                     pts);
            }
          },
          [&](const Rectangle& r) {
            const double hw = 0.5 * r.width;
            const double hh = 0.5 * r.height;
            const Vec2 corners[4] = {{hw, -hh}, {hw, hh}, {-hw, hh}, {-hw, -hh}};
            for (int e = 0; e < 4; ++e) {
              const Vec2 a = corners[e];
              const Vec2 b = corners[(e + 1) % 4];
              const int count = std::max(kBaseSamples / 4,
                                         static_cast<int>(std::ceil(norm(b - a) / max_segment)));
              for (int k = 0; k < count; ++k) {
                const double t = static_cast<double>(k) / count;
                pts.push_back(a + t * (b - a));
              }
            }
          },
      },
      spec.shape);
  return pts;
}

Vec2 place(const ShapeSpec& spec, Vec2 p) {
  const double c = std::cos(spec.rotation);
  const double s = std::sin(spec.rotation);
  return {spec.center.x + c * p.x - s * p.y, spec.center.y + s * p.x + c * p.y};
}

// Squared distance from p to segment [a, b].
double segment_distance2(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const Vec2 ap = p - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(ap, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Vec2 d = ap - t * ab;
  return dot(d, d);
}

// Runs of consecutive segments with a bounding disc and box, so that most of
// the polyline can be skipped for each node.
struct Chunk {
  std::size_t loop;
  std::size_t first;
  std::size_t count;
  Vec2 anchor;
  double radius;
  Vec2 lo;
  Vec2 hi;
};

constexpr std::size_t kChunkSize = 32;

std::vector<Chunk> build_chunks(std::span<const std::vector<Vec2>> loops) {
  std::vector<Chunk> chunks;
  for (std::size_t l = 0; l < loops.size(); ++l) {
    const auto& pts = loops[l];
    const std::size_t m = pts.size();
    if (m < 2) continue;
    for (std::size_t first = 0; first < m; first += kChunkSize) {
      Chunk c{l, first, std::min(kChunkSize, m - first), pts[first], 0.0, pts[first], pts[first]};
      for (std::size_t k = 0; k <= c.count; ++k) {
        const Vec2 p = pts[(first + k) % m];
        c.radius = std::max(c.radius, norm(p - c.anchor));
        c.lo = {std::min(c.lo.x, p.x), std::min(c.lo.y, p.y)};
        c.hi = {std::max(c.hi.x, p.x), std::max(c.hi.y, p.y)};
      }
      chunks.push_back(c);
    }
  }
  return chunks;
}

}  // namespace

void ShapeSpec::validate() const {
  std::visit(Overloaded{
                 [](const Circle& c) { require_positive(c.radius, "radius"); },
                 [](const Superellipse& s) {
                   require_positive(s.a, "semi-axis a");
                   require_positive(s.b, "semi-axis b");
                   if (!(s.exponent >= 2.0) || !std::isfinite(s.exponent)) {
                     throw std::invalid_argument("superellipse exponent must be >= 2");
                   }
                 },
                 [](const Rectangle& r) {
                   require_positive(r.width, "width");
                   require_positive(r.height, "height");
                 },
             },
             shape);
  if (!std::isfinite(center.x) || !std::isfinite(center.y) || !std::isfinite(rotation)) {
    throw std::invalid_argument("shape placement must be finite");
  }
}

double area(const ShapeSpec& spec) {
  return std::visit(Overloaded{
                        [](const Circle& c) { return kPi * c.radius * c.radius; },
                        [](const Superellipse& s) {
                          const double g1 = std::tgamma(1.0 + 1.0 / s.exponent);
                          return 4.0 * s.a * s.b * g1 * g1 / std::tgamma(1.0 + 2.0 / s.exponent);
                        },
                        [](const Rectangle& r) { return r.width * r.height; },
                    },
                    spec.shape);
}

std::pair<Vec2, Vec2> bounding_box(const ShapeSpec& spec) {
  if (const auto* c = std::get_if<Circle>(&spec.shape)) {
    return {{spec.center.x - c->radius, spec.center.y - c->radius},
            {spec.center.x + c->radius, spec.center.y + c->radius}};
  }
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi{-lo.x, -lo.y};
  const auto [w, h] = std::visit(Overloaded{
                                     [](const Circle& c) { return std::pair{c.radius, c.radius}; },
                                     [](const Superellipse& s) { return std::pair{s.a, s.b}; },
                                     [](const Rectangle& r) {
                                       return std::pair{0.5 * r.width, 0.5 * r.height};
                                     },
                                 },
                                 spec.shape);
  for (const Vec2& p : local_boundary(spec, 0.25 * std::min(w, h))) {
    const Vec2 q = place(spec, p);
    lo = {std::min(lo.x, q.x), std::min(lo.y, q.y)};
    hi = {std::max(hi.x, q.x), std::max(hi.y, q.y)};
  }
  return {lo, hi};
}

double min_width(const ShapeSpec& spec) {
  return std::visit(Overloaded{
                        [](const Circle& c) { return 2.0 * c.radius; },
                        [](const Superellipse& s) { return 2.0 * std::min(s.a, s.b); },
                        [](const Rectangle& r) { return std::min(r.width, r.height); },
                    },
                    spec.shape);
}

std::vector<Vec2> sample_boundary(const ShapeSpec& spec, double max_segment) {
  spec.validate();
  if (!(max_segment > 0.0)) throw std::invalid_argument("max_segment must be positive");
  std::vector<Vec2> pts = local_boundary(spec, max_segment);
  for (Vec2& p : pts) p = place(spec, p);
  return pts;
}

levelset::LevelSetField signed_distance(std::span<const std::vector<Vec2>> loops,
                                        const levelset::Grid2D& grid) {
  const std::vector<Chunk> chunks = build_chunks(loops);
  levelset::LevelSetField field(grid);
  if (chunks.empty()) {
    for (double& v : field.values()) v = std::numeric_limits<double>::infinity();
    return field;
  }
  std::vector<double> lower(chunks.size());
  for (int j = 0; j <= grid.n; ++j) {
    for (int i = 0; i <= grid.n; ++i) {
      const Vec2 p = grid.node(i, j);
      double best2 = std::numeric_limits<double>::infinity();
      std::size_t nearest = 0;
      double nearest_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < chunks.size(); ++c) {
        const double d = norm(p - chunks[c].anchor);
        lower[c] = std::max(0.0, d - chunks[c].radius);
        if (d < nearest_d) {
          nearest_d = d;
          nearest = c;
        }
      }
      auto scan = [&](const Chunk& c) {
        const auto& pts = loops[c.loop];
        const std::size_t m = pts.size();
        for (std::size_t k = 0; k < c.count; ++k) {
          const std::size_t a = c.first + k;
          best2 = std::min(best2, segment_distance2(p, pts[a], pts[(a + 1) % m]));
        }
      };
      scan(chunks[nearest]);
      bool inside = false;
      for (std::size_t c = 0; c < chunks.size(); ++c) {
        const Chunk& ch = chunks[c];
        if (c != nearest && lower[c] * lower[c] < best2) scan(ch);
        // ray towards +x
        if (p.y < ch.lo.y || p.y > ch.hi.y || p.x > ch.hi.x) continue;
        const auto& pts = loops[ch.loop];
        const std::size_t m = pts.size();
        for (std::size_t k = 0; k < ch.count; ++k) {
          const Vec2 a = pts[ch.first + k];
          const Vec2 b = pts[(ch.first + k + 1) % m];
          if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x_cross) inside = !inside;
          }
        }
      }
      const double d = std::sqrt(best2);
      field(i, j) = inside ? -d : d;
    }
  }
  return field;
}

levelset::LevelSetField sdf_init(const ShapeSpec& spec, const levelset::Grid2D& grid) {
  spec.validate();
  grid.validate();
  const auto [lo, hi] = bounding_box(spec);
  const double margin = levelset::kGuardCells * grid.dx;
  const Vec2 g_lo = grid.origin;
  const Vec2 g_hi{grid.origin.x + grid.side(), grid.origin.y + grid.side()};
  if (lo.x - g_lo.x < margin || lo.y - g_lo.y < margin || g_hi.x - hi.x < margin ||
      g_hi.y - hi.y < margin) {
    throw PaddingViolation("shape does not fit the grid with " +
                           std::to_string(levelset::kGuardCells) + "-cell padding");
  }
  const std::vector<std::vector<Vec2>> loops{sample_boundary(spec, grid.dx / 8.0)};
  return signed_distance(loops, grid);
}

}  // namespace dissolve::geometry
