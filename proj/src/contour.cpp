#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "dissolve/geometry.hpp"

namespace dissolve::geometry {

namespace {

using levelset::Grid2D;
using levelset::LevelSetField;

// Cell corners c0..c3 run counter-clockwise from the lower-left node; edge k
// joins corner k to corner k+1.
struct Cell {
  std::array<double, 4> phi;
  std::array<Vec2, 4> corner;
  std::array<std::size_t, 4> edge_id;
};

Cell load_cell(const LevelSetField& f, int i, int j) {
  const Grid2D& g = f.grid();
  Cell c{};
  c.phi = {f(i, j), f(i + 1, j), f(i + 1, j + 1), f(i, j + 1)};
  c.corner = {g.node(i, j), g.node(i + 1, j), g.node(i + 1, j + 1), g.node(i, j + 1)};
  c.edge_id = {2 * g.index(i, j), 2 * g.index(i + 1, j) + 1, 2 * g.index(i, j + 1),
               2 * g.index(i, j) + 1};
  return c;
}

int inside_mask(const Cell& c) {
  int m = 0;
  for (int k = 0; k < 4; ++k) {
    if (c.phi[static_cast<std::size_t>(k)] < 0.0) m |= 1 << k;
  }
  return m;
}

// Zero crossing on edge k; the caller guarantees a sign change.
Vec2 crossing(const Cell& c, int k) {
  const auto a = static_cast<std::size_t>(k);
  const auto b = static_cast<std::size_t>((k + 1) % 4);
  const double t = c.phi[a] / (c.phi[a] - c.phi[b]);
  return c.corner[a] + t * (c.corner[b] - c.corner[a]);
}

bool inside(const Cell& c, int k) { return c.phi[static_cast<std::size_t>(k & 3)] < 0.0; }

double cell_average(const Cell& c) { return 0.25 * (c.phi[0] + c.phi[1] + c.phi[2] + c.phi[3]); }

// Segments inside one cell as (from edge, to edge) pairs, each with the
// negative region on its left.
int cell_segments(const Cell& c, int mask, std::array<std::pair<int, int>, 2>& out) {
  if (mask == 0 || mask == 15) return 0;
  if (mask == 0b0101) {
    if (cell_average(c) < 0.0) {
      out[0] = {0, 1};
      out[1] = {2, 3};
    } else {
      out[0] = {0, 3};
      out[1] = {2, 1};
    }
    return 2;
  }
  if (mask == 0b1010) {
    if (cell_average(c) < 0.0) {
      out[0] = {3, 0};
      out[1] = {1, 2};
    } else {
      out[0] = {1, 0};
      out[1] = {3, 2};
    }
    return 2;
  }
  int from = -1;
  int to = -1;
  for (int k = 0; k < 4; ++k) {
    const bool a = inside(c, k);
    const bool b = inside(c, k + 1);
    if (a && !b) from = k;
    if (!a && b) to = k;
  }
  out[0] = {from, to};
  return 1;
}

double polygon_area(const Vec2* pts, std::size_t count) {
  double s = 0.0;
  for (std::size_t k = 0; k < count; ++k) s += cross(pts[k], pts[(k + 1) % count]);
  return 0.5 * s;
}

}  // namespace

Contour extract_contour(const LevelSetField& field) {
  const Grid2D& g = field.grid();
  const std::size_t edges = 2 * g.node_count();
  constexpr std::int64_t kNone = -1;
  std::vector<std::int64_t> next(edges, kNone);
  std::vector<Vec2> point(edges);
  std::vector<char> is_target(edges, 0);
  std::vector<std::size_t> starts;

  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const Cell c = load_cell(field, i, j);
      const int mask = inside_mask(c);
      std::array<std::pair<int, int>, 2> segs{};
      const int count = cell_segments(c, mask, segs);
      for (int s = 0; s < count; ++s) {
        const auto [from, to] = segs[static_cast<std::size_t>(s)];
        const std::size_t a = c.edge_id[static_cast<std::size_t>(from)];
        const std::size_t b = c.edge_id[static_cast<std::size_t>(to)];
        point[a] = crossing(c, from);
        point[b] = crossing(c, to);
        next[a] = static_cast<std::int64_t>(b);
        is_target[b] = 1;
        starts.push_back(a);
      }
    }
  }

  Contour contour;
  std::vector<char> used(edges, 0);
  auto trace = [&](std::size_t start, bool closed) {
    ContourPolyline line;
    line.closed = closed;
    std::size_t e = start;
    line.points.push_back(point[e]);
    used[e] = 1;
    while (next[e] != kNone) {
      e = static_cast<std::size_t>(next[e]);
      line.points.push_back(point[e]);
      if (used[e]) break;
      used[e] = 1;
    }
    contour.push_back(std::move(line));
  };
  // Open chains only appear when phi < 0 reaches the grid boundary.
  for (std::size_t s : starts) {
    if (!used[s] && !is_target[s]) trace(s, false);
  }
  for (std::size_t s : starts) {
    if (!used[s]) trace(s, true);
  }
  return contour;
}

double interior_area(const LevelSetField& field) {
  const Grid2D& g = field.grid();
  const double cell = g.dx * g.dx;
  double total = 0.0;
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      Cell c = load_cell(field, i, j);
      const int mask = inside_mask(c);
      if (mask == 0) continue;
      if (mask == 15) {
        total += cell;
        continue;
      }
      // local coordinates keep the shoelace sum well conditioned
      const Vec2 base = c.corner[0];
      for (Vec2& p : c.corner) p = p - base;
      const bool separated =
          (mask == 0b0101 || mask == 0b1010) && !(cell_average(c) < 0.0);
      if (separated) {
        for (int k = 0; k < 4; ++k) {
          if (!inside(c, k)) continue;
          const Vec2 tri[3] = {c.corner[static_cast<std::size_t>(k)], crossing(c, k),
                               crossing(c, (k + 3) % 4)};
          total += std::abs(polygon_area(tri, 3));
        }
        continue;
      }
      std::array<Vec2, 8> poly{};
      std::size_t m = 0;
      for (int k = 0; k < 4; ++k) {
        if (inside(c, k)) poly[m++] = c.corner[static_cast<std::size_t>(k)];
        if (inside(c, k) != inside(c, k + 1)) poly[m++] = crossing(c, k);
      }
      total += polygon_area(poly.data(), m);
    }
  }
  return total;
}

double perimeter(const Contour& contour) {
  double p = 0.0;
  for (const auto& line : contour) {
    for (std::size_t k = 0; k + 1 < line.points.size(); ++k) {
      p += norm(line.points[k + 1] - line.points[k]);
    }
  }
  return p;
}

double shoelace_area(const Contour& contour) {
  double a = 0.0;
  for (const auto& line : contour) {
    if (!line.closed || line.points.size() < 4) continue;
    const Vec2 base = line.points.front();
    for (std::size_t k = 0; k + 1 < line.points.size(); ++k) {
      a += cross(line.points[k] - base, line.points[k + 1] - base);
    }
  }
  return 0.5 * a;
}

double total_turning_angle(const ContourPolyline& loop) {
  std::vector<Vec2> dirs;
  for (std::size_t k = 0; k + 1 < loop.points.size(); ++k) {
    const Vec2 d = loop.points[k + 1] - loop.points[k];
    if (norm(d) > 0.0) dirs.push_back(d);
  }
  if (dirs.size() < 2) return 0.0;
  const std::size_t m = dirs.size();
  const std::size_t last = loop.closed ? m : m - 1;
  double total = 0.0;
  for (std::size_t k = 0; k < last; ++k) {
    const Vec2 a = dirs[k];
    const Vec2 b = dirs[(k + 1) % m];
    total += std::atan2(cross(a, b), dot(a, b));
  }
  return total;
}

double interpolate(const Grid2D& g, std::span<const double> values, Vec2 p) {
  const double fx = (p.x - g.origin.x) / g.dx;
  const double fy = (p.y - g.origin.y) / g.dx;
  const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, g.n - 1);
  const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, g.n - 1);
  const double tx = std::clamp(fx - i, 0.0, 1.0);
  const double ty = std::clamp(fy - j, 0.0, 1.0);
  const double v00 = values[g.index(i, j)];
  const double v10 = values[g.index(i + 1, j)];
  const double v01 = values[g.index(i, j + 1)];
  const double v11 = values[g.index(i + 1, j + 1)];
  return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 + (1 - tx) * ty * v01 + tx * ty * v11;
}

ContourMeasure measure(const Contour& contour, const LevelSetField& field,
                       std::span<const double> node_curvature, const physchem::DrugParams& drug,
                       physchem::SigmaPolicy policy) {
  const Grid2D& g = field.grid();
  if (node_curvature.size() != g.node_count()) {
    throw std::invalid_argument("curvature field does not match the grid");
  }
  ContourMeasure m;
  m.area = interior_area(field);
  m.r_eq = physchem::r_equivalent(m.area);
  m.min_radius = std::numeric_limits<double>::infinity();
  if (contour.empty() || m.area <= 0.0) return m;

  const double r_min = 0.5 * g.dx;
  const physchem::TransferModel model(drug, m.r_eq, r_min, policy);
  for (const auto& line : contour) {
    for (std::size_t k = 0; k + 1 < line.points.size(); ++k) {
      SegmentSample s;
      s.midpoint = 0.5 * (line.points[k] + line.points[k + 1]);
      s.length = norm(line.points[k + 1] - line.points[k]);
      s.kappa = interpolate(g, node_curvature, s.midpoint);
      s.radius = s.kappa > 0.0 ? std::max(1.0 / s.kappa, r_min)
                               : std::numeric_limits<double>::infinity();
      s.k = model.k_at_curvature(s.kappa);
      m.perimeter += s.length;
      m.min_radius = std::min(m.min_radius, s.radius);
      m.max_k = std::max(m.max_k, s.k);
      m.segments.push_back(s);
    }
  }
  return m;
}

ContourMeasure measure(const Contour& contour, const LevelSetField& field,
                       const physchem::DrugParams& drug, physchem::SigmaPolicy policy) {
  const std::vector<double> kappa = levelset::curvature_field(field);
  return measure(contour, field, kappa, drug, policy);
}

double boundary_integral_k(const ContourMeasure& m) {
  double s = 0.0;
  for (const auto& seg : m.segments) s += seg.k * seg.length;
  return s;
}

void reinitialize(LevelSetField& field) {
  const Contour contour = extract_contour(field);
  if (contour.empty()) return;
  std::vector<std::vector<Vec2>> loops;
  for (const auto& line : contour) {
    if (line.points.size() < 2) continue;
    std::vector<Vec2> pts(line.points.begin(), line.points.end());
    if (line.closed) pts.pop_back();
    loops.push_back(std::move(pts));
  }
  const LevelSetField dist = signed_distance(loops, field.grid());
  auto out = field.values();
  const auto d = dist.values();
  // the sign comes from phi itself so that no node changes side
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = out[k] < 0.0 ? -std::abs(d[k]) : std::abs(d[k]);
  }
}

}  // namespace dissolve::geometry
