#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dissolve/geometry.hpp"

namespace dissolve::geometry {

namespace {

struct Segment {
  Vec2 a;
  Vec2 b;
};

double distance2(Vec2 p, const Segment& s) {
  const Vec2 d = s.b - s.a;
  const double len2 = dot(d, d);
  double t = len2 > 0.0 ? dot(p - s.a, d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Vec2 q = s.a + t * d - p;
  return dot(q, q);
}

}  // namespace

std::vector<double> extend_from_contour(const Contour& contour,
                                        std::span<const double> segment_values,
                                        const levelset::Grid2D& g) {
  std::vector<Segment> segs;
  for (const auto& line : contour) {
    for (std::size_t k = 0; k + 1 < line.points.size(); ++k) {
      segs.push_back({line.points[k], line.points[k + 1]});
    }
  }
  if (segs.size() != segment_values.size()) {
    throw std::invalid_argument("one value per contour segment expected");
  }
  std::vector<double> out(g.node_count(), 0.0);
  if (segs.empty()) return out;

  constexpr int kNone = -1;
  std::vector<int> label(g.node_count(), kNone);
  std::vector<double> best(g.node_count(), std::numeric_limits<double>::infinity());
  auto offer = [&](int i, int j, int s) {
    const std::size_t n = g.index(i, j);
    const double d = distance2(g.node(i, j), segs[static_cast<std::size_t>(s)]);
    if (d < best[n] || (d == best[n] && s < label[n])) {
      best[n] = d;
      label[n] = s;
    }
  };

  // exact nearest segment within two cells of the contour
  for (std::size_t s = 0; s < segs.size(); ++s) {
    const Segment& sg = segs[s];
    const auto cell = [&](double x, double o) { return static_cast<int>(std::floor((x - o) / g.dx)); };
    const int i0 = std::max(0, cell(std::min(sg.a.x, sg.b.x), g.origin.x) - 2);
    const int i1 = std::min(g.n, cell(std::max(sg.a.x, sg.b.x), g.origin.x) + 3);
    const int j0 = std::max(0, cell(std::min(sg.a.y, sg.b.y), g.origin.y) - 2);
    const int j1 = std::min(g.n, cell(std::max(sg.a.y, sg.b.y), g.origin.y) + 3);
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) offer(i, j, static_cast<int>(s));
    }
  }

  auto pull = [&](int i, int j, int ni, int nj) {
    if (ni < 0 || nj < 0 || ni > g.n || nj > g.n) return;
    const int s = label[g.index(ni, nj)];
    if (s != kNone) offer(i, j, s);
  };
  for (int pass = 0; pass < 2; ++pass) {
    for (int j = 0; j <= g.n; ++j) {
      for (int i = 0; i <= g.n; ++i) {
        pull(i, j, i - 1, j);
        pull(i, j, i, j - 1);
        pull(i, j, i - 1, j - 1);
        pull(i, j, i + 1, j - 1);
      }
    }
    for (int j = g.n; j >= 0; --j) {
      for (int i = g.n; i >= 0; --i) {
        pull(i, j, i + 1, j);
        pull(i, j, i, j + 1);
        pull(i, j, i + 1, j + 1);
        pull(i, j, i - 1, j + 1);
      }
    }
  }
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = segment_values[static_cast<std::size_t>(label[n])];
  }
  return out;
}

}  // namespace dissolve::geometry
