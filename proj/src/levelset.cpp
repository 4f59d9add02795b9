#include "dissolve/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "text_util.hpp"

namespace dissolve::levelset {

Grid2D Grid2D::centered(Vec2 center, int n, double dx) {
  const double half = 0.5 * n * dx;
  return Grid2D{n, dx, {center.x - half, center.y - half}};
}

void Grid2D::validate() const {
  if (n < 8) throw std::invalid_argument("grid needs at least 8 cells per side");
  if (!(dx > 0.0) || !std::isfinite(dx)) throw std::invalid_argument("grid dx must be positive");
}

LevelSetField::LevelSetField(const Grid2D& grid) : grid_(grid), phi_(grid.node_count(), 0.0) {
  grid_.validate();
}

LevelSetField::LevelSetField(const Grid2D& grid, std::vector<double> phi)
    : grid_(grid), phi_(std::move(phi)) {
  grid_.validate();
  if (phi_.size() != grid_.node_count()) {
    throw std::invalid_argument("level-set values do not match the grid size");
  }
}

double SpeedField::max_abs() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double cfl_dt(const SpeedField& speed, const Grid2D& grid, double cfl, double dt_max) {
  const double vmax = speed.max_abs();
  if (vmax == 0.0) return dt_max;
  return cfl * grid.dx / vmax;
}

void upwind_step_into(const LevelSetField& field, const SpeedField& speed, double dt,
                      LevelSetField& out) {
  const Grid2D& g = field.grid();
  if (speed.v.size() != g.node_count()) {
    throw std::invalid_argument("speed field does not match the grid");
  }
  if (!(out.grid() == g)) throw std::invalid_argument("output field grid mismatch");
  const double vmax = speed.max_abs();
  if (dt * vmax > g.dx * (1.0 + 1e-12)) {
    throw CflViolation("CFL violated: dt * max|v| = " + std::to_string(dt * vmax) +
                       " exceeds dx = " + std::to_string(g.dx));
  }

  const int n = g.n;
  const double inv_dx = 1.0 / g.dx;
  const auto phi = field.values();
  auto next = out.values();
  const std::size_t stride = static_cast<std::size_t>(n + 1);

  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const std::size_t k = g.index(i, j);
      const double v = speed.v[k];
      if (v == 0.0) {
        next[k] = phi[k];
        continue;
      }
      const double c = phi[k];
      double dxm = i > 0 ? (c - phi[k - 1]) * inv_dx : 0.0;
      double dxp = i < n ? (phi[k + 1] - c) * inv_dx : 0.0;
      double dym = j > 0 ? (c - phi[k - stride]) * inv_dx : 0.0;
      double dyp = j < n ? (phi[k + stride] - c) * inv_dx : 0.0;
      if (i == 0) dxm = dxp;
      if (i == n) dxp = dxm;
      if (j == 0) dym = dyp;
      if (j == n) dyp = dym;

      double grad;
      if (v > 0.0) {
        const double a = std::max(dxm, 0.0);
        const double b = std::min(dxp, 0.0);
        const double cc = std::max(dym, 0.0);
        const double d = std::min(dyp, 0.0);
        grad = std::sqrt(a * a + b * b + cc * cc + d * d);
      } else {
        const double a = std::max(dxp, 0.0);
        const double b = std::min(dxm, 0.0);
        const double cc = std::max(dyp, 0.0);
        const double d = std::min(dym, 0.0);
        grad = std::sqrt(a * a + b * b + cc * cc + d * d);
      }
      next[k] = c - dt * v * grad;
    }
  }
}

LevelSetField upwind_step(const LevelSetField& field, const SpeedField& speed, double dt) {
  LevelSetField out(field.grid());
  upwind_step_into(field, speed, dt, out);
  return out;
}

namespace {

struct Derivatives {
  double px, py, pxx, pyy, pxy;
};

Derivatives centred(const LevelSetField& f, int i, int j) {
  const double h = f.grid().dx;
  const double c = f(i, j);
  Derivatives d{};
  d.px = (f(i + 1, j) - f(i - 1, j)) / (2.0 * h);
  d.py = (f(i, j + 1) - f(i, j - 1)) / (2.0 * h);
  d.pxx = (f(i + 1, j) - 2.0 * c + f(i - 1, j)) / (h * h);
  d.pyy = (f(i, j + 1) - 2.0 * c + f(i, j - 1)) / (h * h);
  d.pxy = (f(i + 1, j + 1) - f(i + 1, j - 1) - f(i - 1, j + 1) + f(i - 1, j - 1)) / (4.0 * h * h);
  return d;
}

void require_interior(const Grid2D& g, int i, int j) {
  if (i < 1 || j < 1 || i > g.n - 1 || j > g.n - 1) {
    throw std::out_of_range("stencil needs an interior node");
  }
}

}  // namespace

CurvatureSample curvature(const LevelSetField& field, int i, int j) {
  require_interior(field.grid(), i, j);
  const Derivatives d = centred(field, i, j);
  const double g2 = d.px * d.px + d.py * d.py;
  if (g2 < kGradientEpsilon * kGradientEpsilon) return {0.0, true};
  const double num = d.pxx * d.py * d.py - 2.0 * d.px * d.py * d.pxy + d.pyy * d.px * d.px;
  return {num / (g2 * std::sqrt(g2)), false};
}

NormalSample normal(const LevelSetField& field, int i, int j) {
  require_interior(field.grid(), i, j);
  const Derivatives d = centred(field, i, j);
  const double len = std::hypot(d.px, d.py);
  if (len < kGradientEpsilon) return {{0.0, 0.0}, true};
  return {{d.px / len, d.py / len}, false};
}

std::vector<double> curvature_field(const LevelSetField& field) {
  const Grid2D& g = field.grid();
  const int n = g.n;
  std::vector<double> kappa(g.node_count(), 0.0);
  std::vector<std::size_t> degenerate;
  bool any_valid = false;

  for (int j = 1; j < n; ++j) {
    for (int i = 1; i < n; ++i) {
      const CurvatureSample s = curvature(field, i, j);
      if (s.degenerate) {
        degenerate.push_back(g.index(i, j));
      } else {
        kappa[g.index(i, j)] = s.kappa;
        any_valid = true;
      }
    }
  }

  if (!degenerate.empty() && any_valid) {
    std::vector<char> is_bad(g.node_count(), 0);
    for (std::size_t k : degenerate) is_bad[k] = 1;
    std::vector<double> filled(degenerate.size(), 0.0);
    for (std::size_t d = 0; d < degenerate.size(); ++d) {
      const int i0 = static_cast<int>(degenerate[d] % static_cast<std::size_t>(n + 1));
      const int j0 = static_cast<int>(degenerate[d] / static_cast<std::size_t>(n + 1));
      // Chebyshev rings around the node; the first valid hit in scan order wins.
      bool found = false;
      for (int r = 1; r < n && !found; ++r) {
        for (int dj = -r; dj <= r && !found; ++dj) {
          for (int di = -r; di <= r; ++di) {
            if (std::max(std::abs(di), std::abs(dj)) != r) continue;
            const int i = i0 + di;
            const int j = j0 + dj;
            if (i < 1 || j < 1 || i > n - 1 || j > n - 1) continue;
            const std::size_t k = g.index(i, j);
            if (is_bad[k]) continue;
            filled[d] = kappa[k];
            found = true;
            break;
          }
        }
      }
    }
    for (std::size_t d = 0; d < degenerate.size(); ++d) kappa[degenerate[d]] = filled[d];
  }

  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      if (i >= 1 && j >= 1 && i <= n - 1 && j <= n - 1) continue;
      const int ii = std::clamp(i, 1, n - 1);
      const int jj = std::clamp(j, 1, n - 1);
      kappa[g.index(i, j)] = kappa[g.index(ii, jj)];
    }
  }
  return kappa;
}

LevelSetField crop(const LevelSetField& field, int i0, int j0, int n) {
  const Grid2D& g = field.grid();
  if (n < 8 || i0 < 0 || j0 < 0 || i0 + n > g.n || j0 + n > g.n) {
    throw std::invalid_argument("crop window leaves the grid");
  }
  const Grid2D sub{n, g.dx, g.node(i0, j0)};
  LevelSetField out(sub);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) out(i, j) = field(i0 + i, j0 + j);
  }
  return out;
}

void check_padding(const LevelSetField& field, int guard) {
  const Grid2D& g = field.grid();
  const int n = g.n;
  for (int j = 0; j <= n; ++j) {
    const bool edge_row = j < guard || j > n - guard;
    for (int i = 0; i <= n; ++i) {
      if (!edge_row && i >= guard && i <= n - guard) {
        i = n - guard;  // skip the interior of this row
        continue;
      }
      if (field(i, j) <= 0.0) {
        throw PaddingViolation("zero level set within " + std::to_string(guard) +
                               " cells of the grid boundary at node (" + std::to_string(i) + ", " +
                               std::to_string(j) + ")");
      }
    }
  }
}

void write_field_csv(std::ostream& out, const LevelSetField& field, double t) {
  const Grid2D& g = field.grid();
  out << "# dissolve level-set snapshot v1\n";
  out << "# n=" << g.n << " dx=" << text_util::format_double(g.dx)
      << " origin_x=" << text_util::format_double(g.origin.x)
      << " origin_y=" << text_util::format_double(g.origin.y) << " t=" << text_util::format_double(t)
      << '\n';
  out << "i,j,phi\n";
  for (int j = 0; j <= g.n; ++j) {
    for (int i = 0; i <= g.n; ++i) {
      out << i << ',' << j << ',' << text_util::format_double(field(i, j)) << '\n';
    }
  }
}

LevelSetField read_field_csv(std::istream& in, double* t) {
  std::string line;
  Grid2D g;
  double time = 0.0;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.rfind("# n=", 0) == 0) {
      std::istringstream hs(line.substr(2));
      std::string tok;
      while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        double v = 0.0;
        if (!text_util::parse_double(tok.substr(eq + 1), v)) {
          throw std::invalid_argument("bad snapshot header value '" + tok + "'");
        }
        if (key == "n") g.n = static_cast<int>(v);
        else if (key == "dx") g.dx = v;
        else if (key == "origin_x") g.origin.x = v;
        else if (key == "origin_y") g.origin.y = v;
        else if (key == "t") time = v;
      }
      have_header = true;
    } else if (line.rfind("i,j,phi", 0) == 0) {
      break;
    }
  }
  if (!have_header) throw std::invalid_argument("snapshot header missing");
  LevelSetField field(g);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b, c;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c)) {
      throw std::invalid_argument("bad snapshot row '" + line + "'");
    }
    double phi = 0.0;
    if (!text_util::parse_double(c, phi)) throw std::invalid_argument("bad phi value '" + c + "'");
    const int i = std::stoi(a);
    const int j = std::stoi(b);
    if (i < 0 || j < 0 || i > g.n || j > g.n) throw std::invalid_argument("snapshot index out of range");
    field(i, j) = phi;
    ++rows;
  }
  if (rows != g.node_count()) throw std::invalid_argument("snapshot is truncated");
  if (t) *t = time;
  return field;
}

}  // namespace dissolve::levelset
