#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "dissolve/common.hpp"

namespace dissolve::levelset {

/// Uniform square grid of n x n square cells, (n+1) x (n+1) nodes.
/// Node (i, j) sits at origin + (i dx, j dx).
struct Grid2D {
  int n = 0;
  double dx = 0.0;
  Vec2 origin{};

  /// Grid of n cells per side whose centre is `center`.
  static Grid2D centered(Vec2 center, int n, double dx);

  /// Throws std::invalid_argument unless n >= 8 and dx > 0.
  void validate() const;

  int nodes_per_side() const { return n + 1; }
  std::size_t node_count() const {
    return static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n + 1);
  }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n + 1) +
           static_cast<std::size_t>(i);
  }
  Vec2 node(int i, int j) const { return {origin.x + i * dx, origin.y + j * dx}; }
  double side() const { return n * dx; }

  bool operator==(const Grid2D&) const = default;
};

/// Level-set function sampled on the nodes of a grid; negative inside.
class LevelSetField {
 public:
  explicit LevelSetField(const Grid2D& grid);
  LevelSetField(const Grid2D& grid, std::vector<double> phi);

  const Grid2D& grid() const { return grid_; }
  double operator()(int i, int j) const { return phi_[grid_.index(i, j)]; }
  double& operator()(int i, int j) { return phi_[grid_.index(i, j)]; }
  std::span<const double> values() const { return phi_; }
  std::span<double> values() { return phi_; }

  bool operator==(const LevelSetField&) const = default;

 private:
  Grid2D grid_;
  std::vector<double> phi_;
};

/// Scalar normal speed per node [m/s]; negative values shrink the inside.
struct SpeedField {
  std::vector<double> v;

  double max_abs() const;
};

/// Gradients with |grad phi| below this (phi is a length, so the gradient is
/// dimensionless) are treated as degenerate.
inline constexpr double kGradientEpsilon = 1e-6;

/// Zero level set must stay at least this many cells away from the boundary.
inline constexpr int kGuardCells = 3;

/// cfl * dx / max|v|, or `dt_max` when the speed vanishes everywhere.
double cfl_dt(const SpeedField& speed, const Grid2D& grid, double cfl, double dt_max);

/// One explicit step of the first-order Godunov upwind scheme for
/// phi_t + v |grad phi| = 0. Boundary nodes fall back to the one-sided
/// difference pointing into the domain. Throws CflViolation when
/// dt * max|v| > dx.
LevelSetField upwind_step(const LevelSetField& field, const SpeedField& speed, double dt);

/// Same as upwind_step but writes into `out`, which must share the grid.
void upwind_step_into(const LevelSetField& field, const SpeedField& speed, double dt,
                      LevelSetField& out);

struct CurvatureSample {
  double kappa = 0.0;  ///< [1/m], positive on convex boundaries
  bool degenerate = false;
};

struct NormalSample {
  Vec2 n{};
  bool degenerate = false;
};

/// Curvature from centred differences at an interior node.
CurvatureSample curvature(const LevelSetField& field, int i, int j);

/// grad phi / |grad phi| from centred differences at an interior node.
NormalSample normal(const LevelSetField& field, int i, int j);

/// Curvature on every node. Degenerate nodes take the value of the nearest
/// non-degenerate node; boundary nodes copy their nearest interior node.
std::vector<double> curvature_field(const LevelSetField& field);

/// The n' x n' cell sub-grid whose lower-left node is (i0, j0). Nodes keep
/// their positions and values; throws std::invalid_argument if the block
/// leaves the grid or n' < 8.
LevelSetField crop(const LevelSetField& field, int i0, int j0, int n);

/// Throws PaddingViolation if phi <= 0 anywhere in the outer `guard` rings.
void check_padding(const LevelSetField& field, int guard = kGuardCells);

/// CSV dump: two comment lines with the grid header, then `i,j,phi` rows.
void write_field_csv(std::ostream& out, const LevelSetField& field, double t);
LevelSetField read_field_csv(std::istream& in, double* t = nullptr);

}  // namespace dissolve::levelset
