#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dissolve/common.hpp"
#include "dissolve/levelset.hpp"
#include "dissolve/physchem.hpp"

namespace dissolve::geometry {

struct Circle {
  double radius = 0.0;
  bool operator==(const Circle&) const = default;
};

/// |x/a|^n + |y/b|^n = 1. n = 2 is an ellipse, large n tends to a rectangle.
struct Superellipse {
  double a = 0.0;
  double b = 0.0;
  double exponent = 2.0;
  bool operator==(const Superellipse&) const = default;
};

struct Rectangle {
  double width = 0.0;
  double height = 0.0;
  bool operator==(const Rectangle&) const = default;
};

using ShapeVariant = std::variant<Circle, Superellipse, Rectangle>;

struct ShapeSpec {
  ShapeVariant shape;
  Vec2 center{};
  double rotation = 0.0;  ///< [rad], counter-clockwise

  /// Throws std::invalid_argument for non-positive lengths or exponent < 2.
  void validate() const;
  bool operator==(const ShapeSpec&) const = default;
};

/// Exact area of the shape.
double area(const ShapeSpec& shape);
/// Axis-aligned bounding box (lower-left, upper-right) after rotation.
std::pair<Vec2, Vec2> bounding_box(const ShapeSpec& shape);
/// Narrowest width across the shape (2 min(a, b), min(w, h) or 2R).
double min_width(const ShapeSpec& shape);

/// Dense counter-clockwise sampling of the boundary. Consecutive samples are
/// at most `max_segment` apart; the first point is not repeated at the end.
std::vector<Vec2> sample_boundary(const ShapeSpec& shape, double max_segment);

/// Signed distance to the sampled boundary: unsigned point-to-polyline
/// distance, negative where ray casting puts the node inside. Throws
/// PaddingViolation when the shape comes closer than kGuardCells to the edge.
levelset::LevelSetField sdf_init(const ShapeSpec& shape, const levelset::Grid2D& grid);

/// Signed distance of every node to a set of closed loops, with the sign
/// taken from ray casting against the loops.
levelset::LevelSetField signed_distance(std::span<const std::vector<Vec2>> loops,
                                        const levelset::Grid2D& grid);

struct ContourPolyline {
  std::vector<Vec2> points;  ///< closed loops repeat the first point at the end
  bool closed = false;
};

/// All loops of the zero level set; empty once the particle is gone.
using Contour = std::vector<ContourPolyline>;

/// Marching squares with linear interpolation on cell edges. Loops are traced
/// cell by cell and oriented counter-clockwise around the negative region.
/// Saddle cells are split according to the sign of the cell-average phi.
Contour extract_contour(const levelset::LevelSetField& field);

/// Area of {phi < 0}: fully interior cells plus the interior polygon of every
/// cell crossed by the boundary.
double interior_area(const levelset::LevelSetField& field);

double perimeter(const Contour& contour);
/// Signed shoelace area summed over loops (positive for CCW outer loops).
double shoelace_area(const Contour& contour);
/// Sum of exterior turning angles along a closed loop (2 pi for a simple CCW loop).
double total_turning_angle(const ContourPolyline& loop);

/// Per-segment quantities, evaluated at the segment midpoint.
struct SegmentSample {
  Vec2 midpoint{};
  double length = 0.0;
  double kappa = 0.0;
  double radius = 0.0;  ///< clamped curvature radius; +inf on flat/concave points
  double k = 0.0;       ///< local overall coefficient K [m/s]
};

struct ContourMeasure {
  double perimeter = 0.0;  ///< [m]
  double area = 0.0;       ///< [m^2]
  double r_eq = 0.0;       ///< sqrt(area / pi)
  double min_radius = 0.0;
  double max_k = 0.0;
  std::vector<SegmentSample> segments;
};

/// Perimeter, area and local K along the contour. Curvature is taken from the
/// node curvature field by bilinear interpolation. R is clamped below at dx/2.
ContourMeasure measure(const Contour& contour, const levelset::LevelSetField& field,
                       const physchem::DrugParams& drug,
                       physchem::SigmaPolicy policy = physchem::SigmaPolicy::continuous);

/// Same, reusing a precomputed levelset::curvature_field.
ContourMeasure measure(const Contour& contour, const levelset::LevelSetField& field,
                       std::span<const double> node_curvature, const physchem::DrugParams& drug,
                       physchem::SigmaPolicy policy = physchem::SigmaPolicy::continuous);

/// Midpoint-rule integral of K along the contour [m^2/s per unit depth].
double boundary_integral_k(const ContourMeasure& m);

/// Value of the nearest contour segment at every node. `segment_values` runs
/// over consecutive point pairs of every polyline in order, the same order as
/// ContourMeasure::segments. Nearest segments are found exactly near the
/// contour and propagated by two raster sweeps elsewhere. Returns zeros for an
/// empty contour.
std::vector<double> extend_from_contour(const Contour& contour,
                                        std::span<const double> segment_values,
                                        const levelset::Grid2D& grid);

/// Rebuilds phi as the signed distance to its own zero level set. No-op when
/// the contour is empty.
void reinitialize(levelset::LevelSetField& field);

/// Bilinear interpolation of a node-based field at a point inside the grid.
double interpolate(const levelset::Grid2D& grid, std::span<const double> node_values, Vec2 p);

}  // namespace dissolve::geometry
