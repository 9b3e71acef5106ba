#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "curveflow/vec2.hpp"

namespace curveflow {

/// Raised for inputs that violate a geometric precondition (degenerate
/// polylines, non-uniform spacing, non-embedded curves, ...).
class CurveError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Ordered closed polyline. Point N-1 connects back to point 0; the closing
/// point is never stored twice. Orientation is implied by the point order
/// (counterclockwise = positive, interior on the left).
///
/// Construction validates N >= 8, finite coordinates, and distinct
/// consecutive points. Degenerate input is rejected, never repaired.
class ClosedCurve {
 public:
  static constexpr std::size_t kMinPoints = 8;

  explicit ClosedCurve(std::vector<Vec2> points);

  std::size_t size() const { return points_.size(); }
  std::span<const Vec2> points() const { return points_; }
  const Vec2& operator[](std::size_t i) const { return points_[i]; }

  // Periodic access; i may be any integer.
  const Vec2& at_wrapped(std::ptrdiff_t i) const;

  /// Signed shoelace area; positive for counterclockwise order.
  double signed_area() const;
  /// Sum of edge lengths including the closing edge.
  double length() const;
  /// Area centroid of the enclosed polygon.
  Vec2 centroid() const;

  double min_edge_length() const;
  double max_edge_length() const;
  /// (max edge - min edge) / mean edge.
  double spacing_variation() const;

  /// Moves the point storage out; the curve is left empty and must not be used.
  std::vector<Vec2> take_points() && { return std::move(points_); }

  ClosedCurve reversed() const;
  ClosedCurve translated(Vec2 offset) const;
  /// Uniform scaling about `center`.
  ClosedCurve scaled(double factor, Vec2 center) const;

 private:
  std::vector<Vec2> points_;
};

/// Scales `curve` about its centroid so the enclosed area equals `target`.
/// Throws CurveError for non-positive area.
ClosedCurve normalize_area(const ClosedCurve& curve, double target);

}  // namespace curveflow
