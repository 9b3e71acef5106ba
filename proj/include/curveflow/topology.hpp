#pragma once

#include "curveflow/closed_curve.hpp"

namespace curveflow {

/// Closed-segment intersection test (touching counts as intersecting).
bool segments_intersect(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1);

/// True iff no two non-adjacent edges intersect and adjacent edges share
/// only their common vertex. Edges are bucketed on a uniform grid so the
/// cost is close to linear for well-spaced curves.
bool is_embedded(const ClosedCurve& curve);

/// Even-odd ray-crossing test; points on the boundary may go either way.
bool contains_point(const ClosedCurve& curve, Vec2 p);

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b);
double distance_to_curve(const ClosedCurve& curve, Vec2 p);

struct BoundingBox {
  Vec2 lo;
  Vec2 hi;
  double diagonal() const { return norm(hi - lo); }
};
BoundingBox bounding_box(const ClosedCurve& curve);

}  // namespace curveflow
