#include "curveflow/star.hpp"

#include <algorithm>
#include <limits>

#include "curveflow/topology.hpp"

namespace curveflow {

double min_support(const ClosedCurve& curve, const CurveGeometry& geom, Vec2 center) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.size(); ++i) {
    m = std::min(m, dot(curve[i] - center, geom.outer_normals[i]));
  }
  return m;
}

StarKernelResult find_star_center(const ClosedCurve& curve, const CurveGeometry& geom,
                                  const StarSearchOptions& options) {
  StarKernelResult result;
  result.min_support = -std::numeric_limits<double>::infinity();

  const Vec2 centroid = curve.centroid();
  if (contains_point(curve, centroid)) {
    const double s = min_support(curve, geom, centroid);
    result.min_support = s;
    if (s >= 0.0) {
      result.found = true;
      result.center = centroid;
      return result;
    }
  }

  const BoundingBox box = bounding_box(curve);
  const Vec2 extent = box.hi - box.lo;
  for (std::size_t g = 4; g <= options.max_grid; g *= 2) {
    std::optional<Vec2> best;
    double best_support = -std::numeric_limits<double>::infinity();
    for (std::size_t iy = 0; iy < g; ++iy) {
      for (std::size_t ix = 0; ix < g; ++ix) {
        const Vec2 c{box.lo.x + extent.x * (static_cast<double>(ix) + 0.5) / static_cast<double>(g),
                     box.lo.y + extent.y * (static_cast<double>(iy) + 0.5) / static_cast<double>(g)};
        if (!contains_point(curve, c)) continue;
        const double s = min_support(curve, geom, c);
        if (s > best_support) {
          best_support = s;
          best = c;
        }
      }
    }
    result.min_support = std::max(result.min_support, best_support);
    if (best && best_support >= 0.0) {
      result.found = true;
      result.center = best;
      result.min_support = best_support;
      return result;
    }
  }
  return result;
}

}  // namespace curveflow
