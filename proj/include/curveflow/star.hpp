#pragma once

#include <cstddef>
#include <optional>

#include "curveflow/geometry.hpp"

namespace curveflow {

struct StarKernelResult {
  bool found = false;
  std::optional<Vec2> center;
  /// min_i (p_i - center) . n_i for the returned center; best value seen
  /// over all candidates when nothing qualified.
  double min_support = 0.0;
};

struct StarSearchOptions {
  /// Finest grid tried after the centroid; levels double from 4 up to this.
  std::size_t max_grid = 64;
};

/// min_i (p_i - center) . n_i
double min_support(const ClosedCurve& curve, const CurveGeometry& geom, Vec2 center);

/// Searches for a witness center c with (p_i - c) . n_i >= 0 at every vertex.
/// Tries the centroid first, then coarse-to-fine grids over the bounding box
/// restricted to interior points; at the first level that has a qualifying
/// point, the one with the largest support is returned.
///
/// A failed search does not prove the curve is not star-shaped.
StarKernelResult find_star_center(const ClosedCurve& curve, const CurveGeometry& geom,
                                  const StarSearchOptions& options = {});

}  // namespace curveflow
