#pragma once

#include <cstddef>
#include <functional>

#include "curveflow/closed_curve.hpp"

namespace curveflow {

/// Places `n` points at equal arc-length spacing along the input polyline,
/// interpolating linearly on its edges. Point 0 is kept; orientation is
/// preserved. Throws CurveError for n < 8 or total length below 1e-12.
ClosedCurve resample_uniform(const ClosedCurve& curve, std::size_t n);

/// Same contract as resample_uniform, but the new points are placed at equal
/// arc length along the periodic cubic spline through the input vertices
/// (chord-length parametrized). The new points deviate from the underlying
/// smooth curve by O(h^4) instead of O(h^2), so repeated resampling during a
/// flow leaves the enclosed area essentially untouched.
///
/// With `preserve_area`, the result is additionally offset along its normals
/// by the uniform distance that restores the input's enclosed area (the
/// residual placement deficit is O(h^4) relative).
ClosedCurve resample_smooth(const ClosedCurve& curve, std::size_t n, bool preserve_area = false);

/// A smooth closed parametric curve on theta in [0, 2 pi).
struct ParametricCurve {
  std::function<Vec2(double)> position;
  std::function<Vec2(double)> derivative;
};

/// Samples `n` points of a parametric curve at equal arc length, starting at
/// theta = 0. Arc length is integrated with Gauss-Legendre quadrature and
/// inverted by Newton iteration, so the points lie on the curve exactly.
ClosedCurve sample_by_arc_length(const ParametricCurve& curve, std::size_t n);

}  // namespace curveflow
