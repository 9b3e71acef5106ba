#pragma once

#include <cstddef>
#include <vector>

#include "curveflow/closed_curve.hpp"

namespace curveflow {

/// Per-vertex discrete differential geometry of a closed polyline.
///
/// Sign convention follows the Frenet relation Gamma'' = -k n: the normal is
/// the tangent rotated by -90 degrees, so for a counterclockwise curve it
/// points outward and k > 0 where the curve bends toward its interior.
/// A clockwise curve gets the mirrored convention (k < 0 on a circle).
struct CurveGeometry {
  std::vector<double> arc_positions;  ///< cumulative arc length, s_0 = 0
  std::vector<double> dual_lengths;   ///< Delta s_i = mean of the two incident edges
  std::vector<Vec2> tangents;
  std::vector<Vec2> outer_normals;
  std::vector<double> curvatures;     ///< signed Menger curvature
  double total_length = 0.0;
  double enclosed_area = 0.0;         ///< signed shoelace area
  double min_edge_length = 0.0;
  double max_edge_length = 0.0;

  std::size_t size() const { return curvatures.size(); }
};

/// Default bound on (max edge - min edge) / mean edge accepted by compute_geometry.
inline constexpr double kDefaultSpacingTolerance = 0.01;

/// Computes tangents, normals, signed Menger curvature, arc positions and area.
/// Throws CurveError when the spacing variation exceeds `spacing_tolerance`;
/// resample first.
CurveGeometry compute_geometry(const ClosedCurve& curve,
                               double spacing_tolerance = kDefaultSpacingTolerance);

/// In-place variant reusing the buffers of `out`.
void compute_geometry(const ClosedCurve& curve, CurveGeometry& out,
                      double spacing_tolerance = kDefaultSpacingTolerance);

/// Signed curvature of the circle through three points (0 when collinear).
double menger_curvature(Vec2 prev, Vec2 at, Vec2 next);

struct CurvatureExtremum {
  double value = 0.0;
  std::size_t index = 0;
};

/// Maximum signed curvature; ties resolve to the lowest index.
CurvatureExtremum max_curvature(const CurveGeometry& geom);
CurvatureExtremum max_curvature(std::span<const double> curvatures);

double max_abs_curvature(const CurveGeometry& geom);

/// Sum of k_i * Delta s_i; 2 pi for a counterclockwise Jordan curve.
double turning_integral(const CurveGeometry& geom);

/// Sum of (p_i . n_i) weighted by half the chord p_{i+1} - p_{i-1}.
/// Equals twice the shoelace area for any closed polyline.
double position_flux(const ClosedCurve& curve, const CurveGeometry& geom);

/// True iff every vertex curvature is >= -tol.
bool is_convex(const CurveGeometry& geom, double tol);

/// Central second difference of the curvature field with periodic indexing.
std::vector<double> curvature_second_derivative(const CurveGeometry& geom);
double curvature_second_derivative_at(const CurveGeometry& geom, std::size_t i);

/// Coefficient of variation (population stddev / mean) of the curvature field.
/// Throws CurveError when the mean curvature is not positive.
double curvature_roundness(const CurveGeometry& geom);

}  // namespace curveflow
