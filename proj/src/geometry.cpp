#include "curveflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace curveflow {

double menger_curvature(Vec2 prev, Vec2 at, Vec2 next) {
  const Vec2 e0 = at - prev;
  const Vec2 e1 = next - at;
  const double denom = norm(e0) * norm(e1) * norm(next - prev);
  if (denom == 0.0) return 0.0;
  return 2.0 * cross(e0, e1) / denom;
}

CurveGeometry compute_geometry(const ClosedCurve& curve, double spacing_tolerance) {
  CurveGeometry g;
  compute_geometry(curve, g, spacing_tolerance);
  return g;
}

void compute_geometry(const ClosedCurve& curve, CurveGeometry& g, double spacing_tolerance) {
  const std::size_t n = curve.size();
  const auto pts = curve.points();

  g.arc_positions.resize(n);
  g.dual_lengths.resize(n);
  g.tangents.resize(n);
  g.outer_normals.resize(n);
  g.curvatures.resize(n);

  // Edge lengths go into dual_lengths first and are averaged in place below.
  std::vector<double>& edges = g.dual_lengths;
  double total = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  double twice_area = 0.0;
  const Vec2 origin = pts[0];
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = pts[i];
    const Vec2 b = pts[i + 1 == n ? 0 : i + 1];
    const double e = norm(b - a);
    edges[i] = e;
    g.arc_positions[i] = total;
    total += e;
    lo = std::min(lo, e);
    hi = std::max(hi, e);
    twice_area += cross(a - origin, b - origin);
  }
  const double variation = (hi - lo) / (total / static_cast<double>(n));
  if (variation > spacing_tolerance) {
    std::ostringstream msg;
    msg << "compute_geometry: spacing variation " << variation << " exceeds tolerance "
        << spacing_tolerance << "; resample the curve first";
    throw CurveError(msg.str());
  }

  const double closing_edge = edges[n - 1];
  double prev_edge = closing_edge;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ip = i == 0 ? n - 1 : i - 1;
    const std::size_t in = i + 1 == n ? 0 : i + 1;
    const double next_edge = edges[i];
    const Vec2 chord = pts[in] - pts[ip];
    const double chord_len = norm(chord);
    const Vec2 t = chord / chord_len;
    g.tangents[i] = t;
    g.outer_normals[i] = rotate_cw(t);
    g.curvatures[i] = 2.0 * cross(pts[i] - pts[ip], pts[in] - pts[i]) /
                      (prev_edge * next_edge * chord_len);
    edges[i] = 0.5 * (prev_edge + next_edge);
    prev_edge = next_edge;
  }
  g.total_length = total;
  g.enclosed_area = 0.5 * twice_area;
  g.min_edge_length = lo;
  g.max_edge_length = hi;
}

CurvatureExtremum max_curvature(std::span<const double> k) {
  CurvatureExtremum best{k.front(), 0};
  for (std::size_t i = 1; i < k.size(); ++i) {
    if (k[i] > best.value) best = {k[i], i};
  }
  return best;
}

CurvatureExtremum max_curvature(const CurveGeometry& geom) {
  return max_curvature(std::span<const double>(geom.curvatures));
}

double max_abs_curvature(const CurveGeometry& geom) {
  double m = 0.0;
  for (double k : geom.curvatures) m = std::max(m, std::abs(k));
  return m;
}

double turning_integral(const CurveGeometry& geom) {
  double sum = 0.0;
  for (std::size_t i = 0; i < geom.size(); ++i) sum += geom.curvatures[i] * geom.dual_lengths[i];
  return sum;
}

double position_flux(const ClosedCurve& curve, const CurveGeometry& geom) {
  const std::size_t n = curve.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 chord = curve[(i + 1) % n] - curve[(i + n - 1) % n];
    sum += dot(curve[i], geom.outer_normals[i]) * 0.5 * norm(chord);
  }
  return sum;
}

bool is_convex(const CurveGeometry& geom, double tol) {
  return std::all_of(geom.curvatures.begin(), geom.curvatures.end(),
                     [tol](double k) { return k >= -tol; });
}

double curvature_second_derivative_at(const CurveGeometry& geom, std::size_t i) {
  const std::size_t n = geom.size();
  const double h = geom.dual_lengths[i];
  const double kp = geom.curvatures[(i + n - 1) % n];
  const double kn = geom.curvatures[(i + 1) % n];
  return (kn - 2.0 * geom.curvatures[i] + kp) / (h * h);
}

std::vector<double> curvature_second_derivative(const CurveGeometry& geom) {
  std::vector<double> out(geom.size());
  for (std::size_t i = 0; i < geom.size(); ++i) out[i] = curvature_second_derivative_at(geom, i);
  return out;
}

double curvature_roundness(const CurveGeometry& geom) {
  const auto n = static_cast<double>(geom.size());
  double mean = 0.0;
  for (double k : geom.curvatures) mean += k;
  mean /= n;
  if (!(mean > 0.0)) {
    throw CurveError("curvature_roundness: mean curvature must be positive");
  }
  double var = 0.0;
  for (double k : geom.curvatures) var += (k - mean) * (k - mean);
  return std::sqrt(var / n) / mean;
}

}  // namespace curveflow
