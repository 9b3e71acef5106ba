#include "curveflow/closed_curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace curveflow {

ClosedCurve::ClosedCurve(std::vector<Vec2> points) : points_(std::move(points)) {
  const std::size_t n = points_.size();
  if (n < kMinPoints) {
    throw CurveError("closed curve needs at least " + std::to_string(kMinPoints) +
                     " points, got " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = points_[i];
    if (!std::isfinite(a.x) || !std::isfinite(a.y)) {
      throw CurveError("non-finite coordinate at point " + std::to_string(i));
    }
    if (a == points_[i + 1 == n ? 0 : i + 1]) {
      throw CurveError("zero-length edge between points " + std::to_string(i) + " and " +
                       std::to_string((i + 1) % n) +
                       (i + 1 == n ? " (closing point must not be repeated)" : ""));
    }
  }
}

const Vec2& ClosedCurve::at_wrapped(std::ptrdiff_t i) const {
  const auto n = static_cast<std::ptrdiff_t>(points_.size());
  std::ptrdiff_t j = i % n;
  if (j < 0) j += n;
  return points_[static_cast<std::size_t>(j)];
}

double ClosedCurve::signed_area() const {
  const std::size_t n = points_.size();
  // Shift to the first point to limit cancellation for curves far from the origin.
  const Vec2 o = points_[0];
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(points_[i] - o, points_[(i + 1) % n] - o);
  }
  return 0.5 * twice;
}

double ClosedCurve::length() const {
  const std::size_t n = points_.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += distance(points_[i], points_[(i + 1) % n]);
  return total;
}

Vec2 ClosedCurve::centroid() const {
  const std::size_t n = points_.size();
  const Vec2 o = points_[0];
  double twice_area = 0.0;
  Vec2 acc;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = points_[i] - o;
    const Vec2 b = points_[(i + 1) % n] - o;
    const double c = cross(a, b);
    twice_area += c;
    acc += c * (a + b);
  }
  if (std::abs(twice_area) <= std::numeric_limits<double>::min()) {
    Vec2 mean;
    for (const Vec2& p : points_) mean += p;
    return mean / static_cast<double>(n);
  }
  return o + acc / (3.0 * twice_area);
}

double ClosedCurve::min_edge_length() const {
  const std::size_t n = points_.size();
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = std::min(m, distance(points_[i], points_[(i + 1) % n]));
  return m;
}

double ClosedCurve::max_edge_length() const {
  const std::size_t n = points_.size();
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, distance(points_[i], points_[(i + 1) % n]));
  return m;
}

double ClosedCurve::spacing_variation() const {
  const double mean = length() / static_cast<double>(points_.size());
  return (max_edge_length() - min_edge_length()) / mean;
}

ClosedCurve ClosedCurve::reversed() const {
  // Keep point 0 in place so index-based diagnostics stay comparable.
  std::vector<Vec2> out;
  out.reserve(points_.size());
  out.push_back(points_[0]);
  for (std::size_t i = points_.size() - 1; i >= 1; --i) out.push_back(points_[i]);
  return ClosedCurve(std::move(out));
}

ClosedCurve ClosedCurve::translated(Vec2 offset) const {
  std::vector<Vec2> out(points_);
  for (Vec2& p : out) p += offset;
  return ClosedCurve(std::move(out));
}

ClosedCurve ClosedCurve::scaled(double factor, Vec2 center) const {
  std::vector<Vec2> out(points_);
  for (Vec2& p : out) p = center + factor * (p - center);
  return ClosedCurve(std::move(out));
}

ClosedCurve normalize_area(const ClosedCurve& curve, double target) {
  const double area = curve.signed_area();
  if (!(area > 0.0)) {
    throw CurveError("normalize_area: enclosed area must be positive (got " +
                     std::to_string(area) + ")");
  }
  if (!(target > 0.0)) throw CurveError("normalize_area: target area must be positive");
  return curve.scaled(std::sqrt(target / area), curve.centroid());
}

}  // namespace curveflow
