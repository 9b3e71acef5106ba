#include "curveflow/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace curveflow {
namespace {

int orientation_sign(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

// Adjacent edges (a -> v) and (v -> b) overlap beyond v only when they fold
// back onto each other.
bool adjacent_edges_overlap(Vec2 a, Vec2 v, Vec2 b) {
  if (cross(v - a, b - v) != 0.0) return false;
  return dot(v - a, b - v) < 0.0;
}

}  // namespace

bool segments_intersect(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
  const int o1 = orientation_sign(a0, a1, b0);
  const int o2 = orientation_sign(a0, a1, b1);
  const int o3 = orientation_sign(b0, b1, a0);
  const int o4 = orientation_sign(b0, b1, a1);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a0, a1, b0)) return true;
  if (o2 == 0 && on_segment(a0, a1, b1)) return true;
  if (o3 == 0 && on_segment(b0, b1, a0)) return true;
  if (o4 == 0 && on_segment(b0, b1, a1)) return true;
  return false;
}

BoundingBox bounding_box(const ClosedCurve& curve) {
  BoundingBox box{curve[0], curve[0]};
  for (const Vec2& p : curve.points()) {
    box.lo.x = std::min(box.lo.x, p.x);
    box.lo.y = std::min(box.lo.y, p.y);
    box.hi.x = std::max(box.hi.x, p.x);
    box.hi.y = std::max(box.hi.y, p.y);
  }
  return box;
}

bool is_embedded(const ClosedCurve& curve) {
  const std::size_t n = curve.size();
  const auto pts = curve.points();
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacent_edges_overlap(pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n])) return false;
  }

  const BoundingBox box = bounding_box(curve);
  const double cell = 2.0 * curve.length() / static_cast<double>(n);
  const double width = std::max(box.hi.x - box.lo.x, cell);
  const double height = std::max(box.hi.y - box.lo.y, cell);
  const auto nx = static_cast<std::size_t>(std::clamp(width / cell, 1.0, 256.0));
  const auto ny = static_cast<std::size_t>(std::clamp(height / cell, 1.0, 256.0));
  const double sx = static_cast<double>(nx) / width;
  const double sy = static_cast<double>(ny) / height;
  auto cell_x = [&](double x) {
    return std::min(nx - 1, static_cast<std::size_t>(std::max(0.0, (x - box.lo.x) * sx)));
  };
  auto cell_y = [&](double y) {
    return std::min(ny - 1, static_cast<std::size_t>(std::max(0.0, (y - box.lo.y) * sy)));
  };

  std::vector<std::vector<std::size_t>> buckets(nx * ny);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = pts[i];
    const Vec2 b = pts[(i + 1) % n];
    const std::size_t x0 = cell_x(std::min(a.x, b.x)), x1 = cell_x(std::max(a.x, b.x));
    const std::size_t y0 = cell_y(std::min(a.y, b.y)), y1 = cell_y(std::max(a.y, b.y));
    for (std::size_t cy = y0; cy <= y1; ++cy) {
      for (std::size_t cx = x0; cx <= x1; ++cx) buckets[cy * nx + cx].push_back(i);
    }
  }

  for (const auto& bucket : buckets) {
    for (std::size_t u = 0; u < bucket.size(); ++u) {
      for (std::size_t v = u + 1; v < bucket.size(); ++v) {
        const std::size_t i = bucket[u];
        const std::size_t j = bucket[v];
        const std::size_t gap = i > j ? i - j : j - i;
        if (gap == 1 || gap == n - 1) continue;
        if (segments_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n])) return false;
      }
    }
  }
  return true;
}

bool contains_point(const ClosedCurve& curve, Vec2 p) {
  const std::size_t n = curve.size();
  const auto pts = curve.points();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = pts[i];
    const Vec2 b = pts[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = norm2(ab);
  const double u = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return distance(p, a + u * ab);
}

double distance_to_curve(const ClosedCurve& curve, Vec2 p) {
  const std::size_t n = curve.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, distance_to_segment(p, curve[i], curve[(i + 1) % n]));
  }
  return best;
}

}  // namespace curveflow
