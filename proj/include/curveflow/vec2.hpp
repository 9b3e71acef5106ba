#pragma once

#include <cmath>

namespace curveflow {

/// Planar point / vector in double precision.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }
constexpr double norm2(Vec2 a) { return dot(a, a); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

// Rotation by -90 degrees: maps the tangent of a counterclockwise curve
// to its outer normal.
constexpr Vec2 rotate_cw(Vec2 a) { return {a.y, -a.x}; }
constexpr Vec2 rotate_ccw(Vec2 a) { return {-a.y, a.x}; }

inline Vec2 normalized(Vec2 a) { return a / norm(a); }

}  // namespace curveflow
