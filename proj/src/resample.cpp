#include "curveflow/resample.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace curveflow {
namespace {

constexpr double kDegenerateLength = 1e-12;

void check_target_count(std::size_t n) {
  if (n < ClosedCurve::kMinPoints) {
    throw CurveError("resample: need n >= " + std::to_string(ClosedCurve::kMinPoints) +
                     ", got " + std::to_string(n));
  }
}

// 5-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 5> kGaussNodes = {
    0.046910077030668, 0.230765344947158, 0.5, 0.769234655052842, 0.953089922969332};
constexpr std::array<double, 5> kGaussWeights = {
    0.118463442528095, 0.239314335249683, 0.284444444444444, 0.239314335249683,
    0.118463442528095};

// 3-point Gauss-Legendre on [0, 1]; enough on a single spline segment.
constexpr std::array<double, 3> kGauss3Nodes = {0.112701665379258, 0.5, 0.887298334620742};
constexpr std::array<double, 3> kGauss3Weights = {0.277777777777778, 0.444444444444444,
                                                  0.277777777777778};

// Solves the cyclic tridiagonal system
//   sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]   (indices mod n)
// for both coordinates at once, with the Sherman-Morrison correction for the
// two corner entries. The spline system is diagonally dominant.
std::vector<Vec2> solve_cyclic_tridiagonal(std::span<const double> sub,
                                           std::span<const double> diag,
                                           std::span<const double> sup,
                                           std::span<const Vec2> rhs) {
  const std::size_t n = diag.size();
  const double alpha = sup[n - 1];  // row n-1, column 0
  const double beta = sub[0];       // row 0, column n-1
  const double gamma = -diag[0];

  // Forward elimination of the modified tridiagonal matrix, shared by the
  // right-hand side and the correction vector u = (gamma, 0, ..., 0, alpha).
  std::vector<double> c(n);
  std::vector<Vec2> x(n);
  std::vector<double> z(n);
  double b0 = diag[0] - gamma;
  c[0] = sup[0] / b0;
  x[0] = rhs[0] / b0;
  z[0] = gamma / b0;
  for (std::size_t i = 1; i < n; ++i) {
    double bi = diag[i];
    if (i == n - 1) bi -= alpha * beta / gamma;
    const double m = bi - sub[i] * c[i - 1];
    c[i] = sup[i] / m;
    x[i] = (rhs[i] - sub[i] * x[i - 1]) / m;
    const double ui = i == n - 1 ? alpha : 0.0;
    z[i] = (ui - sub[i] * z[i - 1]) / m;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] -= c[i] * x[i + 1];
    z[i] -= c[i] * z[i + 1];
  }
  const double denom = 1.0 + z[0] + beta * z[n - 1] / gamma;
  const Vec2 fact = (x[0] + (beta / gamma) * x[n - 1]) / denom;
  for (std::size_t i = 0; i < n; ++i) x[i] -= z[i] * fact;
  return x;
}

// Periodic cubic spline through the vertices, parametrized by chord length.
class PeriodicSpline {
 public:
  explicit PeriodicSpline(std::span<const Vec2> pts) : pts_(pts.begin(), pts.end()) {
    const std::size_t n = pts_.size();
    h_.resize(n);
    for (std::size_t i = 0; i < n; ++i) h_[i] = distance(pts_[i], pts_[i + 1 == n ? 0 : i + 1]);

    std::vector<double> sub(n), diag(n), sup(n);
    std::vector<Vec2> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t ip = i == 0 ? n - 1 : i - 1;
      const std::size_t in = i + 1 == n ? 0 : i + 1;
      sub[i] = h_[ip];
      diag[i] = 2.0 * (h_[ip] + h_[i]);
      sup[i] = h_[i];
      rhs[i] = 6.0 * ((pts_[in] - pts_[i]) / h_[i] - (pts_[i] - pts_[ip]) / h_[ip]);
    }
    m_ = solve_cyclic_tridiagonal(sub, diag, sup, rhs);
  }

  std::size_t segments() const { return pts_.size(); }
  double parameter_length(std::size_t i) const { return h_[i]; }

  // Position on segment i at local parameter u in [0, h_i].
  Vec2 position(std::size_t i, double u) const {
    const std::size_t j = i + 1 == pts_.size() ? 0 : i + 1;
    const double h = h_[i];
    const double a = (h - u) / h;
    const double b = u / h;
    return a * pts_[i] + b * pts_[j] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[j]) * (h * h / 6.0);
  }

  Vec2 derivative(std::size_t i, double u) const {
    const std::size_t j = i + 1 == pts_.size() ? 0 : i + 1;
    const double h = h_[i];
    const double a = (h - u) / h;
    const double b = u / h;
    return (pts_[j] - pts_[i]) / h +
           ((1.0 - 3.0 * a * a) * m_[i] + (3.0 * b * b - 1.0) * m_[j]) * (h / 6.0);
  }

  double arc_length(std::size_t i, double u0, double u1) const {
    double sum = 0.0;
    for (std::size_t q = 0; q < kGauss3Nodes.size(); ++q) {
      sum += kGauss3Weights[q] * norm(derivative(i, u0 + (u1 - u0) * kGauss3Nodes[q]));
    }
    return sum * (u1 - u0);
  }

 private:
  std::vector<Vec2> pts_;
  std::vector<double> h_;
  std::vector<Vec2> m_;
};

double signed_area_of(std::span<const Vec2> pts) {
  const Vec2 o = pts[0];
  double twice = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    twice += cross(pts[i] - o, pts[i + 1 == pts.size() ? 0 : i + 1] - o);
  }
  return 0.5 * twice;
}

// Offsets every vertex by delta along its chord normal (tangent rotated by
// -90 degrees); the signed area grows at half the total chord length per unit
// delta for either orientation.
void restore_area(std::vector<Vec2>& pts, double target) {
  const std::size_t n = pts.size();
  const double area = signed_area_of(pts);
  std::vector<Vec2> normals(n);
  double rate = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 chord = pts[i + 1 == n ? 0 : i + 1] - pts[i == 0 ? n - 1 : i - 1];
    const double len = norm(chord);
    normals[i] = rotate_cw(chord / len);
    rate += 0.5 * len;
  }
  // The second-order term is O(delta^2) and delta is already O(h^4).
  const double delta = (target - area) / rate;
  for (std::size_t i = 0; i < n; ++i) pts[i] += delta * normals[i];
}

}  // namespace

ClosedCurve resample_uniform(const ClosedCurve& curve, std::size_t n) {
  check_target_count(n);
  const std::size_t m = curve.size();
  const auto pts = curve.points();
  std::vector<double> cumulative(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    cumulative[i + 1] = cumulative[i] + distance(pts[i], pts[(i + 1) % m]);
  }
  const double total = cumulative[m];
  if (!(total >= kDegenerateLength)) {
    throw CurveError("resample_uniform: degenerate curve (total length " +
                     std::to_string(total) + " below 1e-12)");
  }

  std::vector<Vec2> out;
  out.reserve(n);
  out.push_back(pts[0]);
  std::size_t edge = 0;
  for (std::size_t j = 1; j < n; ++j) {
    const double target = total * static_cast<double>(j) / static_cast<double>(n);
    while (edge + 1 < m && cumulative[edge + 1] <= target) ++edge;
    const Vec2 a = pts[edge];
    const Vec2 b = pts[(edge + 1) % m];
    const double len = cumulative[edge + 1] - cumulative[edge];
    const double u = std::clamp((target - cumulative[edge]) / len, 0.0, 1.0);
    out.push_back(u == 0.0 ? a : a + u * (b - a));
  }
  return ClosedCurve(std::move(out));
}

ClosedCurve resample_smooth(const ClosedCurve& curve, std::size_t n, bool preserve_area) {
  check_target_count(n);
  if (!(curve.length() >= kDegenerateLength)) {
    throw CurveError("resample_smooth: degenerate curve (total length below 1e-12)");
  }
  const PeriodicSpline spline(curve.points());
  const std::size_t m = spline.segments();
  std::vector<double> cumulative(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    cumulative[i + 1] = cumulative[i] + spline.arc_length(i, 0.0, spline.parameter_length(i));
  }
  const double total = cumulative[m];

  std::vector<Vec2> out;
  out.reserve(n);
  out.push_back(curve[0]);
  std::size_t seg = 0;
  for (std::size_t j = 1; j < n; ++j) {
    const double target = total * static_cast<double>(j) / static_cast<double>(n);
    while (seg + 1 < m && cumulative[seg + 1] <= target) ++seg;
    const double h = spline.parameter_length(seg);
    const double want = target - cumulative[seg];
    const double seg_len = cumulative[seg + 1] - cumulative[seg];
    double u = std::clamp(want / seg_len * h, 0.0, h);
    // The chord-length parametrization is nearly arc-length, so one Newton
    // correction of the proportional guess is enough.
    u = std::clamp(u - (spline.arc_length(seg, 0.0, u) - want) / norm(spline.derivative(seg, u)),
                   0.0, h);
    out.push_back(spline.position(seg, u));
  }
  if (preserve_area) restore_area(out, curve.signed_area());
  return ClosedCurve(std::move(out));
}

ClosedCurve sample_by_arc_length(const ParametricCurve& curve, std::size_t n) {
  check_target_count(n);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const std::size_t cells = 16 * n;
  const double dtheta = kTwoPi / static_cast<double>(cells);
  auto speed_integral = [&](double t0, double t1) {
    double sum = 0.0;
    for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
      sum += kGaussWeights[q] * norm(curve.derivative(t0 + (t1 - t0) * kGaussNodes[q]));
    }
    return sum * (t1 - t0);
  };

  std::vector<double> cumulative(cells + 1, 0.0);
  for (std::size_t c = 0; c < cells; ++c) {
    const double t0 = dtheta * static_cast<double>(c);
    cumulative[c + 1] = cumulative[c] + speed_integral(t0, t0 + dtheta);
  }
  const double total = cumulative[cells];
  if (!(total >= kDegenerateLength)) {
    throw CurveError("sample_by_arc_length: degenerate parametric curve");
  }

  std::vector<Vec2> out;
  out.reserve(n);
  out.push_back(curve.position(0.0));
  std::size_t cell = 0;
  for (std::size_t j = 1; j < n; ++j) {
    const double target = total * static_cast<double>(j) / static_cast<double>(n);
    while (cell + 1 < cells && cumulative[cell + 1] <= target) ++cell;
    const double t0 = dtheta * static_cast<double>(cell);
    const double want = target - cumulative[cell];
    double t = t0 + dtheta * want / (cumulative[cell + 1] - cumulative[cell]);
    for (int it = 0; it < 10; ++it) {
      const double f = speed_integral(t0, t) - want;
      const double dt = f / norm(curve.derivative(t));
      t = std::clamp(t - dt, t0, t0 + dtheta);
      if (std::abs(dt) < 1e-15) break;
    }
    out.push_back(curve.position(t));
  }
  return ClosedCurve(std::move(out));
}

}  // namespace curveflow
