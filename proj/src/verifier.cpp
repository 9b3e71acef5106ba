#include "curveflow/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "curveflow/resample.hpp"
#include "curveflow/topology.hpp"

namespace curveflow {

namespace {

constexpr double kPi = std::numbers::pi;

std::string format(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void require_positive_embedded(const ClosedCurve& curve) {
  if (curve.signed_area() <= 0.0) throw CurveError("curve is not counterclockwise");
  if (!is_embedded(curve)) throw CurveError("curve is not embedded");
}

CheckEntry not_applicable(std::string name, CheckKind kind, double tolerance,
                          std::string details) {
  CheckEntry e;
  e.name = std::move(name);
  e.kind = kind;
  e.status = CheckStatus::not_applicable;
  e.tolerance = tolerance;
  e.details = std::move(details);
  return e;
}

CheckEntry error_entry(std::string name, CheckKind kind, const std::exception& ex) {
  CheckEntry e;
  e.name = std::move(name);
  e.kind = kind;
  e.status = CheckStatus::error;
  e.margin = std::numeric_limits<double>::quiet_NaN();
  e.details = ex.what();
  return e;
}

// Runs `body`, turning any exception into an error entry for `name`.
void guarded(std::vector<CheckEntry>& out, const std::string& name, CheckKind kind,
             const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& ex) {
    out.push_back(error_entry(name, kind, ex));
  }
}

}  // namespace

std::string_view to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::not_applicable: return "not_applicable";
    case CheckStatus::error: return "error";
  }
  return "error";
}

double polygon_main_allowance(std::size_t n) {
  const double x = static_cast<double>(n);
  return 1.0 - std::sqrt(x * std::sin(2.0 * kPi / x) / (2.0 * kPi));
}

double polygon_length_allowance(std::size_t n) {
  return 1.0 - std::cos(kPi / static_cast<double>(n));
}

CheckEntry make_entry(std::string name, CheckKind kind, double margin, double tolerance,
                      std::string details) {
  CheckEntry e;
  e.name = std::move(name);
  e.kind = kind;
  e.margin = margin;
  e.tolerance = tolerance;
  e.details = std::move(details);
  bool ok = kind == CheckKind::inequality ? margin >= -tolerance : std::abs(margin) <= tolerance;
  e.status = ok ? CheckStatus::pass : CheckStatus::fail;
  return e;
}

const CheckEntry* VerificationReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

void VerificationReport::finalize() {
  overall_pass = !checks.empty() &&
                 std::all_of(checks.begin(), checks.end(), [](const CheckEntry& c) { return c.passed(); });
}

double check_main_inequality(const ClosedCurve& curve) {
  require_positive_embedded(curve);
  const CurveGeometry g = compute_geometry(curve);
  return max_curvature(g).value * std::sqrt(g.enclosed_area / kPi) - 1.0;
}

double check_star_identity(const ClosedCurve& curve) {
  const CurveGeometry g = compute_geometry(curve);
  double sum = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i)
    sum += g.curvatures[i] * dot(curve[i], g.outer_normals[i]) * g.dual_lengths[i];
  return std::abs(sum - g.total_length) / g.total_length;
}

StarBoundReport check_star_bound(const ClosedCurve& curve, const Tolerances& tol,
                                 const StarSearchOptions& search) {
  StarBoundReport r;
  const CurveGeometry g = compute_geometry(curve);
  r.length = g.total_length;
  const double length_tol =
      tol.star_length + (tol.polygon_allowance ? polygon_length_allowance(curve.size()) : 0.0);
  const StarKernelResult star = find_star_center(curve, g, search);
  r.support_margin = star.min_support;
  if (!star.found) return r;
  r.center = star.center;

  const double k_max = max_curvature(g).value;
  r.support_margin = min_support(curve, g, *star.center);
  r.length_margin = 2.0 * k_max * g.enclosed_area - g.total_length;
  r.isoperimetric_margin = g.total_length * g.total_length - 4.0 * kPi * g.enclosed_area;

  bool ok = r.support_margin >= -tol.star_support * r.length &&
            r.length_margin >= -length_tol * r.length &&
            r.isoperimetric_margin >= -tol.isoperimetric;
  r.status = ok ? CheckStatus::pass : CheckStatus::fail;
  return r;
}

double check_isoperimetric(const ClosedCurve& curve) {
  const double l = curve.length();
  return l * l - 4.0 * kPi * curve.signed_area();
}

double inscribed_disk_radius(const ClosedCurve& curve, std::size_t grid_resolution) {
  if (grid_resolution == 0) throw CurveError("grid resolution must be positive");
  const BoundingBox box = bounding_box(curve);
  const std::size_t n = grid_resolution;
  const double hx = (box.hi.x - box.lo.x) / static_cast<double>(n);
  const double hy = (box.hi.y - box.lo.y) / static_cast<double>(n);
  auto node = [&](std::size_t i, std::size_t j) {
    return Vec2{box.lo.x + (static_cast<double>(i) + 0.5) * hx,
                box.lo.y + (static_cast<double>(j) + 0.5) * hy};
  };

  // Branch and bound over square blocks of cells: the distance function is
  // 1-Lipschitz, so a block cannot beat dist(centre) + half its diagonal.
  const std::size_t block = std::max<std::size_t>(1, n / 32);
  struct Block {
    std::size_t i0, j0;
    double bound;
  };
  std::vector<Block> blocks;
  const double slack = 1e-12 * box.diagonal();
  for (std::size_t i0 = 0; i0 < n; i0 += block) {
    for (std::size_t j0 = 0; j0 < n; j0 += block) {
      const std::size_t i1 = std::min(n, i0 + block) - 1;
      const std::size_t j1 = std::min(n, j0 + block) - 1;
      const Vec2 a = node(i0, j0);
      const Vec2 b = node(i1, j1);
      const Vec2 mid = (a + b) * 0.5;
      blocks.push_back({i0, j0, distance_to_curve(curve, mid) + 0.5 * norm(b - a) + slack});
    }
  }
  std::sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.i0 != b.i0 ? a.i0 < b.i0 : a.j0 < b.j0;
  });

  double best = -1.0;
  for (const Block& b : blocks) {
    if (b.bound <= best) break;
    for (std::size_t i = b.i0; i < std::min(n, b.i0 + block); ++i) {
      for (std::size_t j = b.j0; j < std::min(n, b.j0 + block); ++j) {
        const Vec2 p = node(i, j);
        if (!contains_point(curve, p)) continue;
        best = std::max(best, distance_to_curve(curve, p));
      }
    }
  }
  if (best < 0.0) throw CurveError("no interior grid point; increase the grid resolution");
  return best;
}

double detect_equality_case(const ClosedCurve& curve) {
  return curvature_roundness(compute_geometry(curve));
}

VerificationReport verify_curve(const ClosedCurve& input, const VerifyOptions& options) {
  VerificationReport report;
  const Tolerances& tol = options.tolerances;
  auto& out = report.checks;

  const bool embedded = is_embedded(input);
  if (!embedded || input.signed_area() <= 0.0) {
    CheckEntry e;
    e.name = "hypothesis";
    e.status = CheckStatus::fail;
    e.margin = input.signed_area();
    e.details = embedded ? "curve is clockwise or encloses no area"
                         : "curve is not embedded (self-intersecting)";
    out.push_back(std::move(e));
    report.curve_meta.n_points = input.size();
    report.curve_meta.length = input.length();
    report.finalize();
    return report;
  }

  std::optional<ClosedCurve> prepared;
  try {
    if (input.size() == options.n_points && input.spacing_variation() <= kDefaultSpacingTolerance)
      prepared = input;
    else
      prepared = resample_smooth(input, options.n_points, true);
  } catch (const std::exception& ex) {
    out.push_back(error_entry("resample", CheckKind::identity, ex));
    report.finalize();
    return report;
  }
  const ClosedCurve& curve = *prepared;

  CurveGeometry g;
  try {
    g = compute_geometry(curve);
  } catch (const std::exception& ex) {
    out.push_back(error_entry("geometry", CheckKind::identity, ex));
    report.finalize();
    return report;
  }
  const double k_max = max_curvature(g).value;
  report.curve_meta = {curve.size(), g.enclosed_area, g.total_length, k_max};

  const std::size_t n = curve.size();
  const double main_tol =
      tol.main_inequality + (tol.polygon_allowance ? polygon_main_allowance(n) : 0.0);
  const double length_tol =
      tol.star_length + (tol.polygon_allowance ? polygon_length_allowance(n) : 0.0);

  double main_margin = std::numeric_limits<double>::quiet_NaN();
  guarded(out, "main_inequality", CheckKind::inequality, [&] {
    main_margin = check_main_inequality(curve);
    out.push_back(make_entry("main_inequality", CheckKind::inequality, main_margin, main_tol,
                             "k_max*sqrt(A/pi) - 1"));
  });

  guarded(out, "isoperimetric", CheckKind::inequality, [&] {
    out.push_back(make_entry("isoperimetric", CheckKind::inequality, check_isoperimetric(curve),
                             tol.isoperimetric, "l^2 - 4*pi*A"));
  });

  guarded(out, "turning_number", CheckKind::identity, [&] {
    out.push_back(make_entry("turning_number", CheckKind::identity,
                             turning_integral(g) / (2.0 * kPi) - 1.0, tol.turning_number,
                             "(1/2pi) sum k ds - 1"));
  });

  guarded(out, "star_identity", CheckKind::identity, [&] {
    const double r = check_star_identity(curve.translated(-curve.centroid()));
    out.push_back(make_entry("star_identity", CheckKind::identity, r, tol.star_identity,
                             "|sum k (p.n) ds - l| / l about the centroid"));
  });

  guarded(out, "star_bound", CheckKind::inequality, [&] {
    const StarBoundReport sb = check_star_bound(curve, tol, options.star_search);
    const double l = sb.length;
    if (!sb.center) {
      const std::string why = "no star center found (best support " + format(sb.support_margin) + ")";
      out.push_back(not_applicable("star_bound_support", CheckKind::inequality, tol.star_support * l, why));
      out.push_back(not_applicable("star_bound_length", CheckKind::inequality, length_tol * l, why));
      out.push_back(not_applicable("star_bound_isoperimetric", CheckKind::inequality, tol.isoperimetric, why));
      return;
    }
    const std::string at = "center (" + format(sb.center->x) + ", " + format(sb.center->y) + ")";
    out.push_back(make_entry("star_bound_support", CheckKind::inequality, sb.support_margin,
                             tol.star_support * l, "min (p - c).n, " + at));
    out.push_back(make_entry("star_bound_length", CheckKind::inequality, sb.length_margin,
                             length_tol * l, "2*k_max*A - l"));
    out.push_back(make_entry("star_bound_isoperimetric", CheckKind::inequality,
                             sb.isoperimetric_margin, tol.isoperimetric, "l^2 - 4*pi*A"));
  });

  guarded(out, "inscribed_disk", CheckKind::inequality, [&] {
    const double r = inscribed_disk_radius(curve, options.grid_resolution);
    const double t = tol.inradius_cells * bounding_box(curve).diagonal() /
                     static_cast<double>(options.grid_resolution);
    out.push_back(make_entry("inscribed_disk", CheckKind::inequality, r - 1.0 / k_max, t,
                             "grid inradius " + format(r) + " - 1/k_max"));
  });

  guarded(out, "equality_case", CheckKind::inequality, [&] {
    const double roundness = detect_equality_case(curve);
    const std::string d = "curvature CV " + format(roundness);
    if (std::isnan(main_margin) || main_margin >= tol.equality_margin) {
      out.push_back(not_applicable("equality_case", CheckKind::inequality, 0.0,
                                   d + "; main margin not near zero"));
      return;
    }
    out.push_back(make_entry("equality_case", CheckKind::inequality,
                             tol.equality_roundness - roundness, 0.0,
                             d + " must be below " + format(tol.equality_roundness)));
  });

  report.finalize();
  return report;
}

VerificationReport verify_trajectory(const FlowTrajectory& traj, const Tolerances& tol) {
  VerificationReport report;
  auto& out = report.checks;
  const auto& s = traj.samples;
  report.curve_meta.n_points = traj.final_state.curve.size();
  if (!s.empty()) {
    report.curve_meta.area = s.front().area;
    report.curve_meta.length = s.front().length;
    report.curve_meta.k_max = s.front().k_max;
  }

  {
    CheckEntry e = make_entry("flow_completed", CheckKind::identity, 0.0, 0.0,
                              traj.failure.value_or("reached the area stop"));
    if (traj.failure || s.empty()) e.status = CheckStatus::fail;
    out.push_back(std::move(e));
  }
  if (s.size() < 2) {
    report.finalize();
    return report;
  }

  const double a0 = traj.final_state.initial_area;
  double area_dev = 0.0;
  double length_drop = std::numeric_limits<double>::infinity();
  double iso_rise = -std::numeric_limits<double>::infinity();
  double iso_min = std::numeric_limits<double>::infinity();
  double sample_min_k = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    area_dev = std::max(area_dev, std::abs(s[i].area - (a0 - 2.0 * kPi * s[i].t)) / a0);
    iso_min = std::min(iso_min, s[i].isoperimetric_ratio);
    sample_min_k = std::min(sample_min_k, s[i].rescaled_k_max);
    if (i > 0) {
      length_drop = std::min(length_drop, (s[i - 1].length - s[i].length) / s.front().length);
      iso_rise = std::max(iso_rise, s[i].isoperimetric_ratio - s[i - 1].isoperimetric_ratio);
    }
  }

  out.push_back(make_entry("area_law", CheckKind::identity, area_dev, tol.area_law,
                           "max |A(t) - (A(0) - 2*pi*t)| / A(0)"));
  {
    CheckEntry e = make_entry("length_decreasing", CheckKind::inequality, length_drop, 0.0,
                              "min relative length drop between samples");
    if (length_drop <= 0.0) e.status = CheckStatus::fail;
    out.push_back(std::move(e));
  }
  out.push_back(make_entry("isoperimetric_monotone", CheckKind::inequality, -iso_rise,
                           tol.isoperimetric_monotone, "-max increase of l^2/(4*pi*A)"));
  out.push_back(make_entry("isoperimetric_floor", CheckKind::inequality, iso_min - 1.0,
                           tol.isoperimetric_monotone, "min l^2/(4*pi*A) - 1"));
  const double sample_tol =
      tol.main_inequality +
      (tol.polygon_allowance ? polygon_main_allowance(report.curve_meta.n_points) : 0.0);
  out.push_back(make_entry("sample_main_inequality", CheckKind::inequality, sample_min_k - 1.0,
                           sample_tol, "min over samples of K_max - 1"));

  const BarrierReport barrier = barrier_monitor(traj, 1.0 - tol.rescaled_floor, tol.argmax_concavity);
  out.push_back(make_entry("rescaled_barrier", CheckKind::inequality,
                           barrier.min_rescaled_k_max - 1.0, tol.rescaled_floor,
                           "min K_max at t=" + format(s[barrier.min_sample].t)));
  out.push_back(make_entry("argmax_concavity", CheckKind::inequality,
                           -barrier.worst_argmax_concavity, tol.argmax_concavity,
                           "-max kss(argmax)/max|k|"));

  const double stop = s.back().t;
  if (traj.convexification_time) {
    const double tau = *traj.convexification_time;
    CheckEntry e = make_entry("convexification", CheckKind::inequality, stop - tau, 0.0,
                              "convex from t=" + format(tau) + " to stop t=" + format(stop));
    if (!(tau < stop)) e.status = CheckStatus::fail;
    out.push_back(std::move(e));
  } else {
    out.push_back(not_applicable("convexification", CheckKind::inequality, 0.0,
                                 "not convex at the final sample"));
  }

  report.finalize();
  return report;
}

}  // namespace curveflow
