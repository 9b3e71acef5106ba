#include "curveflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "curveflow/resample.hpp"
#include "curveflow/topology.hpp"

namespace curveflow {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Convexity threshold relative to max|k|, also used for tau.
constexpr double kConvexRelativeTol = 1e-6;

std::vector<Vec2> moved_points(const FlowState& state, double dt) {
  std::vector<Vec2> pts(state.curve.points().begin(), state.curve.points().end());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pts[i] -= (dt * state.geom.curvatures[i]) * state.geom.outer_normals[i];
  }
  return pts;
}

// One Euler step applied in place; returns true when a resampling event
// happened, with its relative area change in `resample_area_change`.
bool advance(FlowState& state, double dt, const FlowConfig& config,
             double& resample_area_change) {
  std::vector<Vec2> pts = std::move(state.curve).take_points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pts[i] -= (dt * state.geom.curvatures[i]) * state.geom.outer_normals[i];
  }
  state.curve = ClosedCurve(std::move(pts));
  state.t += dt;
  ++state.steps;
  compute_geometry(state.curve, state.geom, std::numeric_limits<double>::infinity());

  resample_area_change = 0.0;
  const CurveGeometry& g = state.geom;
  const double variation = (g.max_edge_length - g.min_edge_length) *
                           static_cast<double>(g.size()) / g.total_length;
  const bool scheduled = config.resample_every > 0 && state.steps % config.resample_every == 0;
  if (!scheduled && variation <= kDefaultSpacingTolerance) return false;

  const double before = g.enclosed_area;
  state.curve = resample_smooth(state.curve, config.n_points, /*preserve_area=*/true);
  compute_geometry(state.curve, state.geom);
  resample_area_change = std::abs(state.geom.enclosed_area - before) / std::abs(before);
  ++state.resample_epoch;
  return true;
}

FlowSample make_sample(const FlowState& state, const FlowConfig& config) {
  const CurveGeometry& g = state.geom;
  FlowSample s;
  s.t = state.t;
  s.area = g.enclosed_area;
  s.length = g.total_length;
  const CurvatureExtremum mk = max_curvature(g);
  s.k_max = mk.value;
  s.k_max_index = mk.index;
  s.rescaled_k_max = mk.value * std::sqrt(s.area / kPi);
  s.isoperimetric_ratio = s.length * s.length / (4.0 * kPi * s.area);
  s.max_abs_k = max_abs_curvature(g);
  s.convex = is_convex(g, kConvexRelativeTol * s.max_abs_k);
  s.kss_at_argmax = curvature_second_derivative_at(g, mk.index);
  const double linear_area = state.initial_area - 2.0 * kPi * state.t;
  s.rescale_drift = linear_area > 0.0 ? std::sqrt(s.area / linear_area) - 1.0 : kNaN;
  s.pde_rms = config.probe_pde ? pde_probe_rms(state, config) : kNaN;
  s.resample_epoch = state.resample_epoch;
  return s;
}

}  // namespace

void FlowConfig::validate() const {
  if (n_points < ClosedCurve::kMinPoints) {
    throw std::invalid_argument("n_points must be >= 8");
  }
  if (!(dt_safety > 0.0 && dt_safety <= 1.0)) {
    throw std::invalid_argument("dt_safety must lie in (0, 1]");
  }
  if (!(stop_area_fraction > 0.0 && stop_area_fraction < 1.0)) {
    throw std::invalid_argument("stop_area_fraction must lie in (0, 1)");
  }
  if (!std::isfinite(sample_interval) || !std::isfinite(snapshot_interval)) {
    throw std::invalid_argument("sample_interval and snapshot_interval must be finite");
  }
}

double FlowState::extinction_time() const { return initial_area / (2.0 * kPi); }

FlowState make_initial_state(const ClosedCurve& curve, const FlowConfig& config) {
  const bool keep = curve.size() == config.n_points &&
                    curve.spacing_variation() <= kDefaultSpacingTolerance;
  ClosedCurve start = keep ? curve : resample_smooth(curve, config.n_points);
  const double area = start.signed_area();
  if (!(area > 0.0)) {
    throw CurveError("flow: initial curve must be counterclockwise with positive area");
  }
  CurveGeometry geom = compute_geometry(start);
  return FlowState{std::move(start), std::move(geom), 0.0, area, 0, 0};
}

double stable_dt(const FlowState& state, const FlowConfig& config) {
  const double ds = state.geom.min_edge_length;
  const double kmax = max_abs_curvature(state.geom);
  const double limit = kmax > 0.0 ? std::min(ds * ds, ds / kmax) : ds * ds;
  return config.dt_safety * limit / 2.0;
}

FlowState step(const FlowState& state, double dt, const FlowConfig& config) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  const double limit = stable_dt(state, FlowConfig{.dt_safety = 1.0});
  if (dt > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "step: dt " << dt << " exceeds the explicit stability limit " << limit;
    throw std::invalid_argument(msg.str());
  }
  FlowState next = state;
  double ignored = 0.0;
  advance(next, dt, config, ignored);
  return next;
}

FlowTrajectory run(const ClosedCurve& initial, const FlowConfig& config) {
  config.validate();
  if (!is_embedded(initial)) throw CurveError("flow: initial curve is not embedded");

  FlowState state = make_initial_state(initial, config);
  const double a0 = state.initial_area;
  const double interval =
      config.sample_interval > 0.0 ? config.sample_interval : state.extinction_time() / 100.0;
  const double snap = config.snapshot_interval;
  const double inf = std::numeric_limits<double>::infinity();

  FlowTrajectory traj{{}, state, std::nullopt, {}, std::nullopt, 0, 0.0};
  traj.samples.push_back(make_sample(state, config));
  std::size_t sample_index = 1;
  double next_sample = interval;
  std::size_t snap_index = 0;
  double next_snap = inf;
  if (snap > 0.0) {
    traj.snapshots.push_back({0.0, state.curve});
    snap_index = 1;
    next_snap = snap;
  }

  auto fail = [&](const std::string& why) {
    std::ostringstream msg;
    msg << why << " at t=" << state.t << " after " << state.steps << " steps";
    traj.failure = msg.str();
  };

  while (true) {
    if (state.steps >= config.max_steps) {
      fail("step budget exhausted");
      break;
    }
    const double event = std::min(next_sample, next_snap);
    double dt = stable_dt(state, config);
    const bool hits_event = state.t + dt >= event;
    if (hits_event) dt = event - state.t;

    if (dt > 0.0) {
      double area_change = 0.0;
      if (advance(state, dt, config, area_change)) {
        ++traj.resample_events;
        traj.max_resample_area_change = std::max(traj.max_resample_area_change, area_change);
      }
    }
    if (hits_event) state.t = event;

    const double area = state.geom.enclosed_area;
    if (!std::isfinite(area) || !(area > 0.0)) {
      fail("non-positive or non-finite area");
      break;
    }

    const bool stop = area <= config.stop_area_fraction * a0;
    const bool sample_due = state.t >= next_sample;
    if (stop || sample_due) {
      if (!is_embedded(state.curve)) {
        fail("embeddedness lost");
        break;
      }
      if (state.t > traj.samples.back().t) traj.samples.push_back(make_sample(state, config));
      if (sample_due) next_sample = interval * static_cast<double>(++sample_index);
    }
    if (state.t >= next_snap) {
      if (!stop) traj.snapshots.push_back({state.t, state.curve});
      next_snap = snap * static_cast<double>(++snap_index);
    }
    if (stop) break;
  }

  traj.final_state = state;
  if (!traj.samples.empty() && traj.samples.back().convex) {
    std::size_t first = traj.samples.size() - 1;
    while (first > 0 && traj.samples[first - 1].convex) --first;
    traj.convexification_time = traj.samples[first].t;
  }
  return traj;
}

double extrapolated_extinction_time(const FlowTrajectory& trajectory) {
  const auto& s = trajectory.samples;
  if (s.size() < 2) throw CurveError("extinction extrapolation needs at least two samples");
  double mt = 0.0, ma = 0.0;
  for (const FlowSample& x : s) {
    mt += x.t;
    ma += x.area;
  }
  mt /= static_cast<double>(s.size());
  ma /= static_cast<double>(s.size());
  double stt = 0.0, sta = 0.0;
  for (const FlowSample& x : s) {
    stt += (x.t - mt) * (x.t - mt);
    sta += (x.t - mt) * (x.area - ma);
  }
  const double slope = sta / stt;
  if (!(slope < 0.0)) throw CurveError("sampled area is not decreasing");
  return mt - ma / slope;
}

ClosedCurve rescaled_curve(const FlowState& state) {
  if (std::abs(state.initial_area - kPi) > 1e-6 * kPi) {
    throw CurveError("rescaled_curve: initial curve must be normalized to area pi");
  }
  const double area = state.curve.signed_area();
  if (!(area > 0.0)) throw CurveError("rescaled_curve: measured area is not positive");
  return state.curve.scaled(std::sqrt(kPi / area), state.curve.centroid());
}

std::vector<double> pde_residual(const FlowState& earlier, const FlowState& later) {
  if (earlier.resample_epoch != later.resample_epoch) {
    throw CurveError("pde_residual: states straddle a resampling event");
  }
  if (earlier.curve.size() != later.curve.size()) {
    throw CurveError("pde_residual: vertex counts differ");
  }
  const double dt = later.t - earlier.t;
  if (!(dt > 0.0)) throw CurveError("pde_residual: states must be strictly ordered in time");

  const std::vector<double> kss = curvature_second_derivative(earlier.geom);
  std::vector<double> r(earlier.geom.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double k = earlier.geom.curvatures[i];
    r[i] = (later.geom.curvatures[i] - k) / dt - kss[i] - k * k * k;
  }
  return r;
}

double pde_probe_rms(const FlowState& state, const FlowConfig& config) {
  const double dt = stable_dt(state, config);
  ClosedCurve moved(moved_points(state, dt));
  CurveGeometry geom = compute_geometry(moved, 10.0 * kDefaultSpacingTolerance);
  const FlowState later{std::move(moved), std::move(geom), state.t + dt, state.initial_area,
                        state.steps + 1, state.resample_epoch};
  const std::vector<double> r = pde_residual(state, later);
  double sum = 0.0;
  for (double v : r) sum += v * v;
  return std::sqrt(sum / static_cast<double>(r.size()));
}

BarrierReport barrier_monitor(const FlowTrajectory& trajectory, double barrier,
                              double concavity_tolerance) {
  if (!(barrier > 0.0 && barrier < 1.0)) {
    throw std::invalid_argument("barrier_monitor: M must lie in (0, 1)");
  }
  BarrierReport report;
  report.barrier = barrier;
  report.concavity_tolerance = concavity_tolerance;
  report.min_rescaled_k_max = std::numeric_limits<double>::infinity();
  report.worst_argmax_concavity = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < trajectory.samples.size(); ++j) {
    const FlowSample& s = trajectory.samples[j];
    if (s.rescaled_k_max < report.min_rescaled_k_max) {
      report.min_rescaled_k_max = s.rescaled_k_max;
      report.min_sample = j;
    }
    if (s.rescaled_k_max < barrier) report.barrier_crossed = true;
    const double ratio = s.kss_at_argmax / s.max_abs_k;
    report.worst_argmax_concavity = std::max(report.worst_argmax_concavity, ratio);
    if (s.kss_at_argmax > concavity_tolerance * s.max_abs_k) report.concavity_holds = false;
  }
  return report;
}

}  // namespace curveflow
