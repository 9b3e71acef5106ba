#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "curveflow/geometry.hpp"

namespace curveflow {

/// Integration settings for the curve shortening flow dC/dt = -k n.
struct FlowConfig {
  std::size_t n_points = 512;
  double dt_safety = 0.25;            ///< in (0, 1]
  std::size_t resample_every = 10;    ///< steps between resampling events
  double sample_interval = 0.0;       ///< flow time between samples; <= 0 means T/100
  double stop_area_fraction = 0.1;    ///< in (0, 1)
  double snapshot_interval = 0.0;     ///< <= 0 disables curve snapshots
  bool probe_pde = false;             ///< record the curvature-PDE residual at each sample
  std::size_t max_steps = 20'000'000;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// C(., t) together with its geometry, elapsed time t and A(0).
struct FlowState {
  ClosedCurve curve;
  CurveGeometry geom;
  double t = 0.0;
  double initial_area = 0.0;
  std::size_t steps = 0;
  /// Incremented by every resampling event; vertex correspondence between
  /// two states only holds when their epochs match.
  std::size_t resample_epoch = 0;

  double extinction_time() const;
};

struct FlowSample {
  double t = 0.0;
  double area = 0.0;
  double length = 0.0;
  double k_max = 0.0;
  std::size_t k_max_index = 0;
  /// Curvature maximum of the curve rescaled to area pi: k_max sqrt(A / pi).
  double rescaled_k_max = 0.0;
  double isoperimetric_ratio = 0.0;  ///< l^2 / (4 pi A)
  bool convex = false;
  double max_abs_k = 0.0;
  /// Discrete d^2k/ds^2 at the argmax vertex.
  double kss_at_argmax = 0.0;
  /// sqrt(A(t)/A_lin(t)) - 1 with A_lin = A(0) - 2 pi t: measured versus
  /// theoretical rescaling factor.
  double rescale_drift = 0.0;
  /// RMS curvature-PDE residual from a one-step probe; NaN when not probed.
  double pde_rms = 0.0;
  std::size_t resample_epoch = 0;
};

struct CurveSnapshot {
  double t = 0.0;
  ClosedCurve curve;
};

struct FlowTrajectory {
  std::vector<FlowSample> samples;
  FlowState final_state;
  std::optional<double> convexification_time;
  std::vector<CurveSnapshot> snapshots;
  /// Set when integration aborted (lost embeddedness, non-finite state).
  std::optional<std::string> failure;
  std::size_t resample_events = 0;
  /// Largest relative area change caused by a single resampling event.
  double max_resample_area_change = 0.0;

  bool completed() const { return !failure.has_value(); }
};

/// Builds the initial state; the curve is resampled to config.n_points unless
/// it already has that many uniformly spaced points.
FlowState make_initial_state(const ClosedCurve& curve, const FlowConfig& config);

/// dt = dt_safety * min(ds^2, ds / max|k|) / 2 with ds the shortest edge.
double stable_dt(const FlowState& state, const FlowConfig& config);

/// One explicit Euler step: every vertex moves by -k_i n_i dt. The curve is
/// resampled every `resample_every` steps, or earlier when the spacing
/// variation would exceed the geometry tolerance.
FlowState step(const FlowState& state, double dt, const FlowConfig& config);

/// Integrates until A(t) <= stop_area_fraction * A(0), sampling diagnostics
/// every sample_interval. Embeddedness is checked at sample instants; a
/// failure stops the run and is reported in `failure` with the partial
/// trajectory kept. Throws CurveError if the initial curve is not embedded or
/// has non-positive area.
FlowTrajectory run(const ClosedCurve& initial, const FlowConfig& config);

/// Extinction time from a least-squares line through the sampled (t, A(t)):
/// the zero of the fitted line. Throws CurveError with fewer than two samples.
double extrapolated_extinction_time(const FlowTrajectory& trajectory);

/// The state's curve scaled about its centroid to enclose area pi exactly
/// (measured area, not the theoretical factor). Requires A(0) = pi.
ClosedCurve rescaled_curve(const FlowState& state);

/// r_i = (k_i(later) - k_i(earlier)) / dt - (d^2k/ds^2)_i - k_i^3 evaluated at
/// the earlier state. Throws CurveError when the states straddle a
/// resampling event or are not ordered in time.
std::vector<double> pde_residual(const FlowState& earlier, const FlowState& later);

/// Takes one stable step from `state` without resampling and returns the
/// RMS of pde_residual over the pair.
double pde_probe_rms(const FlowState& state, const FlowConfig& config);

struct BarrierReport {
  double barrier = 0.0;
  /// K_max < M at some sample.
  bool barrier_crossed = false;
  double min_rescaled_k_max = 0.0;
  std::size_t min_sample = 0;
  /// Largest kss_at_argmax / max|k| over the samples.
  double worst_argmax_concavity = 0.0;
  double concavity_tolerance = 1e-6;
  bool concavity_holds = true;
};

/// Rescaled-flow barrier diagnostics for a trajectory: whether the rescaled
/// curvature maximum ever dropped below M, and whether the discrete second
/// arc derivative at each sample's argmax is <= tol * max|k|.
BarrierReport barrier_monitor(const FlowTrajectory& trajectory, double barrier,
                              double concavity_tolerance = 1e-6);

}  // namespace curveflow
