#include <doctest.h>

#include <cmath>

#include "curveflow/corpus.hpp"
#include "curveflow/flow.hpp"
#include "curveflow/topology.hpp"
#include "oracles.hpp"

using namespace curveflow;
using doctest::Approx;

namespace {

ClosedCurve circle(std::size_t n, double r = 1.0) { return ClosedCurve(oracle::regular_polygon(n, r)); }

ClosedCurve ellipse(std::size_t n) {
  CurveSpec s;
  s.kind = CurveKind::ellipse;
  s.n_points = n;
  return generate(s);
}

ClosedCurve preset(const std::string& name) {
  CurveSpec s;
  s.kind = CurveKind::preset;
  s.preset = name;
  return generate(s);
}

FlowConfig config(std::size_t n) {
  FlowConfig c;
  c.n_points = n;
  return c;
}

}  // namespace

TEST_SUITE("flow") {

TEST_CASE("config validation") {
  FlowConfig c;
  CHECK_NOTHROW(c.validate());
  c.dt_safety = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.dt_safety = 1.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.stop_area_fraction = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.n_points = 4;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("stable_dt formula") {
  const FlowState s = make_initial_state(circle(256), config(256));
  FlowConfig half = config(256);
  half.dt_safety = 0.5;
  const double ds = 2.0 * std::sin(oracle::pi / 256);
  CHECK(stable_dt(s, half) == Approx(0.5 * ds * ds / 2.0).epsilon(1e-12));
  CHECK(stable_dt(s, half) == Approx(0.5 * std::pow(2.0 * oracle::pi / 256, 2) / 2.0).epsilon(1e-4));
  FlowConfig full = config(256);
  full.dt_safety = 1.0;
  CHECK(stable_dt(s, full) == 2.0 * stable_dt(s, half));

  // A tiny circle is in the ds / max|k| regime.
  const FlowState small = make_initial_state(circle(256, 1e-3), config(256));
  const double dss = small.geom.min_edge_length;
  CHECK(stable_dt(small, full) == Approx(std::min(dss * dss, dss / max_abs_curvature(small.geom)) / 2.0));
}

TEST_CASE("one step on the circle follows r = sqrt(1 - 2t)") {
  const FlowConfig cfg = config(512);
  const FlowState s = make_initial_state(circle(512), cfg);
  const double dt = stable_dt(s, cfg);
  const FlowState next = step(s, dt, cfg);
  CHECK(next.t == dt);
  CHECK(next.steps == 1);
  // Radius of the Menger circle through the vertices.
  const double r = 1.0 / next.geom.curvatures[0];
  CHECK(r == Approx(std::sqrt(1.0 - 2.0 * dt)).epsilon(1e-9));
  CHECK_THROWS_AS(step(s, 0.0, cfg), std::invalid_argument);
  CHECK_THROWS_AS(step(s, 10.0 * dt / cfg.dt_safety, cfg), std::invalid_argument);
}

TEST_CASE("zero-curvature vertex is unmoved and convexity survives a step") {
  std::vector<Vec2> pts;
  for (int i = 0; i < 4; ++i) pts.push_back({static_cast<double>(i), 0});
  for (int i = 0; i < 4; ++i) pts.push_back({4, static_cast<double>(i)});
  for (int i = 0; i < 4; ++i) pts.push_back({4.0 - i, 4});
  for (int i = 0; i < 4; ++i) pts.push_back({0, 4.0 - i});
  FlowConfig cfg = config(16);
  cfg.resample_every = 0;
  const FlowState s = make_initial_state(ClosedCurve(pts), cfg);
  const FlowState next = step(s, 1e-3, cfg);
  CHECK(next.curve[1] == s.curve[1]);
  CHECK(next.curve[2] == s.curve[2]);
  CHECK(distance(next.curve[0], s.curve[0]) > 0.0);

  const FlowConfig ec = config(256);
  const FlowState e = make_initial_state(ellipse(256), ec);
  const FlowState en = step(e, stable_dt(e, ec), ec);
  CHECK(is_convex(en.geom, 0.0));
}

TEST_CASE("circle run: stop time, radius law, samples") {
  const FlowTrajectory t = run(circle(256), config(256));
  REQUIRE(t.completed());
  CHECK(t.samples.back().t == Approx(0.45).epsilon(0.01));
  for (std::size_t i = 0; i < t.samples.size(); ++i) {
    const FlowSample& s = t.samples[i];
    const double r = std::sqrt(s.area / oracle::pi);
    CHECK(std::abs(r / std::sqrt(1.0 - 2.0 * s.t) - 1.0) < 0.01);
    CHECK(s.rescaled_k_max == Approx(1.0).epsilon(1e-3));
    if (i > 0) {
      CHECK(s.t > t.samples[i - 1].t);
      CHECK(s.area < t.samples[i - 1].area);
    }
  }
  CHECK(t.convexification_time.has_value());
  CHECK(*t.convexification_time == 0.0);
  CHECK(t.max_resample_area_change <= 1e-8);
  CHECK(t.resample_events > 0);
  CHECK(extrapolated_extinction_time(t) == Approx(0.5).epsilon(0.01));
}

TEST_CASE("ellipse run: monotone quantities and area law") {
  FlowConfig cfg = config(128);
  const FlowTrajectory t = run(ellipse(128), cfg);
  REQUIRE(t.completed());
  const double a0 = t.final_state.initial_area;
  CHECK(a0 == Approx(2.0 * oracle::pi).epsilon(1e-3));
  double dev = 0.0;
  for (std::size_t i = 1; i < t.samples.size(); ++i) {
    const FlowSample& p = t.samples[i - 1];
    const FlowSample& s = t.samples[i];
    CHECK(s.length < p.length);
    CHECK(s.isoperimetric_ratio <= p.isoperimetric_ratio + 1e-6);
    CHECK(s.isoperimetric_ratio >= 1.0 - 1e-6);
    dev = std::max(dev, std::abs(s.area - (a0 - 2.0 * oracle::pi * s.t)) / a0);
  }
  CHECK(dev < 1e-3);
  CHECK(t.max_resample_area_change <= 1e-8);
  // Default sampling is T/100.
  CHECK(t.samples[1].t == Approx(t.final_state.extinction_time() / 100.0).epsilon(1e-12));
}

TEST_CASE("sampling and snapshot intervals") {
  FlowConfig cfg = config(128);
  cfg.sample_interval = 0.01;
  cfg.snapshot_interval = 0.05;
  const FlowTrajectory t = run(circle(128), cfg);
  REQUIRE(t.completed());
  for (std::size_t i = 0; i + 1 < t.samples.size(); ++i)
    CHECK(t.samples[i].t == Approx(0.01 * i).epsilon(1e-12));
  const double elapsed = t.samples.back().t;
  CHECK(t.snapshots.size() == static_cast<std::size_t>(std::ceil(elapsed / 0.05)));
  CHECK(t.snapshots.front().t == 0.0);
}

TEST_CASE("failures keep the partial trajectory") {
  FlowConfig cfg = config(128);
  cfg.max_steps = 200;
  const FlowTrajectory t = run(circle(128), cfg);
  CHECK_FALSE(t.completed());
  CHECK(t.failure->find("step budget") != std::string::npos);
  CHECK(!t.samples.empty());
  CHECK_THROWS_AS(run(ClosedCurve(oracle::figure_eight(200)), config(128)), CurveError);
}

TEST_CASE("non-convex presets convexify before the stop") {
  for (const char* name : {"bean", "kidney"}) {
    CAPTURE(name);
    const FlowTrajectory t = run(preset(name), config(256));
    REQUIRE(t.completed());
    REQUIRE(t.convexification_time.has_value());
    CHECK(*t.convexification_time > 0.0);
    CHECK(*t.convexification_time < t.samples.back().t);
    CHECK(*t.convexification_time < t.final_state.extinction_time());
    for (const FlowSample& s : t.samples)
      if (s.t >= *t.convexification_time) CHECK(s.convex);
  }
}

TEST_CASE("rescaled curve") {
  const ClosedCurve e = normalize_area(ellipse(256), oracle::pi);
  const FlowConfig cfg = config(256);
  FlowState s = make_initial_state(e, cfg);
  const ClosedCurve r0 = rescaled_curve(s);
  for (std::size_t i = 0; i < r0.size(); ++i) CHECK(distance(r0[i], s.curve[i]) < 1e-12);
  const double k0 = max_curvature(s.geom).value;
  for (int i = 0; i < 200; ++i) s = step(s, stable_dt(s, cfg), cfg);
  const ClosedCurve r = rescaled_curve(s);
  CHECK(r.signed_area() == Approx(oracle::pi).epsilon(1e-12));
  CHECK(max_curvature(compute_geometry(r)).value < k0);

  const FlowState u = make_initial_state(circle(256, 2.0), cfg);
  CHECK_THROWS_AS(rescaled_curve(u), CurveError);
  FlowState c = make_initial_state(normalize_area(circle(256), oracle::pi), cfg);
  for (int i = 0; i < 500; ++i) c = step(c, stable_dt(c, cfg), cfg);
  CHECK(max_curvature(compute_geometry(rescaled_curve(c))).value == Approx(1.0).epsilon(1e-4));
}

TEST_CASE("curvature PDE residual") {
  FlowConfig cfg = config(256);
  cfg.resample_every = 0;
  const FlowState c = make_initial_state(circle(256), cfg);
  // Circle: first order in dt.
  const double dt = stable_dt(c, cfg);
  auto rms = [](const std::vector<double>& r) {
    double s = 0.0;
    for (double x : r) s += x * x;
    return std::sqrt(s / r.size());
  };
  const double r1 = rms(pde_residual(c, step(c, dt, cfg)));
  const double r2 = rms(pde_residual(c, step(c, dt / 2.0, cfg)));
  CHECK(r1 < 1e-2);
  CHECK(r2 / r1 == Approx(0.5).epsilon(0.05));

  FlowConfig resampling = config(256);
  resampling.resample_every = 1;
  CHECK_THROWS_AS(pde_residual(c, step(c, dt, resampling)), CurveError);
  CHECK_THROWS_AS(pde_residual(c, c), CurveError);

  double prev = 1e9;
  for (std::size_t n : {128u, 256u, 512u}) {
    const FlowConfig ec = config(n);
    const double r = pde_probe_rms(make_initial_state(ellipse(n), ec), ec);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("barrier monitor") {
  FlowConfig cfg = config(256);
  const FlowTrajectory c = run(normalize_area(circle(256), oracle::pi), cfg);
  const BarrierReport bc = barrier_monitor(c, 0.99);
  CHECK_FALSE(bc.barrier_crossed);
  CHECK(bc.min_rescaled_k_max == Approx(1.0).epsilon(1e-4));

  const FlowTrajectory e = run(normalize_area(ellipse(256), oracle::pi), cfg);
  const BarrierReport be = barrier_monitor(e, 0.99);
  CHECK_FALSE(be.barrier_crossed);
  CHECK(be.min_rescaled_k_max >= 1.0 - 5e-3);
  CHECK(be.concavity_holds);
  CHECK(be.worst_argmax_concavity <= 1e-6);
  CHECK_THROWS_AS(barrier_monitor(e, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(barrier_monitor(e, 0.0), std::invalid_argument);
}

}  // TEST_SUITE
