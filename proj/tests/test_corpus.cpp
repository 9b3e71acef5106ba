#include <doctest.h>

#include <cmath>
#include <set>

#include "curveflow/corpus.hpp"
#include "curveflow/geometry.hpp"
#include "curveflow/star.hpp"
#include "curveflow/topology.hpp"
#include "oracles.hpp"

using namespace curveflow;
using doctest::Approx;

namespace {

std::vector<Vec2> as_vector(const ClosedCurve& c) { return {c.points().begin(), c.points().end()}; }

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("rng is mt19937_64 with 53-bit doubles") {
  // First output of std::mt19937_64 seeded with the default seed 5489.
  Rng rng(5489);
  CHECK(rng.next() == 14514284786278117030ULL);
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(u == b.uniform());
  }
  Rng c(1);
  std::set<int> seen;
  for (int i = 0; i < 500; ++i) {
    const int v = c.integer(-2, 3);
    CHECK(v >= -2);
    CHECK(v <= 3);
    seen.insert(v);
  }
  CHECK(seen.size() == 6);
}

TEST_CASE("kind names") {
  CHECK(parse_curve_kind("planar-fourier") == CurveKind::planar_fourier);
  CHECK(parse_curve_kind("radial_fourier") == CurveKind::radial_fourier);
  CHECK(to_string(CurveKind::ellipse) == "ellipse");
  CHECK_THROWS_AS(parse_curve_kind("spiral"), SpecError);
}

TEST_CASE("circle generator") {
  CurveSpec s;
  s.n_points = 512;
  const ClosedCurve c = generate(s);
  CHECK(c.size() == 512);
  double worst = 0.0;
  for (const Vec2& p : c.points()) worst = std::max(worst, std::abs(norm(p) - 1.0));
  CHECK(worst < 1e-12);
  CHECK(c.signed_area() > 0.0);
}

TEST_CASE("ellipse generator samples by arc length") {
  CurveSpec s;
  s.kind = CurveKind::ellipse;
  s.rotation = 0.4;
  s.center = {1.0, -2.0};
  const ClosedCurve c = generate(s);
  CHECK(c.spacing_variation() < 0.01);
  const double ca = std::cos(-0.4), sa = std::sin(-0.4);
  for (const Vec2& p : c.points()) {
    const Vec2 q = p - Vec2{1.0, -2.0};
    const double x = ca * q.x - sa * q.y, y = sa * q.x + ca * q.y;
    CHECK(std::abs(x * x / 4.0 + y * y - 1.0) < 1e-12);
  }
  CHECK(c.length() == Approx(oracle::ellipse_perimeter(2.0, 1.0)).epsilon(1e-4));
}

TEST_CASE("radial generator is star-shaped about the origin") {
  CurveSpec s;
  s.kind = CurveKind::radial_fourier;
  s.radial_terms = {{3, 0.3, 0.0}};
  const ClosedCurve c = generate(s);
  const CurveGeometry g = compute_geometry(c);
  const StarKernelResult r = find_star_center(c, g);
  CHECK(r.found);
  CHECK(r.min_support > 0.0);
  CHECK(min_support(c, g, {0.0, 0.0}) > 0.0);
  const oracle::Radial ref{1.0, {{3, 0.3, 0.0}}};
  CHECK(c.signed_area() == Approx(ref.area()).epsilon(1e-4));
}

TEST_CASE("spec validation names the violated constraint") {
  CurveSpec s;
  s.kind = CurveKind::radial_fourier;
  s.radial_terms = {{3, 0.6, 0.0}, {2, 0.0, 0.5}};
  try {
    s.validate();
    FAIL("expected SpecError");
  } catch (const SpecError& e) {
    CHECK(std::string(e.what()).find("sum |coeff| < r0") != std::string::npos);
  }
  CurveSpec c;
  c.radius = -1.0;
  CHECK_THROWS_AS(c.validate(), SpecError);
  CurveSpec p;
  p.kind = CurveKind::preset;
  p.preset = "donut";
  CHECK_THROWS_AS(p.validate(), SpecError);
  CurveSpec n;
  n.n_points = 4;
  CHECK_THROWS_AS(generate(n), SpecError);
}

TEST_CASE("planar Fourier generator is deterministic and embedded") {
  CurveSpec s;
  s.kind = CurveKind::planar_fourier;
  s.seed = 42;
  s.modes = 5;
  const ClosedCurve a = generate(s);
  const ClosedCurve b = generate(s);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  CHECK(is_embedded(a));
  CHECK(oracle::embedded_all_pairs(as_vector(a)));
  CHECK(a.signed_area() > 0.0);
  s.seed = 43;
  CHECK_FALSE(generate(s)[5] == a[5]);
}

TEST_CASE("rejection budget is reported") {
  CurveSpec s;
  s.kind = CurveKind::planar_fourier;
  s.amplitude = 50.0;
  s.max_attempts = 3;
  CHECK_THROWS_AS(generate(s), GenerationError);
}

TEST_CASE("presets") {
  for (const std::string& name : preset_names()) {
    CurveSpec s;
    s.kind = CurveKind::preset;
    s.preset = name;
    const ClosedCurve c = generate(s);
    CHECK(is_embedded(c));
    CHECK(c.signed_area() > 0.0);
    CHECK_FALSE(is_convex(compute_geometry(c), 1e-6));
  }
}

TEST_CASE("corpus sweep") {
  const auto a = corpus_sweep(100, 7);
  const auto b = corpus_sweep(100, 7);
  REQUIRE(a.size() == 100);
  int nonconvex = 0;
  std::set<std::string> families;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == i);
    REQUIRE(a[i].curve.size() == b[i].curve.size());
    for (std::size_t j = 0; j < a[i].curve.size(); ++j) REQUIRE(a[i].curve[j] == b[i].curve[j]);
    CHECK(is_embedded(a[i].curve));
    CHECK(a[i].curve.signed_area() > 0.0);
    if (!is_convex(compute_geometry(a[i].curve), 1e-6)) ++nonconvex;
    families.insert(a[i].family);
    if (a[i].family == "star") {
      const CurveGeometry g = compute_geometry(a[i].curve);
      CHECK(min_support(a[i].curve, g, {0.0, 0.0}) >= 0.0);
    }
  }
  CHECK(nonconvex >= 30);
  CHECK(families == std::set<std::string>{"convex", "star", "general"});

  const auto one = corpus_sweep(1, 3, CorpusMix::circle_only());
  REQUIRE(one.size() == 1);
  CHECK(one[0].family == "circle");
  CHECK(curvature_roundness(compute_geometry(one[0].curve)) < 1e-9);
  CHECK_THROWS_AS(corpus_sweep(0, 1), SpecError);
}

TEST_CASE("slots depend only on seed + slot") {
  const auto a = corpus_sweep(10, 100);
  const auto b = corpus_sweep(12, 100);
  for (std::size_t i = 0; i < 10; ++i) {
    if (a[i].family != b[i].family) continue;
    for (std::size_t j = 0; j < a[i].curve.size(); ++j) REQUIRE(a[i].curve[j] == b[i].curve[j]);
  }
}

}  // TEST_SUITE
