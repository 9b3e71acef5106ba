#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "curveflow/io.hpp"
#include "oracles.hpp"

using namespace curveflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("curveflow_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("curve JSON round trip is exact") {
  CurveSpec s;
  s.kind = CurveKind::planar_fourier;
  s.seed = 9;
  const ClosedCurve c = generate(s);
  const fs::path dir = scratch_dir("roundtrip");
  save_curve(dir / "c.json", c);
  const LoadedCurve back = load_curve(dir / "c.json");
  CHECK_FALSE(back.reversed);
  REQUIRE(back.curve.size() == c.size());
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(back.curve[i] == c[i]);
}

TEST_CASE("clockwise input is reversed with a flag") {
  const ClosedCurve cw = ClosedCurve(oracle::regular_polygon(32, 1.0)).reversed();
  const LoadedCurve l = curve_from_json(curve_to_json(cw));
  CHECK(l.reversed);
  CHECK(l.curve.signed_area() > 0.0);
}

TEST_CASE("malformed curve files") {
  CHECK_THROWS_AS(curve_from_json(Json::parse(R"({"pts": []})")), CurveError);
  CHECK_THROWS_AS(curve_from_json(Json::parse(R"({"points": [[0,0],[1]]})")), CurveError);
  CHECK_THROWS_AS(curve_from_json(Json::parse(R"({"points": [[0,0],[1,0],[1,1]]})")), CurveError);
  const fs::path dir = scratch_dir("malformed");
  write_text(dir / "bad.json", "{ not json");
  CHECK_THROWS_AS(load_curve(dir / "bad.json"), CurveError);
  CHECK_THROWS_AS(load_curve(dir / "missing.json"), IoError);
}

TEST_CASE("spec JSON round trip") {
  CurveSpec s;
  s.kind = CurveKind::radial_fourier;
  s.base_radius = 1.5;
  s.radial_terms = {{3, 0.2, -0.1}, {5, 0.0, 0.05}};
  s.n_points = 300;
  const CurveSpec t = spec_from_json(spec_to_json(s));
  CHECK(t.kind == s.kind);
  CHECK(t.base_radius == s.base_radius);
  CHECK(t.n_points == 300);
  REQUIRE(t.radial_terms.size() == 2);
  CHECK(t.radial_terms[0].sin_coef == -0.1);
  CHECK(t.radial_terms[1].mode == 5);

  CurveSpec p;
  p.kind = CurveKind::planar_fourier;
  p.seed = 18446744073709551557ULL;
  CHECK(spec_from_json(spec_to_json(p)).seed == p.seed);

  CHECK_THROWS_AS(spec_from_json(Json::parse(R"({"radius": 1})")), SpecError);
  CHECK_THROWS_AS(spec_from_json(Json::parse(R"({"kind": "circle", "radius": "big"})")), SpecError);
  CHECK_THROWS_AS(spec_from_json(Json::parse(R"({"kind": "hexagon"})")), SpecError);
}

TEST_CASE("report JSON schema") {
  VerificationReport r;
  r.curve_meta = {512, 3.14, 6.28, 1.0};
  r.checks.push_back(make_entry("main_inequality", CheckKind::inequality, 0.5, 1e-6, "x"));
  CheckEntry na;
  na.name = "star_bound_length";
  na.status = CheckStatus::not_applicable;
  r.checks.push_back(na);
  CheckEntry err;
  err.name = "inscribed_disk";
  err.status = CheckStatus::error;
  err.margin = std::numeric_limits<double>::quiet_NaN();
  r.checks.push_back(err);
  r.finalize();
  const Json j = report_to_json(r);
  CHECK(j["curve_meta"]["n_points"] == 512);
  CHECK(j["checks"].size() == 3);
  for (const auto& c : j["checks"]) {
    for (const char* key : {"name", "pass", "margin", "tolerance", "details"}) CHECK(c.contains(key));
  }
  CHECK(j["checks"][1]["pass"] == true);
  CHECK(j["checks"][1]["status"] == "not_applicable");
  CHECK(j["checks"][2]["pass"] == false);
  CHECK(j["checks"][2]["margin"].is_null());
  CHECK(j["overall_pass"] == false);
}

TEST_CASE("trajectory CSV") {
  FlowConfig cfg;
  cfg.n_points = 64;
  const FlowTrajectory t = run(ClosedCurve(oracle::regular_polygon(64, 1.0)), cfg);
  std::ostringstream os;
  write_trajectory_csv(os, t);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,area,length,k_max,K_max,isoper_ratio,convex");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 6);
  }
  CHECK(rows == t.samples.size());
}

TEST_CASE("SVG snapshots use a fixed viewport") {
  FlowConfig cfg;
  cfg.n_points = 64;
  cfg.snapshot_interval = 0.1;
  const FlowTrajectory t = run(ClosedCurve(oracle::regular_polygon(64, 1.0)), cfg);
  const fs::path dir = scratch_dir("svg");
  const BoundingBox box = bounding_box(t.snapshots.front().curve);
  const auto files = write_snapshots(dir / "snaps", t, box);
  CHECK(files.size() == t.snapshots.size());
  std::string first_header, last_header;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::string header;
    std::getline(in, header);
    if (first_header.empty()) first_header = header;
    last_header = header;
    CHECK(header.rfind("<svg", 0) == 0);
  }
  CHECK(first_header == last_header);
}

TEST_CASE("file hash is FNV-1a") {
  const fs::path dir = scratch_dir("hash");
  write_text(dir / "empty", "");
  write_text(dir / "a", "a");
  CHECK(file_hash(dir / "empty") == "cbf29ce484222325");
  CHECK(file_hash(dir / "a") == "af63dc4c8601ec8c");
}

TEST_CASE("manifest JSON") {
  RunManifest m;
  m.command = "gen";
  m.config = {{"kind", "circle"}};
  m.outputs = {"c.json"};
  m.input_hashes["spec.json"] = "0123456789abcdef";
  const Json j = manifest_to_json(m);
  for (const char* key : {"command", "config", "version", "input_hashes", "outputs", "duration_seconds"})
    CHECK(j.contains(key));
  CHECK(j["input_hashes"]["spec.json"] == "0123456789abcdef");
}

}  // TEST_SUITE
