// curveflow: generate curves, run curve shortening flows, verify curvature
// inequalities.
//
// Exit codes: 0 all checks pass, 1 check failure or runtime error,
// 2 invalid input or configuration.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "curveflow/corpus.hpp"
#include "curveflow/flow.hpp"
#include "curveflow/io.hpp"
#include "curveflow/verifier.hpp"

namespace fs = std::filesystem;
using namespace curveflow;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInvalid = 2;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

fs::path manifest_path_for(const fs::path& output) {
  return fs::path(output.string() + ".manifest.json");
}

void finish_manifest(RunManifest& m, const fs::path& path, const Stopwatch& clock) {
  m.version = CURVEFLOW_VERSION;
  m.duration_seconds = clock.seconds();
  write_json(path, manifest_to_json(m));
}

std::size_t worker_count(std::size_t jobs) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CURVEFLOW_WORKERS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || v == 0)
      throw std::invalid_argument("CURVEFLOW_WORKERS must be a positive integer");
    n = v;
  }
  return std::min(n, jobs);
}

// Runs fn(i) for i in [0, count) on a pool of threads. Results are stored by
// index, so output order never depends on scheduling.
template <class Fn>
void parallel_for(std::size_t count, Fn fn) {
  const std::size_t workers = worker_count(count);
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
}

FourierTerm parse_term(const std::string& text) {
  std::istringstream is(text);
  FourierTerm t;
  char c1 = 0, c2 = 0;
  if (!(is >> t.mode >> c1 >> t.cos_coef) || c1 != ':')
    throw SpecError("--term expects MODE:COS[:SIN], got '" + text + "'");
  if (is >> c2) {
    if (c2 != ':' || !(is >> t.sin_coef)) throw SpecError("--term expects MODE:COS[:SIN], got '" + text + "'");
  }
  std::string rest;
  if (is >> rest) throw SpecError("--term expects MODE:COS[:SIN], got '" + text + "'");
  return t;
}

// ---- gen ------------------------------------------------------------------

struct GenArgs {
  std::string spec_file;
  std::string kind = "circle";
  double radius = 1.0;
  double a = 2.0;
  double b = 1.0;
  double rotation = 0.0;
  double cx = 0.0, cy = 0.0;
  double r0 = 1.0;
  std::vector<std::string> terms;
  std::uint64_t seed = 0;
  std::size_t modes = 5;
  double amplitude = 0.35;
  std::size_t max_attempts = 1000;
  std::string preset;
  std::size_t n = 512;
  std::string out;
};

int cmd_gen(const GenArgs& g) {
  Stopwatch clock;
  RunManifest m;
  m.command = "gen";
  CurveSpec spec;
  if (!g.spec_file.empty()) {
    spec = spec_from_json(read_json(g.spec_file));
    m.input_hashes[g.spec_file] = file_hash(g.spec_file);
  } else {
    spec.kind = parse_curve_kind(g.kind);
    spec.n_points = g.n;
    spec.seed = g.seed;
    spec.radius = g.radius;
    spec.semi_major = g.a;
    spec.semi_minor = g.b;
    spec.rotation = g.rotation;
    spec.center = {g.cx, g.cy};
    spec.base_radius = g.r0;
    for (const auto& t : g.terms) spec.radial_terms.push_back(parse_term(t));
    spec.modes = g.modes;
    spec.amplitude = g.amplitude;
    spec.max_attempts = g.max_attempts;
    spec.preset = g.preset;
  }
  spec.validate();
  m.config = spec_to_json(spec);

  const ClosedCurve curve = generate(spec);
  save_curve(g.out, curve);
  m.outputs.push_back(g.out);
  finish_manifest(m, manifest_path_for(g.out), clock);
  std::cout << "wrote " << g.out << " (" << curve.size() << " points)\n";
  return kExitPass;
}

// ---- flow -----------------------------------------------------------------

struct FlowArgs {
  std::string input;
  std::size_t n = 512;
  double dt_safety = 0.25;
  double stop_area_frac = 0.1;
  double sample_interval = 0.0;
  std::size_t resample_every = 10;
  std::size_t max_steps = FlowConfig{}.max_steps;
  std::string csv;
  std::string svg_dir;
  double svg_every = 0.0;
  std::string report;
  std::string manifest;
};

int cmd_flow(const FlowArgs& a) {
  Stopwatch clock;
  RunManifest m;
  m.command = "flow";
  FlowConfig cfg;
  cfg.n_points = a.n;
  cfg.dt_safety = a.dt_safety;
  cfg.stop_area_fraction = a.stop_area_frac;
  cfg.sample_interval = a.sample_interval;
  cfg.resample_every = a.resample_every;
  cfg.max_steps = a.max_steps;
  if (!a.svg_dir.empty()) {
    if (!(a.svg_every > 0.0)) throw std::invalid_argument("--svg-dir requires --svg-every > 0");
    cfg.snapshot_interval = a.svg_every;
  }
  cfg.validate();
  m.config = {{"input", a.input},
              {"n", cfg.n_points},
              {"dt_safety", cfg.dt_safety},
              {"stop_area_frac", cfg.stop_area_fraction},
              {"sample_interval", cfg.sample_interval},
              {"resample_every", cfg.resample_every},
              {"max_steps", cfg.max_steps},
              {"svg_every", cfg.snapshot_interval}};

  const LoadedCurve loaded = load_curve(a.input);
  m.input_hashes[a.input] = file_hash(a.input);
  if (loaded.reversed) std::cerr << "warning: " << a.input << " is clockwise; reversed\n";

  const FlowTrajectory traj = run(loaded.curve, cfg);
  const VerificationReport report = verify_trajectory(traj);

  if (!a.csv.empty()) {
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    write_text(a.csv, os.str());
    m.outputs.push_back(a.csv);
  }
  if (!a.svg_dir.empty() && !traj.snapshots.empty()) {
    const BoundingBox box = bounding_box(traj.snapshots.front().curve);
    for (const auto& p : write_snapshots(a.svg_dir, traj, box)) m.outputs.push_back(p.string());
  }
  if (!a.report.empty()) {
    Json j = report_to_json(report);
    Json flow{{"stop_time", traj.samples.back().t},
              {"extinction_time", traj.final_state.extinction_time()},
              {"steps", traj.final_state.steps},
              {"resample_events", traj.resample_events},
              {"max_resample_area_change", traj.max_resample_area_change},
              {"convexification_time", nullptr},
              {"failure", nullptr}};
    if (traj.convexification_time) flow["convexification_time"] = *traj.convexification_time;
    if (traj.failure) flow["failure"] = *traj.failure;
    try {
      flow["extrapolated_extinction_time"] = extrapolated_extinction_time(traj);
    } catch (const CurveError&) {
      flow["extrapolated_extinction_time"] = nullptr;
    }
    j["flow"] = std::move(flow);
    write_json(a.report, j);
    m.outputs.push_back(a.report);
  }

  m.partial = !traj.completed();
  m.status = traj.completed() ? (report.overall_pass ? "ok" : "check_failed") : "flow_failed";
  const fs::path mpath = !a.manifest.empty() ? fs::path(a.manifest)
                         : !a.report.empty() ? manifest_path_for(a.report)
                         : !a.csv.empty()    ? manifest_path_for(a.csv)
                                             : fs::path();
  if (!mpath.empty()) finish_manifest(m, mpath, clock);

  const FlowSample& last = traj.samples.back();
  std::cout << "samples: " << traj.samples.size() << "\nfinal_t: " << last.t
            << "\nfinal_area: " << last.area << "\nconvexification_time: ";
  if (traj.convexification_time) std::cout << *traj.convexification_time;
  else std::cout << "none";
  std::cout << '\n';
  for (const auto& c : report.checks) {
    if (!c.passed()) std::cout << "FAILED " << c.name << ": " << c.details << '\n';
  }
  if (traj.failure) {
    std::cerr << "flow failed: " << *traj.failure << '\n';
    return kExitFail;
  }
  return report.overall_pass ? kExitPass : kExitFail;
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
  std::string input;
  std::size_t corpus = 0;
  std::uint64_t seed = 7;
  std::size_t n = 512;
  std::size_t grid = 512;
  std::string report;
};

void print_failures(const std::string& label, const VerificationReport& r) {
  for (const auto& c : r.checks) {
    if (!c.passed()) {
      std::cout << label << "FAILED " << c.name << " [" << to_string(c.status)
                << "] margin=" << c.margin << " tol=" << c.tolerance << ": " << c.details << '\n';
    }
  }
}

int cmd_verify(const VerifyArgs& a) {
  Stopwatch clock;
  RunManifest m;
  m.command = "verify";
  if (a.input.empty() == (a.corpus == 0))
    throw std::invalid_argument("verify needs exactly one of --input or --corpus");
  VerifyOptions opt;
  opt.n_points = a.n;
  opt.grid_resolution = a.grid;
  if (opt.n_points < ClosedCurve::kMinPoints) throw std::invalid_argument("--n must be >= 8");
  if (opt.grid_resolution < 1) throw std::invalid_argument("--grid must be >= 1");
  m.config = {{"n", a.n}, {"grid", a.grid}};

  Json out;
  bool all_pass = true;
  if (!a.input.empty()) {
    m.config["input"] = a.input;
    const LoadedCurve loaded = load_curve(a.input);
    m.input_hashes[a.input] = file_hash(a.input);
    if (loaded.reversed) std::cerr << "warning: " << a.input << " is clockwise; reversed\n";
    const VerificationReport r = verify_curve(loaded.curve, opt);
    out = report_to_json(r);
    all_pass = r.overall_pass;
    const CheckEntry* main = r.find("main_inequality");
    std::cout << "main_inequality_margin: " << (main ? main->margin : std::nan("")) << '\n';
    print_failures("", r);
    std::cout << "overall: " << (all_pass ? "pass" : "fail") << '\n';
  } else {
    m.config["corpus"] = a.corpus;
    m.config["seed"] = a.seed;
    const auto corpus = corpus_sweep(a.corpus, a.seed, {}, a.n);
    std::vector<VerificationReport> reports(corpus.size());
    parallel_for(corpus.size(), [&](std::size_t i) { reports[i] = verify_curve(corpus[i].curve, opt); });

    double min_margin = std::numeric_limits<double>::infinity();
    std::size_t violations = 0;
    std::size_t failed = 0;
    Json list = Json::array();
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const VerificationReport& r = reports[i];
      const CheckEntry* main = r.find("main_inequality");
      if (main && std::isfinite(main->margin)) min_margin = std::min(min_margin, main->margin);
      if (!main || !main->passed()) ++violations;
      if (!r.overall_pass) {
        ++failed;
        print_failures("curve " + std::to_string(corpus[i].id) + ": ", r);
      }
      Json entry = report_to_json(r);
      entry["id"] = corpus[i].id;
      entry["family"] = corpus[i].family;
      entry["spec"] = spec_to_json(corpus[i].spec);
      list.push_back(std::move(entry));
    }
    all_pass = failed == 0;
    out = {{"summary",
            {{"curves", corpus.size()},
             {"seed", a.seed},
             {"min_margin", min_margin},
             {"violations", violations},
             {"failed_reports", failed},
             {"overall_pass", all_pass}}},
           {"reports", std::move(list)}};
    std::cout << "curves: " << corpus.size() << '\n'
              << "min_margin: " << min_margin << '\n'
              << "violations: " << violations << '\n'
              << "failed_reports: " << failed << '\n';
  }

  if (!a.report.empty()) {
    write_json(a.report, out);
    m.outputs.push_back(a.report);
    m.status = all_pass ? "ok" : "check_failed";
    finish_manifest(m, manifest_path_for(a.report), clock);
  }
  return all_pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curve shortening flow and maximum-curvature inequality checks"};
  app.set_version_flag("--version", CURVEFLOW_VERSION);
  app.require_subcommand(1);

  GenArgs g;
  auto* gen = app.add_subcommand("gen", "Generate a curve JSON file");
  gen->add_option("--spec", g.spec_file, "CurveSpec JSON file (overrides inline flags)")->check(CLI::ExistingFile);
  gen->add_option("--kind", g.kind, "circle, ellipse, radial-fourier, planar-fourier or preset");
  gen->add_option("--r", g.radius, "circle radius");
  gen->add_option("--a", g.a, "ellipse semi-major axis");
  gen->add_option("--b", g.b, "ellipse semi-minor axis");
  gen->add_option("--rotation", g.rotation, "ellipse rotation in radians");
  gen->add_option("--cx", g.cx, "centre x");
  gen->add_option("--cy", g.cy, "centre y");
  gen->add_option("--r0", g.r0, "radial base radius");
  gen->add_option("--term", g.terms, "radial term MODE:COS[:SIN], repeatable");
  gen->add_option("--seed", g.seed, "planar Fourier seed");
  gen->add_option("--modes", g.modes, "planar Fourier modes");
  gen->add_option("--amplitude", g.amplitude, "planar Fourier amplitude");
  gen->add_option("--max-attempts", g.max_attempts, "rejection sampling budget");
  gen->add_option("--preset,--name", g.preset, "preset name (bean, kidney)");
  gen->add_option("--n", g.n, "number of points");
  gen->add_option("--out", g.out, "output curve JSON")->required();

  FlowArgs f;
  auto* flow = app.add_subcommand("flow", "Run the curve shortening flow");
  flow->add_option("--input", f.input, "input curve JSON")->required()->check(CLI::ExistingFile);
  flow->add_option("--n", f.n, "points on the evolving curve");
  flow->add_option("--dt-safety", f.dt_safety, "fraction of the explicit stability limit");
  flow->add_option("--stop-area-frac", f.stop_area_frac, "stop when A <= frac * A(0)");
  flow->add_option("--sample-interval", f.sample_interval, "flow time between samples (0: T/100)");
  flow->add_option("--resample-every", f.resample_every, "steps between resampling events");
  flow->add_option("--max-steps", f.max_steps, "abort after this many steps");
  flow->add_option("--out", f.csv, "trajectory CSV");
  flow->add_option("--svg-dir", f.svg_dir, "directory for SVG snapshots");
  flow->add_option("--svg-every", f.svg_every, "flow time between SVG snapshots");
  flow->add_option("--report", f.report, "trajectory report JSON");
  flow->add_option("--manifest", f.manifest, "manifest path");

  VerifyArgs v;
  auto* verify = app.add_subcommand("verify", "Verify a curve or a generated corpus");
  verify->add_option("--input", v.input, "curve JSON")->check(CLI::ExistingFile);
  verify->add_option("--corpus", v.corpus, "number of corpus curves");
  verify->add_option("--seed", v.seed, "corpus seed");
  verify->add_option("--n", v.n, "points per curve");
  verify->add_option("--grid", v.grid, "inscribed-disk grid resolution");
  verify->add_option("--report", v.report, "report JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInvalid;
  }

  try {
    if (*gen) return cmd_gen(g);
    if (*flow) return cmd_flow(f);
    return cmd_verify(v);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
}
