#include "curveflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace curveflow {

namespace fs = std::filesystem;

namespace {

// NaN and infinities are not representable in JSON.
Json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

LoadedCurve curve_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("points") || !j["points"].is_array())
    throw CurveError("curve file must be an object with a \"points\" array");
  std::vector<Vec2> pts;
  pts.reserve(j["points"].size());
  for (const auto& p : j["points"]) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw CurveError("each point must be a pair of numbers [x, y]");
    pts.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  ClosedCurve curve(std::move(pts));
  if (curve.signed_area() < 0.0) return {curve.reversed(), true};
  return {std::move(curve), false};
}

Json curve_to_json(const ClosedCurve& curve) {
  Json pts = Json::array();
  for (const Vec2& p : curve.points()) pts.push_back({p.x, p.y});
  return Json{{"points", std::move(pts)}};
}

LoadedCurve load_curve(const fs::path& path) {
  return curve_from_json(read_json(path));
}

void save_curve(const fs::path& path, const ClosedCurve& curve) {
  write_json(path, curve_to_json(curve));
}

CurveSpec spec_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw SpecError("spec must be an object with a string \"kind\"");
  CurveSpec s;
  try {
    s.kind = parse_curve_kind(j["kind"].get<std::string>());
    s.n_points = j.value("n_points", s.n_points);
    s.seed = j.value("seed", s.seed);
    s.radius = j.value("radius", s.radius);
    s.semi_major = j.value("semi_major", s.semi_major);
    s.semi_minor = j.value("semi_minor", s.semi_minor);
    s.rotation = j.value("rotation", s.rotation);
    if (j.contains("center")) {
      const auto& c = j["center"];
      if (!c.is_array() || c.size() != 2) throw SpecError("center must be [x, y]");
      s.center = {c[0].get<double>(), c[1].get<double>()};
    }
    s.base_radius = j.value("base_radius", s.base_radius);
    if (j.contains("radial_terms")) {
      for (const auto& t : j["radial_terms"]) {
        s.radial_terms.push_back(
            {t.at("mode").get<int>(), t.value("cos", 0.0), t.value("sin", 0.0)});
      }
    }
    s.modes = j.value("modes", s.modes);
    s.amplitude = j.value("amplitude", s.amplitude);
    s.max_attempts = j.value("max_attempts", s.max_attempts);
    s.preset = j.value("preset", s.preset);
  } catch (const Json::exception& ex) {
    throw SpecError(std::string("malformed spec: ") + ex.what());
  }
  return s;
}

Json spec_to_json(const CurveSpec& s) {
  Json j{{"kind", std::string(to_string(s.kind))}, {"n_points", s.n_points}};
  switch (s.kind) {
    case CurveKind::circle:
      j["radius"] = s.radius;
      j["center"] = {s.center.x, s.center.y};
      break;
    case CurveKind::ellipse:
      j["semi_major"] = s.semi_major;
      j["semi_minor"] = s.semi_minor;
      j["rotation"] = s.rotation;
      j["center"] = {s.center.x, s.center.y};
      break;
    case CurveKind::radial_fourier: {
      j["base_radius"] = s.base_radius;
      Json terms = Json::array();
      for (const auto& t : s.radial_terms)
        terms.push_back({{"mode", t.mode}, {"cos", t.cos_coef}, {"sin", t.sin_coef}});
      j["radial_terms"] = std::move(terms);
      break;
    }
    case CurveKind::planar_fourier:
      j["seed"] = s.seed;
      j["modes"] = s.modes;
      j["amplitude"] = s.amplitude;
      j["max_attempts"] = s.max_attempts;
      break;
    case CurveKind::preset:
      j["preset"] = s.preset;
      break;
  }
  return j;
}

Json report_to_json(const VerificationReport& report) {
  const CurveMeta& m = report.curve_meta;
  Json checks = Json::array();
  for (const CheckEntry& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"pass", c.passed()},
                      {"status", std::string(to_string(c.status))},
                      {"kind", c.kind == CheckKind::identity ? "identity" : "inequality"},
                      {"margin", number(c.margin)},
                      {"tolerance", number(c.tolerance)},
                      {"details", c.details}});
  }
  return Json{{"curve_meta",
               {{"n_points", m.n_points},
                {"area", number(m.area)},
                {"length", number(m.length)},
                {"k_max", number(m.k_max)}}},
              {"checks", std::move(checks)},
              {"overall_pass", report.overall_pass}};
}

void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj) {
  out << "t,area,length,k_max,K_max,isoper_ratio,convex\n";
  out << std::setprecision(17);
  for (const FlowSample& s : traj.samples) {
    out << s.t << ',' << s.area << ',' << s.length << ',' << s.k_max << ',' << s.rescaled_k_max
        << ',' << s.isoperimetric_ratio << ',' << (s.convex ? 1 : 0) << '\n';
  }
}

std::string snapshot_svg(const ClosedCurve& curve, const BoundingBox& viewport, double t) {
  const double w = viewport.hi.x - viewport.lo.x;
  const double h = viewport.hi.y - viewport.lo.y;
  const double pad = 0.05 * std::max(w, h);
  const double size = 512.0;
  const double scale = size / (std::max(w, h) + 2.0 * pad);
  // SVG y grows downward.
  auto px = [&](Vec2 p) {
    return Vec2{(p.x - viewport.lo.x + pad) * scale, (viewport.hi.y - p.y + pad) * scale};
  };
  const double width = (w + 2.0 * pad) * scale;
  const double height = (h + 2.0 * pad) * scale;

  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<polygon fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const Vec2 q = px(curve[i]);
    os << (i ? " " : "") << q.x << ',' << q.y;
  }
  os << "\"/>\n";
  os << std::setprecision(4) << "<text x=\"8\" y=\"20\" font-family=\"monospace\" font-size=\"14\">t = "
     << t << "</text>\n</svg>\n";
  return os.str();
}

std::vector<fs::path> write_snapshots(const fs::path& dir, const FlowTrajectory& traj,
                                      const BoundingBox& viewport) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  std::vector<fs::path> paths;
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%04zu.svg", i);
    const fs::path p = dir / name;
    write_text(p, snapshot_svg(traj.snapshots[i].curve, viewport, traj.snapshots[i].t));
    paths.push_back(p);
  }
  return paths;
}

std::string file_hash(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

Json manifest_to_json(const RunManifest& m) {
  return Json{{"command", m.command},
              {"config", m.config},
              {"version", m.version},
              {"input_hashes", m.input_hashes},
              {"outputs", m.outputs},
              {"duration_seconds", m.duration_seconds},
              {"partial", m.partial},
              {"status", m.status}};
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void write_json(const fs::path& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

Json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& ex) {
    throw CurveError(path.string() + ": invalid JSON: " + ex.what());
  }
}

}  // namespace curveflow
