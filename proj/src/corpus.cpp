#include "curveflow/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "curveflow/geometry.hpp"
#include "curveflow/resample.hpp"
#include "curveflow/topology.hpp"

namespace curveflow {
namespace {

constexpr double kPi = std::numbers::pi;

struct BentEllipse {
  double a;  // half-length along the bend
  double b;  // half-thickness
  double bend_radius;
};

// The ellipse (a cos t, b sin t) wrapped around a circle of radius R centred
// at (0, R): x is mapped to arc length along the circle, y to the inward
// offset from it. Orientation is preserved for R > b.
ParametricCurve bent_ellipse(BentEllipse e) {
  auto position = [e](double t) {
    const double u = e.a * std::cos(t);
    const double v = e.b * std::sin(t);
    const double phi = u / e.bend_radius;
    return Vec2{(e.bend_radius - v) * std::sin(phi),
                e.bend_radius - (e.bend_radius - v) * std::cos(phi)};
  };
  auto derivative = [e](double t) {
    const double u = e.a * std::cos(t);
    const double v = e.b * std::sin(t);
    const double du = -e.a * std::sin(t);
    const double dv = e.b * std::cos(t);
    const double phi = u / e.bend_radius;
    const double stretch = (e.bend_radius - v) / e.bend_radius;
    const Vec2 along{std::cos(phi), std::sin(phi)};
    const Vec2 across{-std::sin(phi), std::cos(phi)};
    return (stretch * du) * along + dv * across;
  };
  return {position, derivative};
}

BentEllipse preset_shape(const std::string& name) {
  if (name == "bean") return {1.2, 0.45, 1.4};
  if (name == "kidney") return {1.6, 0.36, 0.85};
  throw SpecError("unknown preset '" + name + "'");
}

ParametricCurve radial_curve(double r0, const std::vector<FourierTerm>& terms) {
  auto radius = [r0, terms](double t) {
    double r = r0, dr = 0.0;
    for (const FourierTerm& f : terms) {
      const double c = std::cos(f.mode * t), s = std::sin(f.mode * t);
      r += f.cos_coef * c + f.sin_coef * s;
      dr += f.mode * (f.sin_coef * c - f.cos_coef * s);
    }
    return std::pair{r, dr};
  };
  return {[radius](double t) {
            const double r = radius(t).first;
            return Vec2{r * std::cos(t), r * std::sin(t)};
          },
          [radius](double t) {
            const auto [r, dr] = radius(t);
            const double c = std::cos(t), s = std::sin(t);
            return Vec2{dr * c - r * s, dr * s + r * c};
          }};
}

struct PlanarCoefficients {
  // x(t) = sum_m xc[m] cos(m t) + xs[m] sin(m t), same for y; index m-1.
  std::vector<double> xc, xs, yc, ys;
};

PlanarCoefficients draw_planar(Rng& rng, std::size_t modes, double amplitude) {
  PlanarCoefficients c;
  for (std::size_t m = 1; m <= modes; ++m) {
    const double scale = amplitude / std::pow(static_cast<double>(m), 1.5);
    c.xc.push_back(rng.uniform(-scale, scale));
    c.xs.push_back(rng.uniform(-scale, scale));
    c.yc.push_back(rng.uniform(-scale, scale));
    c.ys.push_back(rng.uniform(-scale, scale));
  }
  c.xc[0] += 1.0;
  c.ys[0] += 1.0;
  return c;
}

ParametricCurve planar_curve(PlanarCoefficients c) {
  auto eval = [c](double t, bool derivative) {
    Vec2 p;
    for (std::size_t i = 0; i < c.xc.size(); ++i) {
      const double m = static_cast<double>(i + 1);
      const double cs = std::cos(m * t), sn = std::sin(m * t);
      if (derivative) {
        p += m * Vec2{c.xs[i] * cs - c.xc[i] * sn, c.ys[i] * cs - c.yc[i] * sn};
      } else {
        p += Vec2{c.xc[i] * cs + c.xs[i] * sn, c.yc[i] * cs + c.ys[i] * sn};
      }
    }
    return p;
  };
  return {[eval](double t) { return eval(t, false); },
          [eval](double t) { return eval(t, true); }};
}

ClosedCurve counterclockwise(ClosedCurve curve) {
  return curve.signed_area() < 0.0 ? curve.reversed() : curve;
}

double coefficient_sum(const std::vector<FourierTerm>& terms) {
  double sum = 0.0;
  for (const FourierTerm& f : terms) sum += std::abs(f.cos_coef) + std::abs(f.sin_coef);
  return sum;
}

}  // namespace

int Rng::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t v = engine_();
  while (v >= limit) v = engine_();
  return lo + static_cast<int>(v % span);
}

std::string_view to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::circle: return "circle";
    case CurveKind::ellipse: return "ellipse";
    case CurveKind::radial_fourier: return "radial_fourier";
    case CurveKind::planar_fourier: return "planar_fourier";
    case CurveKind::preset: return "preset";
  }
  return "unknown";
}

CurveKind parse_curve_kind(std::string_view name) {
  std::string key(name);
  std::replace(key.begin(), key.end(), '-', '_');
  for (CurveKind k : {CurveKind::circle, CurveKind::ellipse, CurveKind::radial_fourier,
                      CurveKind::planar_fourier, CurveKind::preset}) {
    if (key == to_string(k)) return k;
  }
  throw SpecError("unknown curve kind '" + std::string(name) + "'");
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"bean", "kidney"};
  return names;
}

void CurveSpec::validate() const {
  if (n_points < ClosedCurve::kMinPoints) throw SpecError("n_points must be >= 8");
  switch (kind) {
    case CurveKind::circle:
      if (!(radius > 0.0)) throw SpecError("circle radius must be positive");
      break;
    case CurveKind::ellipse:
      if (!(semi_major > 0.0 && semi_minor > 0.0)) {
        throw SpecError("ellipse semi-axes must be positive");
      }
      break;
    case CurveKind::radial_fourier: {
      if (!(base_radius > 0.0)) throw SpecError("radial base radius r0 must be positive");
      for (const FourierTerm& f : radial_terms) {
        if (f.mode < 1) throw SpecError("radial Fourier modes must be >= 1");
      }
      const double sum = coefficient_sum(radial_terms);
      if (!(sum < base_radius)) {
        std::ostringstream msg;
        msg << "radial Fourier coefficients violate sum |coeff| < r0 (sum " << sum << ", r0 "
            << base_radius << ")";
        throw SpecError(msg.str());
      }
      break;
    }
    case CurveKind::planar_fourier:
      if (modes < 1) throw SpecError("planar Fourier needs at least one mode");
      if (!(amplitude >= 0.0)) throw SpecError("planar Fourier amplitude must be >= 0");
      if (max_attempts < 1) throw SpecError("max_attempts must be >= 1");
      break;
    case CurveKind::preset: {
      const auto& names = preset_names();
      if (std::find(names.begin(), names.end(), preset) == names.end()) {
        throw SpecError("unknown preset '" + preset + "' (expected bean or kidney)");
      }
      break;
    }
  }
}

bool is_well_resolved(const ClosedCurve& curve) {
  const CurveGeometry g = compute_geometry(curve, std::numeric_limits<double>::infinity());
  const std::size_t n = curve.size();
  const double ds = g.total_length / static_cast<double>(n);
  if (max_abs_curvature(g) * ds > 0.1) return false;

  const double neck = 0.1 * std::sqrt(std::abs(g.enclosed_area));
  const double neck2 = neck * neck;
  const std::size_t gap = n / 8;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + gap; j + gap <= i + n && j < n; ++j) {
      if (norm2(curve[i] - curve[j]) < neck2) return false;
    }
  }
  return true;
}

ClosedCurve generate(const CurveSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_points;
  switch (spec.kind) {
    case CurveKind::circle: {
      std::vector<Vec2> pts(n);
      for (std::size_t j = 0; j < n; ++j) {
        const double t = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
        pts[j] = spec.center + spec.radius * Vec2{std::cos(t), std::sin(t)};
      }
      return ClosedCurve(std::move(pts));
    }
    case CurveKind::ellipse: {
      const double a = spec.semi_major, b = spec.semi_minor;
      const double c = std::cos(spec.rotation), s = std::sin(spec.rotation);
      const Vec2 o = spec.center;
      const ParametricCurve e{
          [=](double t) {
            const Vec2 p{a * std::cos(t), b * std::sin(t)};
            return o + Vec2{c * p.x - s * p.y, s * p.x + c * p.y};
          },
          [=](double t) {
            const Vec2 d{-a * std::sin(t), b * std::cos(t)};
            return Vec2{c * d.x - s * d.y, s * d.x + c * d.y};
          }};
      return sample_by_arc_length(e, n);
    }
    case CurveKind::radial_fourier:
      return sample_by_arc_length(radial_curve(spec.base_radius, spec.radial_terms), n);
    case CurveKind::preset:
      return counterclockwise(sample_by_arc_length(bent_ellipse(preset_shape(spec.preset)), n));
    case CurveKind::planar_fourier: {
      Rng rng(spec.seed);
      for (std::size_t attempt = 0; attempt < spec.max_attempts; ++attempt) {
        const PlanarCoefficients coeffs = draw_planar(rng, spec.modes, spec.amplitude);
        // Cheap pre-check at low resolution before the arc-length sampling.
        const ClosedCurve probe(
            [&] {
              const ParametricCurve pc = planar_curve(coeffs);
              std::vector<Vec2> pts(256);
              for (std::size_t j = 0; j < pts.size(); ++j) {
                pts[j] = pc.position(2.0 * kPi * static_cast<double>(j) / 256.0);
              }
              return pts;
            }());
        if (!is_embedded(probe)) continue;
        ClosedCurve curve = counterclockwise(sample_by_arc_length(planar_curve(coeffs), n));
        if (is_embedded(curve) && is_well_resolved(curve)) return curve;
      }
      std::ostringstream msg;
      msg << "planar_fourier: no embedded, well-resolved curve within " << spec.max_attempts
          << " attempts (seed " << spec.seed << ", modes " << spec.modes << ", amplitude "
          << spec.amplitude << ")";
      throw GenerationError(msg.str());
    }
  }
  throw SpecError("unhandled curve kind");
}

namespace {

CurveSpec convex_spec(Rng& rng, std::size_t n) {
  CurveSpec spec;
  spec.n_points = n;
  if (rng.uniform() < 0.5) {
    spec.kind = CurveKind::ellipse;
    spec.semi_minor = 1.0;
    spec.semi_major = rng.uniform(1.15, 2.5);
    spec.rotation = rng.uniform(0.0, kPi);
  } else {
    // Near-circle: eps (m^2 - 1) < 0.5 keeps the curvature positive.
    spec.kind = CurveKind::radial_fourier;
    const int m = rng.integer(2, 5);
    const double eps_max = 0.5 / (m * m - 1);
    const double eps = std::exp(rng.uniform(std::log(1e-3), std::log(eps_max)));
    const double phase = rng.uniform(0.0, 2.0 * kPi);
    spec.radial_terms = {{m, eps * std::cos(phase), eps * std::sin(phase)}};
  }
  return spec;
}

CurveSpec star_spec(Rng& rng, std::size_t n) {
  CurveSpec spec;
  spec.kind = CurveKind::radial_fourier;
  spec.n_points = n;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const int top = rng.integer(3, 6);
    std::vector<FourierTerm> terms;
    for (int m = 2; m <= top; ++m) {
      const double scale = 1.0 / std::sqrt(static_cast<double>(m));
      terms.push_back({m, rng.uniform(-scale, scale), rng.uniform(-scale, scale)});
    }
    const double target = rng.uniform(0.2, 0.45);
    const double sum = coefficient_sum(terms);
    for (FourierTerm& f : terms) {
      f.cos_coef *= target / sum;
      f.sin_coef *= target / sum;
    }
    spec.radial_terms = std::move(terms);
    const ClosedCurve c = generate(spec);
    const CurveGeometry g = compute_geometry(c, std::numeric_limits<double>::infinity());
    if (!is_convex(g, 1e-6 * max_abs_curvature(g)) && is_well_resolved(c)) return spec;
  }
  throw GenerationError("star-shaped non-convex radial curve not found within 1000 attempts");
}

CurveSpec general_spec(Rng& rng, std::size_t n) {
  CurveSpec spec;
  spec.kind = CurveKind::planar_fourier;
  spec.n_points = n;
  spec.seed = rng.next();
  spec.modes = static_cast<std::size_t>(rng.integer(3, 6));
  spec.amplitude = rng.uniform(0.25, 0.45);
  return spec;
}

}  // namespace

std::vector<CorpusCurve> corpus_sweep(std::size_t count, std::uint64_t seed, const CorpusMix& mix,
                                      std::size_t n_points) {
  if (count < 1) throw SpecError("corpus_sweep: count must be >= 1");
  const double weights[] = {mix.circle, mix.convex, mix.star, mix.general};
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw SpecError("corpus_sweep: mix weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw SpecError("corpus_sweep: mix weights sum to zero");
  static const char* const families[] = {"circle", "convex", "star", "general"};

  std::vector<CorpusCurve> out;
  out.reserve(count);
  for (std::size_t slot = 0; slot < count; ++slot) {
    const double position = (static_cast<double>(slot) + 0.5) / static_cast<double>(count);
    std::size_t family = 0;
    double cumulative = weights[0] / total;
    while (family + 1 < 4 && position >= cumulative) cumulative += weights[++family] / total;

    Rng rng(seed + slot);
    try {
      CurveSpec spec;
      switch (family) {
        case 0:
          spec.kind = CurveKind::circle;
          spec.n_points = n_points;
          break;
        case 1: spec = convex_spec(rng, n_points); break;
        case 2: spec = star_spec(rng, n_points); break;
        default: spec = general_spec(rng, n_points); break;
      }
      spec.seed = family == 3 ? spec.seed : seed + slot;
      ClosedCurve curve = generate(spec);
      out.push_back({slot, families[family], std::move(spec), std::move(curve)});
    } catch (const std::exception& e) {
      throw GenerationError("corpus slot " + std::to_string(slot) + " (seed " +
                            std::to_string(seed + slot) + "): " + e.what());
    }
  }
  return out;
}

}  // namespace curveflow
