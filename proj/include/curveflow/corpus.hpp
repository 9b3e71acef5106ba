#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "curveflow/closed_curve.hpp"

namespace curveflow {

/// Seeded source for curve generation: the 64-bit Mersenne Twister
/// (std::mt19937_64, whose output sequence is fixed by the C++ standard),
/// with doubles formed from the top 53 bits of each draw. Standard library
/// distributions are avoided because their algorithms are
/// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi);

 private:
  std::mt19937_64 engine_;
};

enum class CurveKind { circle, ellipse, radial_fourier, planar_fourier, preset };

std::string_view to_string(CurveKind kind);
/// Accepts both "planar_fourier" and "planar-fourier" spellings.
CurveKind parse_curve_kind(std::string_view name);

struct FourierTerm {
  int mode = 1;
  double cos_coef = 0.0;
  double sin_coef = 0.0;
};

/// Description of one generated curve. Only the fields of `kind` are used.
struct CurveSpec {
  CurveKind kind = CurveKind::circle;
  std::size_t n_points = 512;
  std::uint64_t seed = 0;

  double radius = 1.0;  // circle
  double semi_major = 2.0;  // ellipse, along x before rotation
  double semi_minor = 1.0;
  double rotation = 0.0;  // ellipse
  Vec2 center{};  // circle, ellipse

  // radial_fourier: r(theta) = r0 + sum_m (a_m cos m theta + b_m sin m theta)
  double base_radius = 1.0;
  std::vector<FourierTerm> radial_terms;

  // planar_fourier: x, y are independent truncated Fourier series drawn from
  // `seed`, perturbing the unit circle with amplitude / m^1.5 in mode m.
  std::size_t modes = 5;
  double amplitude = 0.35;
  std::size_t max_attempts = 1000;

  std::string preset;  // "bean" or "kidney"

  /// Throws SpecError naming the violated constraint.
  void validate() const;
};

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Names accepted by CurveSpec::preset.
const std::vector<std::string>& preset_names();

/// Returns a uniformly spaced, counterclockwise, embedded curve.
/// planar_fourier draws coefficients until the curve is embedded and well
/// resolved at n_points (see is_well_resolved), giving up with
/// GenerationError after max_attempts.
ClosedCurve generate(const CurveSpec& spec);

/// Resolution filter used for rejection sampling: max|k| * ds <= 0.1 and no
/// two vertices more than n/8 apart along the curve come closer than
/// 0.1 * sqrt(area). Rejects near-self-touching shapes that a fixed-N flow
/// cannot follow.
bool is_well_resolved(const ClosedCurve& curve);

/// Class weights for corpus_sweep. Slots are assigned to classes in blocks
/// proportional to the weights.
struct CorpusMix {
  double circle = 0.0;
  double convex = 0.2;   ///< ellipses and near-circles
  double star = 0.4;     ///< non-convex radial curves (star-shaped about the origin)
  double general = 0.4;  ///< planar Fourier curves

  static CorpusMix circle_only() { return {1.0, 0.0, 0.0, 0.0}; }
};

struct CorpusCurve {
  std::size_t id = 0;
  std::string family;  ///< "circle", "convex", "star", or "general"
  CurveSpec spec;
  ClosedCurve curve;
};

/// Deterministic corpus: slot i uses seed + i. Throws GenerationError naming
/// the slot when a slot cannot be generated.
std::vector<CorpusCurve> corpus_sweep(std::size_t count, std::uint64_t seed,
                                      const CorpusMix& mix = {}, std::size_t n_points = 512);

}  // namespace curveflow
