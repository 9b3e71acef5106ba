#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "curveflow/flow.hpp"
#include "curveflow/star.hpp"

namespace curveflow {

enum class CheckStatus { pass, fail, not_applicable, error };
enum class CheckKind { inequality, identity };

std::string_view to_string(CheckStatus status);

struct CheckEntry {
  std::string name;
  CheckKind kind = CheckKind::inequality;
  CheckStatus status = CheckStatus::pass;
  double margin = 0.0;
  double tolerance = 0.0;
  std::string details;

  /// not_applicable counts as passing; error does not.
  bool passed() const { return status == CheckStatus::pass || status == CheckStatus::not_applicable; }
};

/// Builds an entry whose status follows from the margin:
/// inequality passes iff margin >= -tolerance, identity iff |margin| <= tolerance.
CheckEntry make_entry(std::string name, CheckKind kind, double margin, double tolerance,
                      std::string details = {});

struct CurveMeta {
  std::size_t n_points = 0;
  double area = 0.0;
  double length = 0.0;
  double k_max = 0.0;
};

struct VerificationReport {
  CurveMeta curve_meta;
  std::vector<CheckEntry> checks;
  bool overall_pass = false;

  const CheckEntry* find(std::string_view name) const;
  void finalize();
};

/// Relative shortfall of a regular N-gon against its circumcircle in the
/// main inequality (1 - sqrt(N sin(2pi/N) / 2pi)) and in l <= 2 k_max A
/// (1 - cos(pi/N)). Menger curvature is exact on such a polygon while the
/// shoelace area and the chord length undershoot, so a circle sampled at N
/// points sits this far below equality.
double polygon_main_allowance(std::size_t n);
double polygon_length_allowance(std::size_t n);

struct Tolerances {
  double main_inequality = 1e-6;
  double isoperimetric = 1e-6;
  double star_identity = 1e-5;   ///< relative to length
  double star_support = 1e-9;    ///< relative to length
  double star_length = 1e-5;     ///< relative to length
  double turning_number = 1e-3;
  double equality_margin = 0.01;
  double equality_roundness = 0.05;
  double inradius_cells = 4.0;   ///< tolerance in units of bbox diagonal / grid
  double area_law = 1e-3;
  double isoperimetric_monotone = 1e-6;
  double rescaled_floor = 5e-3;
  double argmax_concavity = 1e-6;
  /// Widen main-inequality and star-length tolerances by the polygon allowance.
  bool polygon_allowance = true;
};

/// k_max sqrt(A/pi) - 1. Throws CurveError unless the curve is embedded and
/// counterclockwise.
double check_main_inequality(const ClosedCurve& curve);

/// |sum k_i (p_i . n_i) ds_i - l| / l with positions measured from the origin.
double check_star_identity(const ClosedCurve& curve);

struct StarBoundReport {
  CheckStatus status = CheckStatus::not_applicable;
  std::optional<Vec2> center;
  double support_margin = 0.0;        ///< min_i (p_i - c) . n_i
  double length_margin = 0.0;         ///< 2 k_max A - l
  double isoperimetric_margin = 0.0;  ///< l^2 - 4 pi A
  double length = 0.0;
};

/// Runs the star-shaped chain about a witness center from find_star_center.
/// Status is not_applicable when no center is found.
StarBoundReport check_star_bound(const ClosedCurve& curve, const Tolerances& tol = {},
                                 const StarSearchOptions& search = {});

/// l^2 - 4 pi A
double check_isoperimetric(const ClosedCurve& curve);

/// Largest distance to the curve over interior cell centres of a
/// resolution x resolution grid on the bounding box. Throws CurveError when
/// no cell centre is interior.
double inscribed_disk_radius(const ClosedCurve& curve, std::size_t grid_resolution);

/// Coefficient of variation of the curvature. Throws CurveError when the
/// mean curvature is not positive.
double detect_equality_case(const ClosedCurve& curve);

struct VerifyOptions {
  std::size_t n_points = 512;
  std::size_t grid_resolution = 512;
  Tolerances tolerances;
  StarSearchOptions star_search;
};

/// All static checks. The input is resampled to n_points unless it is
/// already uniformly spaced at that size. A non-embedded input yields a
/// single hypothesis entry.
VerificationReport verify_curve(const ClosedCurve& curve, const VerifyOptions& options = {});

/// Flow checks: completion, area law, length and isoperimetric-ratio
/// monotonicity, rescaled-curvature barrier, argmax concavity, per-sample
/// main inequality and convexification.
VerificationReport verify_trajectory(const FlowTrajectory& trajectory,
                                     const Tolerances& tol = {});

}  // namespace curveflow
