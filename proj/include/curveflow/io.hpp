#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "curveflow/corpus.hpp"
#include "curveflow/topology.hpp"
#include "curveflow/verifier.hpp"

namespace curveflow {

using Json = nlohmann::json;

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadedCurve {
  ClosedCurve curve;
  /// Input was clockwise and has been reversed.
  bool reversed = false;
};

/// {"points": [[x, y], ...]}. Throws CurveError on malformed content.
LoadedCurve curve_from_json(const Json& j);
Json curve_to_json(const ClosedCurve& curve);
LoadedCurve load_curve(const std::filesystem::path& path);
void save_curve(const std::filesystem::path& path, const ClosedCurve& curve);

/// Throws SpecError on unknown kinds or mistyped fields.
CurveSpec spec_from_json(const Json& j);
Json spec_to_json(const CurveSpec& spec);

Json report_to_json(const VerificationReport& report);

/// Columns t,area,length,k_max,K_max,isoper_ratio,convex.
void write_trajectory_csv(std::ostream& out, const FlowTrajectory& trajectory);

/// Closed outline of `curve` in a viewport fitted to `viewport` with a margin.
std::string snapshot_svg(const ClosedCurve& curve, const BoundingBox& viewport, double t);

/// Writes one SVG per snapshot as snapshot_0000.svg, ... and returns the paths.
std::vector<std::filesystem::path> write_snapshots(const std::filesystem::path& dir,
                                                   const FlowTrajectory& trajectory,
                                                   const BoundingBox& viewport);

/// 64-bit FNV-1a of the file content as 16 hex digits.
std::string file_hash(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  Json config = Json::object();
  std::string version;
  std::map<std::string, std::string> input_hashes;
  std::vector<std::string> outputs;
  double duration_seconds = 0.0;
  bool partial = false;
  std::string status = "ok";
};

Json manifest_to_json(const RunManifest& manifest);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

}  // namespace curveflow
