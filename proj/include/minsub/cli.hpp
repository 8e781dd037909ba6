#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "minsub/eigen_catalog.hpp"

namespace minsub::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

inline constexpr int kDefaultPoints = 50;
inline constexpr int kDefaultSteps = 100;
inline constexpr double kDefaultStepSize = 0.05;
inline constexpr double kDefaultH = 1e-3;

/// Per-command thresholds used when --tol is not given.
inline constexpr double kVerifyTol = 1e-8;
inline constexpr double kDualityTol = 1e-7;
inline constexpr double kCurvatureTol = 5e-3;
/// Below this, a non-decreasing mean-curvature column is attributed to rounding.
inline constexpr double kCurvatureFloor = 1e-6;

struct RunConfig {
  std::string space;              // "slr-so:3", or a family name combined with n
  std::optional<int> n;
  std::optional<std::string> a;   // "1+2i,0,3-1i"
  std::optional<std::string> b;
  std::uint64_t seed = 0;
  int points = kDefaultPoints;
  int steps = kDefaultSteps;
  double step_size = kDefaultStepSize;
  double h = kDefaultH;
  std::optional<double> tol;
  std::string out;
  Complex level = 0.0;

  SpaceId space_id() const;
  /// Builds the catalog eigenfunction; throws ParameterError on bad input.
  EigenSpec spec() const;
  nlohmann::json to_json() const;
};

/// Reads keys space, n, a, b, seed, points, steps, step_size, h, tol, out,
/// level. a and b may be strings or arrays of [re, im] pairs.
void apply_json(RunConfig& config, const nlohmann::json& j);

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_fiber(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_curvature(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_duality(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_list_spaces(std::ostream& out);

/// Parses arguments (argv[0] is the program name), dispatches the command
/// and maps errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Writes content to path through a temporary file and a rename.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace minsub::cli
