#ifndef ELBM_CONFIG_HPP_
#define ELBM_CONFIG_HPP_

#include <array>
#include <json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "elbm/boundaries.hpp"
#include "elbm/sources.hpp"

namespace elbm {

enum class ExperimentKind {
  Simulate,        // LBM only
  BulkCompare,     // LBM against the spectral oracle
  Oracle,          // spectral oracle only
  SpeedRatio,
  DampingScaling,
  StabilityMap,
  Convergence,
  Reflection,
  Rayleigh,
};

std::string_view to_string(ExperimentKind kind);

struct StabilityOptions {
  int samples = 64;
};

struct ConvergenceOptions {
  std::vector<int> sizes{64, 128, 256, 512};
  /// Scale source width, period, delay and snapshot time with N / 128.
  bool scale_time = true;
};

struct ReflectionOptions {
  std::vector<EdgeKind> walls{EdgeKind::RigidWall, EdgeKind::FreeSurface};
  int source_offset = 30;  // nodes from the reflecting edge
  int probe_offset = 60;
};

struct RayleighOptions {
  long switch_step = 400;  // lateral edges become periodic here
  int source_depth = 5;
  int source_x = 30;
  int profile_x = 83;
  long profile_step = 1800;
  long reference_step = 600;
  int turns = 2;
  int gate_half_width = 40;
};

/// Fully resolved run configuration; every field carries its default.
struct RunConfig {
  ExperimentKind experiment = ExperimentKind::Simulate;
  int nx = 128;
  int ny = 128;
  double nu = 0.25;
  double tau = 0.55;
  double rho0 = 1.0;
  SourceSpec source;
  BoundarySpec boundary;
  long steps = 70;
  std::vector<long> snapshots;                 // empty: final step only
  std::vector<std::array<int, 2>> stations;
  std::string output = "out";

  StabilityOptions stability;
  ConvergenceOptions convergence;
  ReflectionOptions reflection;
  RayleighOptions rayleigh;
};

/// Line-oriented "key = value" text with [section] headers and '#' comments.
///
/// Throws ConfigError listing every syntax error (with line and column) and
/// every semantic violation. Unknown sections or keys and duplicate keys are
/// errors. Experiment-specific defaults (grid, boundaries, step count) are
/// applied before the explicit keys. `fallback` is the experiment used when
/// the text does not name one.
RunConfig parse_config(std::string_view text,
                       ExperimentKind fallback = ExperimentKind::Simulate);

/// Reads the file; IoError if unreadable.
RunConfig load_config(const std::string& path,
                      ExperimentKind fallback = ExperimentKind::Simulate);

/// Every resolved field, defaults included.
nlohmann::json to_json(const RunConfig& config);

}  // namespace elbm

#endif  // ELBM_CONFIG_HPP_
