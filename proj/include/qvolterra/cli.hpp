#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qvolterra/serialize.hpp"

namespace qvolterra::cli {

enum ExitCode : int { kExitOk = 0, kExitViolation = 1, kExitConfigError = 2 };

struct RunOptions {
  std::optional<std::filesystem::path> config_path;
  std::optional<std::string> scenario;
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::pair<std::size_t, std::size_t>> emptiness;  // qset only
};

// Parsed run configuration. Fields are filled when present in the JSON.
struct ScenarioConfig {
  struct Study {
    SkewSpec base = SkewSpec::zero();
    std::optional<SimplexPoint> profile;
    std::vector<std::size_t> m, n, p;
    std::vector<SkewSpec> tails;          // tail comparison: exactly two tails
    std::vector<std::size_t> tail_n;      // truncation indices for the tail check
    std::optional<std::size_t> converge_m;
    double converge_eps = 1e-6;
  };

  Json source;  // resolved config, hashed into every report
  std::uint64_t seed = 0;
  std::optional<OperatorHandle> op;
  std::optional<SimplexPoint> initial;
  std::optional<SimplexPoint> second;
  std::size_t steps = 100;
  std::size_t window = kDefaultConvergenceWindow;
  std::size_t stride = 1;
  double tol = kDefaultConvergenceTol;
  std::optional<FaceIndexSet> face;
  std::optional<std::pair<std::size_t, std::size_t>> emptiness;
  std::optional<Study> study;
  std::vector<Index> plot_coords;
};

// Names accepted by --scenario.
std::vector<std::string> scenario_names();
Json scenario_config(const std::string& name);

// Scenario defaults, then the config file as a merge patch, then --seed.
Json resolve_config(const RunOptions& opts);

// Throws Error(kConfigError) naming the offending field.
ScenarioConfig parse_config(const Json& config);

// FNV-1a 64 of the canonical dump, as 16 hex digits.
std::string config_hash(const Json& config);

int cmd_apply(const ScenarioConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_iterate(const ScenarioConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_qset(const ScenarioConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_truncation_study(const ScenarioConfig& cfg, const std::filesystem::path& out, std::ostream& log);

// Resolves, parses and dispatches `command`; maps config and domain errors
// to exit status 2.
int run(const std::string& command, const RunOptions& opts, std::ostream& log, std::ostream& err);

}  // namespace qvolterra::cli
