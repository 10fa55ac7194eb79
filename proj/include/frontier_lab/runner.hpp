#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "frontier_lab/acceptance.hpp"
#include "frontier_lab/config.hpp"

namespace frontier_lab {

inline constexpr const char* kCodeVersion = "frontier-lab 1.0.0";

struct RunRequest {
  std::string command;  // analytic | nn-sweep | dln | plan | verify
  Config config = Config::defaults();
  /// Exact artifact directory; otherwise <run.out_dir>/<timestamp>-<command>.
  std::optional<std::filesystem::path> run_dir;
  /// Overrides run.jobs.
  std::optional<unsigned> jobs;
};

struct RunOutcome {
  int exit_code = 0;
  std::filesystem::path run_dir;
  std::vector<std::filesystem::path> outputs;  // relative to run_dir
  std::vector<CheckResult> checks;             // verify only
};

const std::vector<std::string>& command_names();

/// Runs one command, writing its CSV/JSON artifacts and manifest.json into the
/// run directory. Progress and the verify table go to `out`.
RunOutcome run_command(const RunRequest& request, std::ostream& out);

/// Root seed: run.seed when set explicitly, else FRONTIER_LAB_SEED, else the
/// default run.seed.
std::uint64_t resolve_root_seed(const Config& config);

/// Runs quick `verify` twice into scratch directories under `scratch` and
/// compares every CSV byte for byte.
CheckResult determinism_check(const Config& config, unsigned jobs, const std::filesystem::path& scratch);

}  // namespace frontier_lab
