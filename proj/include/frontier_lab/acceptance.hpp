#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "frontier_lab/nnlab.hpp"

namespace frontier_lab {

enum class CheckStatus { pass, fail, skip };

std::string to_string(CheckStatus status);

struct CheckResult {
  std::string id;
  std::string title;
  CheckStatus status = CheckStatus::fail;
  std::string measured;
  std::string target;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Skips every criterion that trains networks.
  bool quick = false;
  unsigned jobs = 1;
  std::uint64_t root_seed = 0;
  /// Seed indices of the data and model sweeps.
  std::vector<std::uint64_t> nn_seeds{0, 1, 2};
  /// Seed indices of the compute sweep (its runs are the longest).
  std::vector<std::uint64_t> compute_seeds{0};
  /// Base network config; the sweeps override their own axis.
  ExperimentConfig network;
  /// Sweep CSVs, profiles and verify.csv go here when set.
  std::optional<std::filesystem::path> artifact_dir;
  std::function<void(const std::string&)> log;
};

/// The lab's acceptance criteria, in a fixed order. Results are also passed
/// to `on_result` as soon as each one finishes.
std::vector<CheckResult> run_acceptance(const AcceptanceOptions& options,
                                        const std::function<void(const CheckResult&)>& on_result = {});

/// Grid of `points` log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

/// Default grids of the three network sweeps.
std::vector<double> default_sweep_grid(SweepAxis axis);

/// Actual training seed of seed index `index` under `root`.
std::uint64_t network_seed(std::uint64_t root, std::uint64_t index);

/// `id,status,measured,target,detail`.
void write_verify_csv(const std::filesystem::path& path, const std::vector<CheckResult>& results);

/// One human-readable line per result.
std::string format_result_line(const CheckResult& result);

}  // namespace frontier_lab
