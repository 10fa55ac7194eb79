#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

namespace frontier_lab {

/// One measurement row: a resource setting, the loss it reached and where
/// its frontier sits.
struct SweepRecord {
  std::string sweep;
  double alpha = 0.0;
  std::string axis;  // model-N | data-D | compute-tau
  double value = 0.0;
  std::uint64_t seed = 0;
  double delta_loss = 0.0;
  double k_star = 0.0;
  std::uint64_t k_minus = 0;
  std::uint64_t k_plus = 0;
  std::uint64_t steps = 0;
  double wallclock_s = 0.0;
};

inline constexpr const char* kSweepHeader =
    "sweep,alpha,axis,value,seed,delta_L,k_star,k_minus,k_plus,steps,wallclock_s";

void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepRecord> records);

}  // namespace frontier_lab
