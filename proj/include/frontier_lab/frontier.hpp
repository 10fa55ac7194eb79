#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "frontier_lab/zipf.hpp"

namespace frontier_lab {

/// Per-pattern residuals q_1..q_K together with the frequency law that
/// weights them. Ranks beyond K (when the law has more support) count as
/// fully unlearned in every weighted sum.
struct ResidualProfile {
  std::vector<double> residuals;
  ZipfModel weights;

  std::size_t size() const { return residuals.size(); }
};

/// Validates q_k in [0, 1] and a non-empty vector.
ResidualProfile make_profile(std::vector<double> residuals, ZipfModel weights);

enum class Saturation { none, all_learned, all_unlearned };

struct FrontierExtraction {
  double delta = 0.5;
  std::uint64_t k_minus = 0;  // sup{k : q_k <= delta}, 0 if none
  std::uint64_t k_plus = 0;   // inf{k : q_k >= 1 - delta}, K + 1 if none
  double k_star = 0.0;
  Saturation saturation = Saturation::none;
};

/// Running maximum over rank; the greedy-bias envelope used before extraction.
std::vector<double> monotone_envelope(std::span<const double> residuals);

/// Transition boundaries and the effective frontier of a profile.
///
/// The profile is monotonized first. k_star is the geometric mean of the
/// delta and 1 - delta crossings, each refined by linear interpolation of q
/// in log k between the bracketing ranks. Fully learned profiles report
/// k_star = K, fully unlearned ones k_star = 1, both flagged.
FrontierExtraction extract_frontier(const ResidualProfile& profile, double delta = 0.5);

struct SandwichReport {
  double lower = 0.0;
  double actual = 0.0;
  double upper = 0.0;
  bool holds = false;
};

/// Tail-mass bounds on the weighted loss around the extracted frontier:
///   lower  = (1 - delta) * sum_{k > (1+eps) k*} p_k
///   actual = sum_k p_k q_k
///   upper  = delta * sum_{k <= (1-eps) k*} p_k + sum_{k > (1-eps) k*} p_k
SandwichReport sandwich_check(const ResidualProfile& profile, const FrontierExtraction& extraction,
                              double epsilon);

/// Weighted reducible loss sum_k p_k q_k including the unlearned mass past K.
double weighted_loss(const ResidualProfile& profile);

struct ProfileRow {
  std::uint64_t k;
  double p;
  double q;
};

/// `k,p_k,q_k` with a header row; values printed round-trip exact.
void write_profile_csv(const std::filesystem::path& path, std::span<const ProfileRow> rows);
void write_profile_csv(const std::filesystem::path& path, const ResidualProfile& profile);
std::vector<ProfileRow> read_profile_csv(const std::filesystem::path& path);

}  // namespace frontier_lab
