#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace frontier_lab {

/// Zipfian pattern-frequency law p_k = k^{-alpha} / Z(alpha) over either a
/// finite support {1..K} or all positive ranks.
class ZipfModel {
 public:
  /// Single-rank law (p_1 = 1); placeholder for default-constructed holders.
  ZipfModel() = default;

  double alpha() const { return alpha_; }
  double z() const { return z_; }
  /// Finite cutoff K, or nullopt for unbounded support.
  std::optional<std::uint64_t> support() const { return support_; }
  bool is_finite() const { return support_.has_value(); }

  /// p_k; ranks beyond a finite support have probability 0. Accepts real k so
  /// that continuum approximations can share the same normalization.
  double probability(double k) const;

  /// p_1..p_n (n clipped to a finite support).
  std::vector<double> probabilities(std::uint64_t n) const;

 private:
  friend ZipfModel make_zipf(double alpha, std::optional<std::uint64_t> support);
  ZipfModel(double alpha, std::optional<std::uint64_t> support, double z)
      : alpha_(alpha), support_(support), z_(z) {}

  double alpha_ = 1.0;
  std::optional<std::uint64_t> support_ = 1;
  double z_ = 1.0;
};

/// alpha > 0 for finite support, alpha > 1 for unbounded (nullopt) support.
/// Throws DomainError / DivergentNormalizationError otherwise.
ZipfModel make_zipf(double alpha, std::optional<std::uint64_t> support);

/// Sum_{k > threshold} p_k. Thresholds at or beyond a finite support give 0.
double tail_mass(const ZipfModel& model, std::uint64_t threshold);

/// Reducible loss of a sharp frontier at k_star, i.e. tail_mass(model, k_star).
double frontier_loss(const ZipfModel& model, std::uint64_t k_star);

/// Sum_k p_k * residual(p_k) over the whole support.
///
/// Finite support is summed directly. Unbounded support is summed exactly over
/// the first `direct_terms` ranks and the remainder is taken from the
/// midpoint-rule integral with its first Euler-Maclaurin correction; this
/// requires residual(p) -> 1 as p -> 0.
double weighted_residual_sum(const ZipfModel& model,
                             const std::function<double(double)>& residual,
                             std::uint64_t direct_terms = 100000);

namespace detail {

// Integral-test bounds on Sum_{k > n} k^{-alpha} for a convex summand:
// lower = int_{n+1}^inf + f(n+1)/2 (trapezoid), upper = int_{n+1/2}^inf.
struct RemainderBracket {
  double lower;
  double upper;
};
RemainderBracket power_remainder(double alpha, double n);

}  // namespace detail

}  // namespace frontier_lab
