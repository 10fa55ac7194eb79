#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace frontier_lab {

/// Walker/Vose alias table: O(n) construction, O(1) draws from a discrete
/// distribution given by non-negative weights.
class AliasTable {
 public:
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const { return prob_.size(); }

  /// Zero-based index drawn with probability weight[i] / sum(weights).
  template <typename Rng>
  std::size_t sample(Rng& rng) const {
    const std::uint64_t bits = rng();
    const std::size_t column = static_cast<std::size_t>((bits >> 11) % prob_.size());
    const double coin = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return coin < prob_[column] ? column : alias_[column];
  }

  /// Probability mass the table actually encodes for index i (for tests).
  double encoded_probability(std::size_t i) const;

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

}  // namespace frontier_lab
