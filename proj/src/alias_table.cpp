#include "frontier_lab/alias_table.hpp"

#include <numeric>

#include "frontier_lab/errors.hpp"

namespace frontier_lab {

AliasTable::AliasTable(std::span<const double> weights) : prob_(weights.size()), alias_(weights.size()) {
  const std::size_t n = weights.size();
  if (n == 0) throw DomainError("alias table: empty weight vector");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw DomainError("alias table: weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw DomainError("alias table: weights sum to zero");

  std::vector<double> scaled(n);
  std::vector<std::size_t> small;
  std::vector<std::size_t> large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (std::size_t i : large) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
  for (std::size_t i : small) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
}

double AliasTable::encoded_probability(std::size_t i) const {
  const double n = static_cast<double>(prob_.size());
  double mass = prob_[i];
  for (std::size_t c = 0; c < prob_.size(); ++c) {
    if (alias_[c] == i && c != i) mass += 1.0 - prob_[c];
  }
  return mass / n;
}

}  // namespace frontier_lab
