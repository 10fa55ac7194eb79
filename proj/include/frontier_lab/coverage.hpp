#pragma once

#include <cstdint>

#include "frontier_lab/frontier.hpp"
#include "frontier_lab/zipf.hpp"

namespace frontier_lab {

/// Data-limited learning: a pattern counts as learned once it has been seen
/// at least `threshold` times in `dataset_size` i.i.d. draws.
struct CoverageConfig {
  ZipfModel model;
  double dataset_size = 0.0;  // D
  unsigned threshold = 1;     // m
};

/// Throws DomainError unless D >= 0 and m >= 1.
void validate(const CoverageConfig& config);

/// (1 - p)^D, evaluated as exp(D log1p(-p)).
double residual_proxy(double p, double dataset_size);

/// Pr[Binomial(D, p) < m], summed in log space by the ratio recursion of
/// consecutive binomial terms. Returns exactly 1 when m > D.
double residual_proxy_m(double p, double dataset_size, unsigned threshold);

/// sum_k p_k Pr[X_k < m].
double coverage_loss(const CoverageConfig& config);

/// Real rank solving D p_k = m, i.e. (D / (Z m))^{1/alpha}.
double coverage_frontier(const CoverageConfig& config);

/// q_k = residual_proxy_m(p_k, D, m) for k = 1..length.
ResidualProfile coverage_profile(const CoverageConfig& config, std::uint64_t length);

}  // namespace frontier_lab
