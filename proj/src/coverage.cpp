#include "frontier_lab/coverage.hpp"

#include <cmath>
#include <string>

#include "frontier_lab/errors.hpp"
#include "frontier_lab/numerics.hpp"

namespace frontier_lab {

void validate(const CoverageConfig& config) {
  if (!(config.dataset_size >= 0.0) || !std::isfinite(config.dataset_size)) {
    throw DomainError("coverage: dataset size must be a finite non-negative count");
  }
  if (config.threshold < 1) throw DomainError("coverage: occurrence threshold must be >= 1");
}

double residual_proxy(double p, double dataset_size) {
  if (dataset_size == 0.0) return 1.0;
  if (p >= 1.0) return 0.0;
  return std::exp(dataset_size * std::log1p(-p));
}

double residual_proxy_m(double p, double dataset_size, unsigned threshold) {
  if (threshold < 1) throw DomainError("residual_proxy_m: threshold must be >= 1");
  if (static_cast<double>(threshold) > dataset_size) return 1.0;
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return 0.0;

  // log C(D, j) p^j (1-p)^(D-j), advanced by the ratio (D-j)/(j+1) * p/(1-p).
  const double log_odds = std::log(p) - std::log1p(-p);
  double log_term = dataset_size * std::log1p(-p);
  double log_total = log_term;
  for (unsigned j = 0; j + 1 < threshold; ++j) {
    log_term += std::log((dataset_size - j) / (j + 1.0)) + log_odds;
    log_total = log_add_exp(log_total, log_term);
  }
  return std::min(1.0, std::exp(log_total));
}

double coverage_loss(const CoverageConfig& config) {
  validate(config);
  if (config.dataset_size == 0.0) return 1.0;
  const double D = config.dataset_size;
  const unsigned m = config.threshold;
  return weighted_residual_sum(config.model, [D, m](double p) { return residual_proxy_m(p, D, m); });
}

double coverage_frontier(const CoverageConfig& config) {
  validate(config);
  const double alpha = config.model.alpha();
  return std::pow(config.dataset_size / (config.model.z() * config.threshold), 1.0 / alpha);
}

ResidualProfile coverage_profile(const CoverageConfig& config, std::uint64_t length) {
  validate(config);
  const auto p = config.model.probabilities(length);
  std::vector<double> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    q[i] = residual_proxy_m(p[i], config.dataset_size, config.threshold);
  }
  return make_profile(std::move(q), config.model);
}

}  // namespace frontier_lab
