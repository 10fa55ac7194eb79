#pragma once

#include <cstdint>
#include <vector>

#include "frontier_lab/frontier.hpp"
#include "frontier_lab/zipf.hpp"

namespace frontier_lab {

enum class KernelShape { exponential, rational, custom };

/// Self-similar learning-curve kernel: pattern k has residual
/// g(c * tau * p_k^beta) after tau steps.
class KernelSpec {
 public:
  /// g(u) = exp(-u)
  static KernelSpec exponential(double rate, double beta);
  /// g(u) = (1 + u)^{-order}
  static KernelSpec rational(double order, double rate, double beta);
  /// Tabulated g: piecewise linear through (0, 1) and the given nodes, zero
  /// past the last node. Nodes must be strictly increasing in u and
  /// non-increasing in g, with g in [0, 1].
  static KernelSpec custom(std::vector<double> u, std::vector<double> g, double rate, double beta);

  double operator()(double u) const;

  KernelShape shape() const { return shape_; }
  double rate() const { return rate_; }
  double beta() const { return beta_; }
  double order() const { return order_; }

 private:
  KernelSpec(KernelShape shape, double rate, double beta) : shape_(shape), rate_(rate), beta_(beta) {}
  void check_shape() const;

  KernelShape shape_;
  double rate_;
  double beta_;
  double order_ = 0.0;
  std::vector<double> nodes_u_;
  std::vector<double> nodes_g_;
};

/// Per-pattern SGD contraction model: on each step one pattern k is drawn
/// with probability p_k and its residual is multiplied by 1 - eta * lambda_k,
/// lambda_k = lambda0 * p_k^{beta - 1}.
struct DynamicsConfig {
  ZipfModel model;
  double eta = 0.1;
  double lambda0 = 1.0;
  double beta = 2.0;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  /// Independent draws per step. 1 is the single-sample regime; larger values
  /// model minibatches.
  unsigned samples_per_step = 1;
};

/// Throws ConfigError on infinite support, non-positive rates, or any
/// per-step contraction factor 1 - eta * lambda_k outside (0, 1).
void validate(const DynamicsConfig& config);

/// Stochastic residual trajectory end point, deterministic given the seed.
ResidualProfile simulate_residuals(const DynamicsConfig& config);

/// (1 - eta * lambda0 * p^beta)^tau; tends to exp(-c tau p^beta), c = eta * lambda0.
double expected_residual(double p, double eta, double lambda0, double beta, double tau);

/// Expected residuals of the first `length` ranks after config.steps steps.
ResidualProfile expected_profile(const DynamicsConfig& config, std::uint64_t length);

/// int_0^inf u^{s-1} g(u) du. The range is split at u = 1; (0, 1) is mapped by
/// u = e^{-t} and (1, inf) by u = e^{t}, each integrated panel by panel with
/// Gauss-Kronrod. Throws IntegrabilityError if the outer integral fails to
/// settle.
double mellin(const KernelSpec& kernel, double s);

struct ComputePrefactor {
  double s;       // loss exponent (alpha - 1) / (alpha beta)
  double factor;  // K in Delta L ~ K tau^{-s}
};

ComputePrefactor compute_prefactor(const ZipfModel& model, const KernelSpec& kernel);

/// sum_k p_k g(c tau p_k^beta).
double asymptotic_loss(const ZipfModel& model, const KernelSpec& kernel, double tau);

}  // namespace frontier_lab
