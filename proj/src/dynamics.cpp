#include "frontier_lab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "frontier_lab/alias_table.hpp"
#include "frontier_lab/errors.hpp"
#include "frontier_lab/numerics.hpp"

namespace frontier_lab {

namespace {

void check_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(std::string(what) + " must be positive and finite");
}

}  // namespace

KernelSpec KernelSpec::exponential(double rate, double beta) {
  KernelSpec k(KernelShape::exponential, rate, beta);
  k.check_shape();
  return k;
}

KernelSpec KernelSpec::rational(double order, double rate, double beta) {
  check_positive(order, "rational kernel order");
  KernelSpec k(KernelShape::rational, rate, beta);
  k.order_ = order;
  k.check_shape();
  return k;
}

KernelSpec KernelSpec::custom(std::vector<double> u, std::vector<double> g, double rate, double beta) {
  if (u.empty() || u.size() != g.size()) throw ConfigError("custom kernel: node vectors must match and be non-empty");
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] > (i ? u[i - 1] : 0.0))) throw ConfigError("custom kernel: u nodes must increase from 0");
    if (!(g[i] >= 0.0 && g[i] <= (i ? g[i - 1] : 1.0))) {
      throw ConfigError("custom kernel: g nodes must be non-increasing within [0, 1]");
    }
  }
  KernelSpec k(KernelShape::custom, rate, beta);
  k.nodes_u_ = std::move(u);
  k.nodes_g_ = std::move(g);
  k.check_shape();
  return k;
}

void KernelSpec::check_shape() const {
  check_positive(rate_, "kernel rate c");
  check_positive(beta_, "kernel bias beta");
  if ((*this)(0.0) != 1.0) throw ConfigError("kernel must satisfy g(0) = 1");
  double prev = 1.0;
  for (double u = 1e-6; u < 1e6; u *= 1.5) {
    const double g = (*this)(u);
    if (!(g <= prev) || g < 0.0) throw ConfigError("kernel must be non-increasing and non-negative");
    prev = g;
  }
}

double KernelSpec::operator()(double u) const {
  switch (shape_) {
    case KernelShape::exponential:
      return std::exp(-u);
    case KernelShape::rational:
      return std::pow(1.0 + u, -order_);
    case KernelShape::custom: {
      if (u >= nodes_u_.back()) return u == nodes_u_.back() ? nodes_g_.back() : 0.0;
      const auto it = std::upper_bound(nodes_u_.begin(), nodes_u_.end(), u);
      const std::size_t i = static_cast<std::size_t>(it - nodes_u_.begin());
      const double u0 = i ? nodes_u_[i - 1] : 0.0;
      const double g0 = i ? nodes_g_[i - 1] : 1.0;
      return g0 + (nodes_g_[i] - g0) * (u - u0) / (nodes_u_[i] - u0);
    }
  }
  return 0.0;
}

void validate(const DynamicsConfig& config) {
  if (!config.model.is_finite()) throw ConfigError("dynamics simulation needs a finite Zipf support");
  check_positive(config.eta, "eta");
  check_positive(config.lambda0, "lambda0");
  if (!std::isfinite(config.beta)) throw ConfigError("beta must be finite");
  if (config.samples_per_step < 1) throw ConfigError("samples_per_step must be >= 1");
  const auto p = config.model.probabilities(*config.model.support());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double step = config.eta * config.lambda0 * std::pow(p[i], config.beta - 1.0);
    if (!(step < 1.0)) {
      throw ConfigError("contraction factor 1 - eta*lambda_k <= 0 at rank " + std::to_string(i + 1));
    }
  }
}

ResidualProfile simulate_residuals(const DynamicsConfig& config) {
  validate(config);
  const auto p = config.model.probabilities(*config.model.support());
  std::vector<double> factor(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    factor[i] = 1.0 - config.eta * config.lambda0 * std::pow(p[i], config.beta - 1.0);
  }
  std::vector<double> q(p.size(), 1.0);
  const AliasTable table(p);
  std::mt19937_64 rng(config.seed);
  for (std::uint64_t t = 0; t < config.steps; ++t) {
    for (unsigned b = 0; b < config.samples_per_step; ++b) {
      const std::size_t k = table.sample(rng);
      q[k] *= factor[k];
    }
  }
  return make_profile(std::move(q), config.model);
}

double expected_residual(double p, double eta, double lambda0, double beta, double tau) {
  const double step = eta * lambda0 * std::pow(p, beta);
  if (!(step >= 0.0 && step < 1.0)) throw DomainError("expected_residual: contraction factor outside (0, 1]");
  if (tau == 0.0) return 1.0;
  return std::exp(tau * std::log1p(-step));
}

ResidualProfile expected_profile(const DynamicsConfig& config, std::uint64_t length) {
  const auto p = config.model.probabilities(length);
  std::vector<double> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    q[i] = expected_residual(p[i], config.eta, config.lambda0, config.beta, static_cast<double>(config.steps));
  }
  return make_profile(std::move(q), config.model);
}

double mellin(const KernelSpec& kernel, double s) {
  if (!(s > 0.0)) throw DomainError("mellin: s must be positive");
  using boost::math::quadrature::gauss_kronrod;
  constexpr double kTol = 1e-12;

  // (0, 1): u = e^{-t}. Once g(e^{-T}) is 1 to working precision the rest is
  // int_T^inf e^{-st} dt = e^{-sT} / s.
  const auto inner = [&](double t) { return std::exp(-s * t) * kernel(std::exp(-t)); };
  CompensatedSum head;
  double lo = 0.0;
  double hi = 1.0;
  while (true) {
    head.add(gauss_kronrod<double, 31>::integrate(inner, lo, hi, 15, kTol));
    lo = hi;
    hi *= 2.0;
    if (1.0 - kernel(std::exp(-lo)) < 1e-15 || lo > 700.0) break;
  }
  head.add(std::exp(-s * lo) / s);

  // (1, inf): u = e^{t}.
  const auto outer = [&](double t) { return std::exp(s * t) * kernel(std::exp(t)); };
  CompensatedSum tail;
  lo = 0.0;
  hi = 1.0;
  int quiet = 0;
  while (true) {
    const double piece = gauss_kronrod<double, 31>::integrate(outer, lo, hi, 15, kTol);
    tail.add(piece);
    const double scale = head.value() + tail.value();
    quiet = std::abs(piece) <= 1e-16 * scale ? quiet + 1 : 0;
    if (quiet >= 2) break;
    if (!std::isfinite(piece) || hi >= 512.0) {
      throw IntegrabilityError("mellin: integral diverges at s = " + std::to_string(s));
    }
    lo = hi;
    hi *= 2.0;
  }
  return head.value() + tail.value();
}

ComputePrefactor compute_prefactor(const ZipfModel& model, const KernelSpec& kernel) {
  const double alpha = model.alpha();
  const double beta = kernel.beta();
  if (!(alpha > 1.0)) throw DomainError("compute_prefactor: alpha must exceed 1");
  const double s = (alpha - 1.0) / (alpha * beta);
  const double factor = std::pow(model.z(), -1.0 / alpha) * std::pow(kernel.rate(), -s) * mellin(kernel, s) /
                        (alpha * beta);
  return {s, factor};
}

double asymptotic_loss(const ZipfModel& model, const KernelSpec& kernel, double tau) {
  if (!(tau >= 0.0)) throw DomainError("asymptotic_loss: tau must be non-negative");
  const double scale = kernel.rate() * tau;
  const double beta = kernel.beta();
  return weighted_residual_sum(model, [&](double p) { return kernel(scale * std::pow(p, beta)); });
}

}  // namespace frontier_lab
