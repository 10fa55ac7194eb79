#include "frontier_lab/allocator.hpp"

#include <algorithm>
#include <cmath>

#include "frontier_lab/errors.hpp"

namespace frontier_lab {

double PowerTerm::operator()(double resource) const { return coefficient * std::pow(resource, -exponent); }

void validate(const BottleneckModel& model) {
  for (const PowerTerm* t : {&model.capacity, &model.data, &model.optimization}) {
    if (!(t->coefficient > 0.0) || !(t->exponent > 0.0)) {
      throw DomainError("bottleneck model: coefficients and exponents must be positive");
    }
  }
  if (!(model.flops_per_unit > 0.0)) throw DomainError("bottleneck model: flops_per_unit must be positive");
}

BottleneckModel bottleneck_from_theory(double alpha, double beta, double gamma, double A, double B, double G,
                                       double flops_per_unit) {
  if (!(alpha > 1.0) || !(beta > 0.0) || !(gamma > 0.0)) {
    throw DomainError("bottleneck_from_theory: need alpha > 1, beta > 0, gamma > 0");
  }
  BottleneckModel m{{A, gamma * (alpha - 1.0)},
                    {B, (alpha - 1.0) / alpha},
                    {G, (alpha - 1.0) / (alpha * beta)},
                    flops_per_unit};
  validate(m);
  return m;
}

double joint_loss(const BottleneckModel& model, double N, double D, double tau) {
  return std::max({model.capacity(N), model.data(D), model.optimization(tau)});
}

double additive_loss(const BottleneckModel& model, double N, double D, double tau) {
  return model.capacity(N) + model.data(D) + model.optimization(tau);
}

double turnover_tau(const BottleneckModel& model, double N, double D) {
  const double eps_stat = std::max(model.capacity(N), model.data(D));
  return std::pow(eps_stat / model.optimization.coefficient, -1.0 / model.optimization.exponent);
}

namespace {

// Solves A N^{-a} = B (C / (f N))^{-b} for N:
// N^{a+b} = (A / B) (C / f)^b.
double balance(const PowerTerm& cap, const PowerTerm& other, double C, double f) {
  const double a = cap.exponent;
  const double b = other.exponent;
  return std::exp((std::log(cap.coefficient / other.coefficient) + b * std::log(C / f)) / (a + b));
}

}  // namespace

KaplanPlan kaplan_optimum(const BottleneckModel& model, double C) {
  validate(model);
  if (!(C > 0.0)) throw DomainError("kaplan_optimum: budget must be positive");
  const double n = balance(model.capacity, model.optimization, C, model.flops_per_unit);
  return {n, C / (model.flops_per_unit * n), model.capacity(n)};
}

ChinchillaPlan chinchilla_optimum(const BottleneckModel& model, double C) {
  validate(model);
  if (!(C > 0.0)) throw DomainError("chinchilla_optimum: budget must be positive");
  const double n = balance(model.capacity, model.data, C, model.flops_per_unit);
  return {n, C / (model.flops_per_unit * n), model.capacity(n)};
}

double kaplan_exponent(const BottleneckModel& model) {
  return model.optimization.exponent / (model.capacity.exponent + model.optimization.exponent);
}

double chinchilla_exponent(const BottleneckModel& model) {
  return model.data.exponent / (model.capacity.exponent + model.data.exponent);
}

}  // namespace frontier_lab
