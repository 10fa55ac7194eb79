#pragma once

namespace frontier_lab {

/// One resource bottleneck eps(R) = coefficient * R^{-exponent}.
struct PowerTerm {
  double coefficient;
  double exponent;

  double operator()(double resource) const;
};

/// Joint loss model max(eps_N, eps_D, eps_tau) with compute C = flops_per_unit * N * (tau or D).
struct BottleneckModel {
  PowerTerm capacity;      // A N^{-alpha_N}
  PowerTerm data;          // B D^{-alpha_D}
  PowerTerm optimization;  // G tau^{-alpha_tau}
  double flops_per_unit = 6.0;
};

/// Throws DomainError unless every coefficient, exponent and flops_per_unit is positive.
void validate(const BottleneckModel& model);

/// Exponents tied to the data law: alpha_N = gamma (alpha - 1),
/// alpha_D = (alpha - 1) / alpha, alpha_tau = (alpha - 1) / (alpha beta).
BottleneckModel bottleneck_from_theory(double alpha, double beta, double gamma, double A, double B, double G,
                                       double flops_per_unit = 6.0);

double joint_loss(const BottleneckModel& model, double N, double D, double tau);

/// Sum of the three bottlenecks; the max-sum bracket is joint <= additive <= 3 joint.
double additive_loss(const BottleneckModel& model, double N, double D, double tau);

/// tau* where G tau^{-alpha_tau} meets max(eps_N(N), eps_D(D)).
double turnover_tau(const BottleneckModel& model, double N, double D);

struct KaplanPlan {
  double n_opt;
  double tau_opt;
  double loss;
};

/// Data-abundant optimum: balances eps_N(N) = eps_tau(C / (f N)).
KaplanPlan kaplan_optimum(const BottleneckModel& model, double C);

struct ChinchillaPlan {
  double n_opt;
  double d_opt;
  double loss;
};

/// Data-limited optimum: balances eps_N(N) = eps_D(C / (f N)).
ChinchillaPlan chinchilla_optimum(const BottleneckModel& model, double C);

/// d log N_opt / d log C in each regime.
double kaplan_exponent(const BottleneckModel& model);
double chinchilla_exponent(const BottleneckModel& model);

}  // namespace frontier_lab
