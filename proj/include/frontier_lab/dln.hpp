#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "frontier_lab/frontier.hpp"
#include "frontier_lab/zipf.hpp"

namespace frontier_lab {

/// Depth-L deep linear network, one effective weight u_k per pattern, under
/// gradient flow on the frequency-weighted squared error. Targets follow
/// u*_k = target_scale * p_k^zeta.
struct DlnConfig {
  ZipfModel model;
  unsigned depth = 2;
  double zeta = 1.0;
  double eta = 1.0;
  /// Initial effective weight; <= 0 selects 1e-4 * min_k u*_k.
  double u0 = 0.0;
  double target_scale = 1.0;
};

/// Throws ConfigError on L < 2, zeta < 0, non-positive eta or scale, an
/// unbounded support, or u0 outside (0, min_k u*_k).
void validate(const DlnConfig& config);

double target_weight(const DlnConfig& config, std::uint64_t k);
double initial_weight(const DlnConfig& config);

/// Lambda = p * u*^{2 - 2/L}; q decays as exp(-2 eta L Lambda t) late in training.
double effective_rate(double p, double u_star, unsigned depth);

/// beta = 2 + zeta (2 - 2/L).
double beta_from_depth(double depth, double zeta);

struct FlowPoint {
  double t;
  double u;
  double q;  // (u - u*)^2 / u*^2
};

/// Integrates du/dt = eta L p u^{2-2/L} (u* - u) with adaptive Dormand-Prince
/// (local tolerance 1e-9 or tighter) and reports the state at `times`, which
/// must be non-decreasing and start at or after 0.
std::vector<FlowPoint> simulate_flow(const DlnConfig& config, std::uint64_t k, std::span<const double> times);

/// Same, on t = 0 followed by `points` log-spaced times in [t_end * 1e-6, t_end].
std::vector<FlowPoint> simulate_flow(const DlnConfig& config, std::uint64_t k, double t_end,
                                     std::size_t points = 512);

/// Depth-2 closed form: u* A e^{2 eta Lambda t} / (1 + A e^{2 eta Lambda t}),
/// Lambda = p u*, A = u0 / (u* - u0).
double logistic_flow(double u0, double u_star, double p, double eta, double t);

/// Time at which the flow of rank k first reaches residual q_target, from the
/// separated-variable integral of the ODE.
double time_to_residual(const DlnConfig& config, std::uint64_t k, double q_target);

struct RankRate {
  std::uint64_t k;
  double p;
  double rate;  // fitted -d log q / dt
};

struct BetaFit {
  double beta;
  double slope;  // d log(rate) / d log(p)
  std::vector<RankRate> rates;
};

/// Empirical implicit-bias exponent: fits the late-time decay rate of q for
/// each rank over q in [1e-8, 1e-2], regresses log rate on log p and returns
/// slope + 1. Each rank is sampled on 400 times spanning that window, cut
/// short at `t_end` when one is given. Needs at least
/// 4 ranks spanning 1.5 decades of p; throws InsufficientHorizonError if a
/// rank still has q > 0.1 at a caller-supplied t_end.
BetaFit recover_beta(const DlnConfig& config, std::span<const std::uint64_t> ranks,
                     std::optional<double> t_end = std::nullopt);

/// Residual profiles over every rank of the support, one per entry of
/// `times` (non-decreasing, >= 0).
std::vector<ResidualProfile> flow_profiles(const DlnConfig& config, std::span<const double> times);

/// `t,u,q` with a header row.
void write_trajectory_csv(const std::filesystem::path& path, std::span<const FlowPoint> points);

}  // namespace frontier_lab
