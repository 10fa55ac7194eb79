#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frontier_lab/frontier.hpp"
#include "frontier_lab/sweep_record.hpp"

namespace frontier_lab {

/// How the squared error of a batch is reduced to a scalar.
enum class LossReduction {
  /// Mean over batch and output coordinates, sum_i (f_i - y_i)^2 / (B K).
  element_mean,
  /// Mean over the batch of ||f - y||^2.
  sample_sum,
};

/// Synthetic identity task: one-hot token e_k -> target e_k, tokens drawn
/// from a Zipf law over `vocab` ranks, learned by f(x) = W2 ReLU(W1 x + b)
/// with momentum SGD on the squared error.
struct ExperimentConfig {
  std::uint64_t vocab = 1000;
  double alpha = 1.5;
  std::uint64_t hidden = 2000;
  /// Fixed training multiset size; nullopt resamples every batch.
  std::optional<std::uint64_t> dataset;
  std::uint64_t steps = 10000;
  double lr = 0.1;
  double momentum = 0.9;
  std::uint64_t batch = 64;
  double init_std = 0.1;
  std::uint64_t seed = 0;
  /// Steps (<= steps) at which to record an additional snapshot.
  std::vector<std::uint64_t> checkpoints;
  double frontier_delta = 0.5;
  LossReduction reduction = LossReduction::element_mean;
};

/// Throws ConfigError when an invariant of the experiment is violated.
void validate(const ExperimentConfig& config);

struct ModelState {
  Eigen::MatrixXd w1;  // hidden x vocab
  Eigen::VectorXd bias;
  Eigen::MatrixXd w2;  // vocab x hidden
  Eigen::MatrixXd v1;
  Eigen::VectorXd vb;
  Eigen::MatrixXd v2;
};

ModelState init_state(const ExperimentConfig& config);

inline constexpr double kLoggedResidualCap = 1.5;

struct Snapshot {
  std::uint64_t step = 0;
  /// (f(e_k)_k - 1)^2 clamped to [0, 1.5]; what the profile CSVs record.
  std::vector<double> logged_residuals;
  /// sum_k p_k * logged residual.
  double delta_loss = 0.0;
  /// sum_k p_k sum_{i != k} f(e_k)_i^2, reported separately from delta_loss.
  double off_diagonal = 0.0;
  /// Residuals clamped to [0, 1]; the input to frontier extraction.
  ResidualProfile profile;
  FrontierExtraction frontier;
  /// Spearman correlation between rank and the isotonic fit of the logged
  /// residuals.
  double greedy_spearman = 0.0;
};

struct TrainResult {
  /// Requested checkpoints in increasing order, then the final state.
  std::vector<Snapshot> snapshots;
  /// Loss of every training batch under the configured reduction, in order.
  std::vector<double> batch_loss;

  const Snapshot& final_snapshot() const { return snapshots.back(); }
};

/// Residual readout of a network state on every vocabulary token.
Snapshot evaluate(const ModelState& state, const ExperimentConfig& config, std::uint64_t step);

/// Runs config.steps momentum-SGD steps from init_state(config).
/// Deterministic given config.seed. Throws DivergenceError naming the step on
/// non-finite parameters.
TrainResult train_run(const ExperimentConfig& config);

/// Same, starting from (and updating) an explicit state.
TrainResult train_run(const ExperimentConfig& config, ModelState& state);

enum class SweepAxis { model_n, data_d, compute_tau };

std::string to_string(SweepAxis axis);
std::string to_string(LossReduction reduction);
LossReduction parse_reduction(const std::string& name);
SweepAxis parse_axis(const std::string& name);

/// Config of one sweep cell. model-N sets the hidden width with fresh
/// resampling; data-D fixes the dataset and trains 10 epochs,
/// tau = 10 * ceil(D / batch); compute-tau sets the step count with fresh
/// resampling.
ExperimentConfig cell_config(const ExperimentConfig& base, SweepAxis axis, double value);

struct SweepCell {
  SweepRecord record;
  Snapshot snapshot;
};

struct SweepOptions {
  std::string name = "sweep";
  unsigned jobs = 1;
  /// When set, per-cell profiles are written here as
  /// <axis>_<value>_seed<seed>.csv.
  std::optional<std::filesystem::path> profile_dir;
  /// Record wall-clock seconds per cell (the one nondeterministic column).
  bool record_wallclock = true;
};

/// Every (grid value, seed) cell of one axis. A compute sweep trains one run
/// per seed to the largest step count and reads the other grid values from
/// checkpoints of that run. Results are ordered by (value, seed).
std::vector<SweepCell> sweep(const ExperimentConfig& base, SweepAxis axis, const std::vector<double>& grid,
                             const std::vector<std::uint64_t>& seeds, const SweepOptions& options = {});

/// Median delta_loss (and k_star) per grid value across seeds.
struct SweepSummary {
  double value;
  double delta_loss;
  double k_star;
};
std::vector<SweepSummary> summarize(const std::vector<SweepCell>& cells);

/// Profile CSV rows of a snapshot: k, p_k and the logged residual.
void write_snapshot_csv(const std::filesystem::path& path, const Snapshot& snapshot);

}  // namespace frontier_lab
