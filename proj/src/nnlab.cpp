#include "frontier_lab/nnlab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "frontier_lab/alias_table.hpp"
#include "frontier_lab/csv_io.hpp"
#include "frontier_lab/errors.hpp"
#include "frontier_lab/fitting.hpp"
#include "frontier_lab/numerics.hpp"
#include "frontier_lab/seeding.hpp"
#include "frontier_lab/worker_pool.hpp"

namespace frontier_lab {

namespace {

ZipfModel token_law(const ExperimentConfig& config) { return make_zipf(config.alpha, config.vocab); }

// Batch of token ids with multiplicities, sorted by id.
struct TokenCounts {
  std::vector<Eigen::Index> ids;
  std::vector<double> counts;
  std::size_t total = 0;

  void assign(std::vector<std::size_t>& draws) {
    std::sort(draws.begin(), draws.end());
    ids.clear();
    counts.clear();
    for (std::size_t i = 0; i < draws.size();) {
      std::size_t j = i;
      while (j < draws.size() && draws[j] == draws[i]) ++j;
      ids.push_back(static_cast<Eigen::Index>(draws[i]));
      counts.push_back(static_cast<double>(j - i));
      i = j;
    }
    total = draws.size();
  }
};

// Fisher-Yates with the lab's own uniform draw so the order is the same on
// every standard library.
template <typename Rng>
void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
    std::swap(v[i - 1], v[std::min(j, i - 1)]);
  }
}

// Supplies the token ids of successive batches.
class BatchSource {
 public:
  BatchSource(const ExperimentConfig& config, const AliasTable& table)
      : config_(config), table_(table), rng_(derive_seed(config.seed, 0, "nnlab/batches")) {
    if (config.dataset) {
      std::mt19937_64 data_rng(derive_seed(config.seed, 0, "nnlab/dataset"));
      dataset_.resize(*config.dataset);
      for (auto& t : dataset_) t = table_.sample(data_rng);
      order_ = dataset_;
      cursor_ = order_.size();  // forces a shuffle before the first batch
    }
  }

  void next(std::vector<std::size_t>& out) {
    out.clear();
    if (!config_.dataset) {
      for (std::uint64_t i = 0; i < config_.batch; ++i) out.push_back(table_.sample(rng_));
      return;
    }
    if (cursor_ >= order_.size()) {
      order_ = dataset_;
      std::mt19937_64 epoch_rng(derive_seed(config_.seed, epoch_++, "nnlab/epoch"));
      shuffle(order_, epoch_rng);
      cursor_ = 0;
    }
    const std::size_t end = std::min<std::size_t>(order_.size(), cursor_ + config_.batch);
    out.assign(order_.begin() + static_cast<std::ptrdiff_t>(cursor_), order_.begin() + static_cast<std::ptrdiff_t>(end));
    cursor_ = end;
  }

 private:
  const ExperimentConfig& config_;
  const AliasTable& table_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> dataset_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
  std::uint64_t epoch_ = 0;
};

bool all_finite(const ModelState& s) {
  return s.w1.allFinite() && s.w2.allFinite() && s.bias.allFinite() && s.v1.allFinite() && s.v2.allFinite() &&
         s.vb.allFinite();
}

}  // namespace

void validate(const ExperimentConfig& config) {
  if (config.vocab < 2) throw ConfigError("nnlab: vocab must be >= 2");
  if (config.hidden < 1) throw ConfigError("nnlab: hidden must be >= 1");
  if (config.batch < 1) throw ConfigError("nnlab: batch must be >= 1");
  if (!(config.lr > 0.0)) throw ConfigError("nnlab: lr must be positive");
  if (!(config.momentum >= 0.0 && config.momentum < 1.0)) throw ConfigError("nnlab: momentum must lie in [0, 1)");
  if (!(config.init_std > 0.0)) throw ConfigError("nnlab: init_std must be positive");
  if (!(config.alpha > 0.0)) throw ConfigError("nnlab: alpha must be positive");
  if (config.dataset && *config.dataset < 1) throw ConfigError("nnlab: dataset size must be >= 1");
  if (!(config.frontier_delta > 0.0 && config.frontier_delta <= 0.5)) {
    throw ConfigError("nnlab: frontier_delta must lie in (0, 0.5]");
  }
}

ModelState init_state(const ExperimentConfig& config) {
  validate(config);
  const auto K = static_cast<Eigen::Index>(config.vocab);
  const auto N = static_cast<Eigen::Index>(config.hidden);
  std::mt19937_64 rng(derive_seed(config.seed, 0, "nnlab/init"));
  std::normal_distribution<double> normal(0.0, config.init_std);
  ModelState s;
  s.w1.resize(N, K);
  s.w2.resize(K, N);
  for (Eigen::Index j = 0; j < K; ++j)
    for (Eigen::Index i = 0; i < N; ++i) s.w1(i, j) = normal(rng);
  for (Eigen::Index j = 0; j < N; ++j)
    for (Eigen::Index i = 0; i < K; ++i) s.w2(i, j) = normal(rng);
  s.bias = Eigen::VectorXd::Zero(N);
  s.v1 = Eigen::MatrixXd::Zero(N, K);
  s.v2 = Eigen::MatrixXd::Zero(K, N);
  s.vb = Eigen::VectorXd::Zero(N);
  return s;
}

Snapshot evaluate(const ModelState& state, const ExperimentConfig& config, std::uint64_t step) {
  const ZipfModel law = token_law(config);
  const auto p = law.probabilities(config.vocab);
  const Eigen::MatrixXd hidden = (state.w1.colwise() + state.bias).cwiseMax(0.0);
  const Eigen::MatrixXd out = state.w2 * hidden;  // column k is f(e_k)

  Snapshot snap;
  snap.step = step;
  snap.logged_residuals.resize(p.size());
  std::vector<double> clamped(p.size());
  CompensatedSum loss;
  CompensatedSum off;
  for (std::size_t k = p.size(); k-- > 0;) {
    const auto col = static_cast<Eigen::Index>(k);
    const double fk = out(col, col);
    const double q = (fk - 1.0) * (fk - 1.0);
    snap.logged_residuals[k] = std::min(q, kLoggedResidualCap);
    clamped[k] = std::min(q, 1.0);
    loss.add(p[k] * snap.logged_residuals[k]);
    off.add(p[k] * (out.col(col).squaredNorm() - fk * fk));
  }
  snap.delta_loss = loss.value();
  snap.off_diagonal = off.value();
  snap.profile = make_profile(std::move(clamped), law);
  snap.frontier = extract_frontier(snap.profile, config.frontier_delta);

  std::vector<double> ranks(p.size());
  std::iota(ranks.begin(), ranks.end(), 1.0);
  snap.greedy_spearman = spearman(ranks, isotonic_fit(snap.logged_residuals));
  return snap;
}

TrainResult train_run(const ExperimentConfig& config) {
  ModelState state = init_state(config);
  return train_run(config, state);
}

TrainResult train_run(const ExperimentConfig& config, ModelState& state) {
  validate(config);
  const ZipfModel law = token_law(config);
  const auto p = law.probabilities(config.vocab);
  const AliasTable table(p);
  BatchSource source(config, table);

  std::vector<std::uint64_t> checkpoints;
  for (auto c : config.checkpoints) {
    if (c < config.steps) checkpoints.push_back(c);
  }
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  auto next_checkpoint = checkpoints.begin();

  const auto N = state.w1.rows();
  const double lr = config.lr;
  const double mu = config.momentum;
  constexpr Eigen::Index kColumnBlock = 64;

  TrainResult result;
  result.batch_loss.reserve(config.steps);
  std::vector<std::size_t> draws;
  TokenCounts batch;
  Eigen::MatrixXd pre, hid, err, grad_hidden;

  // A W1 column only receives gradient when its token is sampled. In between,
  // its momentum decays geometrically; that drift is applied in closed form
  // when the column is next read.
  std::vector<std::uint64_t> applied(static_cast<std::size_t>(state.w1.cols()), 0);
  const auto catch_up = [&](Eigen::Index j, std::uint64_t now) {
    const std::uint64_t n = now - applied[static_cast<std::size_t>(j)];
    if (n == 0) return;
    const double decay = std::pow(mu, static_cast<double>(n));
    state.w1.col(j) -= (lr * mu * (1.0 - decay) / (1.0 - mu)) * state.v1.col(j);
    state.v1.col(j) *= decay;
    applied[static_cast<std::size_t>(j)] = now;
  };
  const auto flush = [&](std::uint64_t now) {
    for (Eigen::Index j = 0; j < state.w1.cols(); ++j) catch_up(j, now);
  };

  for (std::uint64_t step = 0; step < config.steps; ++step) {
    while (next_checkpoint != checkpoints.end() && *next_checkpoint == step) {
      flush(step);
      result.snapshots.push_back(evaluate(state, config, step));
      ++next_checkpoint;
    }
    source.next(draws);
    batch.assign(draws);
    const auto u = static_cast<Eigen::Index>(batch.ids.size());
    const double inv_batch = 1.0 / static_cast<double>(batch.total);
    const double scale =
        config.reduction == LossReduction::element_mean ? inv_batch / static_cast<double>(config.vocab) : inv_batch;

    pre.resize(N, u);
    for (Eigen::Index i = 0; i < u; ++i) {
      catch_up(batch.ids[i], step);
      pre.col(i) = state.w1.col(batch.ids[i]) + state.bias;
    }
    hid = pre.cwiseMax(0.0);

    // err = d(batch loss) / df for each distinct token.
    err.noalias() = state.w2 * hid;
    double batch_loss = 0.0;
    for (Eigen::Index i = 0; i < u; ++i) {
      err(batch.ids[i], i) -= 1.0;
      const double c = batch.counts[i];
      batch_loss += c * err.col(i).squaredNorm();
      err.col(i) *= 2.0 * c * scale;
    }
    batch_loss *= scale;
    result.batch_loss.push_back(batch_loss);
    if (!std::isfinite(batch_loss)) {
      throw DivergenceError("nnlab: non-finite loss at step " + std::to_string(step));
    }

    grad_hidden.noalias() = state.w2.transpose() * err;
    grad_hidden = grad_hidden.cwiseProduct((pre.array() > 0.0).cast<double>().matrix());

    // W2: v = mu v + err hid^T; w -= lr v, block by block to stay in cache.
    for (Eigen::Index c0 = 0; c0 < N; c0 += kColumnBlock) {
      const Eigen::Index w = std::min(kColumnBlock, N - c0);
      auto v = state.v2.middleCols(c0, w);
      v *= mu;
      v.noalias() += err * hid.middleRows(c0, w).transpose();
      state.w2.middleCols(c0, w) -= lr * v;
    }
    // W1 and b: gradient lives on the sampled columns only.
    for (Eigen::Index i = 0; i < u; ++i) {
      const Eigen::Index j = batch.ids[i];
      state.v1.col(j) = mu * state.v1.col(j) + grad_hidden.col(i);
      state.w1.col(j) -= lr * state.v1.col(j);
      applied[static_cast<std::size_t>(j)] = step + 1;
    }
    state.vb = mu * state.vb + grad_hidden.rowwise().sum();
    state.bias -= lr * state.vb;

    if ((step + 1) % 500 == 0 && !all_finite(state)) {
      throw DivergenceError("nnlab: non-finite parameters at step " + std::to_string(step + 1));
    }
  }
  flush(config.steps);
  if (!all_finite(state)) throw DivergenceError("nnlab: non-finite parameters at step " + std::to_string(config.steps));
  while (next_checkpoint != checkpoints.end()) {
    result.snapshots.push_back(evaluate(state, config, *next_checkpoint));
    ++next_checkpoint;
  }
  result.snapshots.push_back(evaluate(state, config, config.steps));
  return result;
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::model_n:
      return "model-N";
    case SweepAxis::data_d:
      return "data-D";
    case SweepAxis::compute_tau:
      return "compute-tau";
  }
  return "?";
}

std::string to_string(LossReduction reduction) {
  return reduction == LossReduction::element_mean ? "mean" : "sum";
}

LossReduction parse_reduction(const std::string& name) {
  if (name == "mean") return LossReduction::element_mean;
  if (name == "sum") return LossReduction::sample_sum;
  throw UsageError("unknown loss reduction '" + name + "' (mean, sum)");
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "model-N") return SweepAxis::model_n;
  if (name == "data-D") return SweepAxis::data_d;
  if (name == "compute-tau") return SweepAxis::compute_tau;
  throw UsageError("unknown sweep axis '" + name + "' (model-N, data-D, compute-tau)");
}

ExperimentConfig cell_config(const ExperimentConfig& base, SweepAxis axis, double value) {
  ExperimentConfig c = base;
  c.checkpoints.clear();
  const auto n = static_cast<std::uint64_t>(std::llround(value));
  switch (axis) {
    case SweepAxis::model_n:
      c.hidden = n;
      c.dataset.reset();
      break;
    case SweepAxis::data_d:
      c.dataset = n;
      c.steps = 10 * ((n + c.batch - 1) / c.batch);
      break;
    case SweepAxis::compute_tau:
      c.steps = n;
      c.dataset.reset();
      break;
  }
  return c;
}

namespace {

std::string cell_file_name(SweepAxis axis, double value, std::uint64_t seed) {
  return to_string(axis) + "_" + std::to_string(std::llround(value)) + "_seed" + std::to_string(seed) + ".csv";
}

}  // namespace

std::vector<SweepCell> sweep(const ExperimentConfig& base, SweepAxis axis, const std::vector<double>& grid,
                             const std::vector<std::uint64_t>& seeds, const SweepOptions& options) {
  if (grid.size() < 4) throw ConfigError("sweep: grid needs at least 4 values");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ConfigError("sweep: grid must be strictly increasing");
  }
  if (seeds.empty()) throw ConfigError("sweep: at least one seed required");
  if (options.profile_dir) std::filesystem::create_directories(*options.profile_dir);

  // Jobs are (value, seed) cells, or one job per seed for compute sweeps.
  const bool shared_runs = axis == SweepAxis::compute_tau;
  const std::size_t n_jobs = shared_runs ? seeds.size() : grid.size() * seeds.size();
  std::vector<SweepCell> cells(grid.size() * seeds.size());

  const auto make_cell = [&](std::size_t gi, std::size_t si, const ExperimentConfig& cfg, Snapshot snap,
                             double seconds) {
    SweepCell& cell = cells[gi * seeds.size() + si];
    cell.record.sweep = options.name;
    cell.record.alpha = cfg.alpha;
    cell.record.axis = to_string(axis);
    cell.record.value = grid[gi];
    cell.record.seed = seeds[si];
    cell.record.delta_loss = snap.delta_loss;
    cell.record.k_star = snap.frontier.k_star;
    cell.record.k_minus = snap.frontier.k_minus;
    cell.record.k_plus = snap.frontier.k_plus;
    cell.record.steps = snap.step;
    cell.record.wallclock_s = options.record_wallclock ? seconds : 0.0;
    if (options.profile_dir) {
      write_snapshot_csv(*options.profile_dir / cell_file_name(axis, grid[gi], seeds[si]), snap);
    }
    cell.snapshot = std::move(snap);
  };

  parallel_for(n_jobs, options.jobs, [&](std::size_t job) {
    const auto start = std::chrono::steady_clock::now();
    const auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    try {
      if (shared_runs) {
        const std::size_t si = job;
        ExperimentConfig cfg = cell_config(base, axis, grid.back());
        cfg.seed = seeds[si];
        for (double v : grid) cfg.checkpoints.push_back(static_cast<std::uint64_t>(std::llround(v)));
        TrainResult run = train_run(cfg);
        const double seconds = elapsed();
        for (std::size_t gi = 0; gi < grid.size(); ++gi) {
          const auto step = static_cast<std::uint64_t>(std::llround(grid[gi]));
          auto it = std::find_if(run.snapshots.begin(), run.snapshots.end(),
                                 [&](const Snapshot& s) { return s.step == step; });
          // Time attributed pro rata to the prefix of the shared run.
          make_cell(gi, si, cfg, std::move(*it), seconds * static_cast<double>(step) / static_cast<double>(cfg.steps));
        }
        return;
      }
      const std::size_t gi = job / seeds.size();
      const std::size_t si = job % seeds.size();
      ExperimentConfig cfg = cell_config(base, axis, grid[gi]);
      cfg.seed = seeds[si];
      TrainResult run = train_run(cfg);
      make_cell(gi, si, cfg, std::move(run.snapshots.back()), elapsed());
    } catch (const DivergenceError& e) {
      throw DivergenceError(std::string(e.what()) + " [axis=" + to_string(axis) + " cell job " +
                            std::to_string(job) + " alpha=" + format_double(base.alpha) +
                            " hidden=" + std::to_string(base.hidden) + " lr=" + format_double(base.lr) + "]");
    }
  });
  return cells;
}

std::vector<SweepSummary> summarize(const std::vector<SweepCell>& cells) {
  std::map<double, std::pair<std::vector<double>, std::vector<double>>> by_value;
  for (const auto& c : cells) {
    by_value[c.record.value].first.push_back(c.record.delta_loss);
    by_value[c.record.value].second.push_back(c.record.k_star);
  }
  const auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  std::vector<SweepSummary> out;
  for (auto& [value, series] : by_value) out.push_back({value, median(series.first), median(series.second)});
  return out;
}

void write_snapshot_csv(const std::filesystem::path& path, const Snapshot& snapshot) {
  const auto p = snapshot.profile.weights.probabilities(snapshot.logged_residuals.size());
  std::vector<ProfileRow> rows(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) rows[i] = {i + 1, p[i], snapshot.logged_residuals[i]};
  write_profile_csv(path, rows);
}

void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepRecord> records) {
  CsvWriter w(path, {"sweep", "alpha", "axis", "value", "seed", "delta_L", "k_star", "k_minus", "k_plus", "steps",
                     "wallclock_s"});
  for (const auto& r : records) {
    w.field(r.sweep)
        .field(r.alpha)
        .field(r.axis)
        .field(r.value)
        .field(static_cast<unsigned long long>(r.seed))
        .field(r.delta_loss)
        .field(r.k_star)
        .field(static_cast<unsigned long long>(r.k_minus))
        .field(static_cast<unsigned long long>(r.k_plus))
        .field(static_cast<unsigned long long>(r.steps))
        .field(r.wallclock_s);
    w.end_row();
  }
}

}  // namespace frontier_lab
