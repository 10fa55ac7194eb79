#include "frontier_lab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "frontier_lab/allocator.hpp"
#include "frontier_lab/coverage.hpp"
#include "frontier_lab/csv_io.hpp"
#include "frontier_lab/dln.hpp"
#include "frontier_lab/dynamics.hpp"
#include "frontier_lab/errors.hpp"
#include "frontier_lab/fitting.hpp"
#include "frontier_lab/nnlab.hpp"
#include "frontier_lab/seeding.hpp"
#include "frontier_lab/worker_pool.hpp"

namespace frontier_lab {

namespace fs = std::filesystem;

namespace {

std::string utc_timestamp(const char* format) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, format);
  return os.str();
}

// Short decimal label for file names, e.g. 1.5 -> "1.5", 1e4 -> "10000".
std::string label(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

std::vector<std::uint64_t> indices(const std::vector<double>& xs, const std::string& key) {
  std::vector<std::uint64_t> out;
  for (double x : xs) {
    if (!(x >= 0.0) || x != std::floor(x)) throw UsageError(key + " entries must be non-negative integers");
    out.push_back(static_cast<std::uint64_t>(x));
  }
  return out;
}

std::pair<double, double> full_window(const std::vector<double>& grid) {
  return {grid.front() * (1.0 - 1e-9), grid.back() * (1.0 + 1e-9)};
}

struct Context {
  const Config& config;
  fs::path dir;
  unsigned jobs;
  std::uint64_t root_seed;
  std::ostream& out;
  nlohmann::json seeds = nlohmann::json::object();
  std::vector<CheckResult> checks;
  int exit_code = 0;
};

KernelSpec analytic_kernel(const Config& c) {
  const std::string name = c.text("analytic.kernel");
  const double rate = c.number("analytic.rate");
  const double beta = c.number("analytic.beta");
  if (name == "exponential") return KernelSpec::exponential(rate, beta);
  if (name == "rational") return KernelSpec::rational(c.number("analytic.kernel_order"), rate, beta);
  throw UsageError("analytic.kernel must be exponential or rational, got '" + name + "'");
}

void run_analytic(Context& ctx) {
  const Config& c = ctx.config;
  const auto alphas = c.numbers("analytic.alphas");
  const auto thresholds = indices(c.numbers("analytic.thresholds"), "analytic.thresholds");
  const auto d_grid = log_grid(c.number("analytic.d_min"), c.number("analytic.d_max"), c.count("analytic.d_points"));
  const auto tau_grid =
      log_grid(c.number("analytic.tau_min"), c.number("analytic.tau_max"), c.count("analytic.tau_points"));
  const double delta = c.number("analytic.frontier_delta");
  const auto kernel = analytic_kernel(c);
  fs::create_directories(ctx.dir / "profiles");
  std::vector<FitRow> fits;

  // Coverage: loss and frontier against D.
  {
    CsvWriter w(ctx.dir / "coverage.csv",
                {"alpha", "m", "D", "delta_L", "k_star", "k_minus", "k_plus", "k_theory"});
    for (double alpha : alphas) {
      const auto model = make_zipf(alpha, std::nullopt);
      for (auto m : thresholds) {
        struct Row {
          double loss;
          FrontierExtraction ex;
          double theory;
        };
        std::vector<Row> rows(d_grid.size());
        parallel_for(d_grid.size(), ctx.jobs, [&](std::size_t i) {
          const CoverageConfig cfg{model, d_grid[i], static_cast<unsigned>(m)};
          const double theory = coverage_frontier(cfg);
          const auto length = static_cast<std::uint64_t>(std::ceil(4.0 * theory)) + 16;
          const auto profile = coverage_profile(cfg, length);
          rows[i] = {coverage_loss(cfg), extract_frontier(profile, delta), theory};
          const double decade = std::log10(d_grid[i]);
          if (std::abs(decade - std::round(decade)) < 1e-9) {
            write_profile_csv(ctx.dir / "profiles" /
                                  ("coverage_alpha" + label(alpha) + "_m" + std::to_string(m) + "_D" +
                                   label(d_grid[i]) + ".csv"),
                              profile);
          }
        });
        std::vector<PowerLawPoint> loss_pts, frontier_pts;
        for (std::size_t i = 0; i < d_grid.size(); ++i) {
          const auto& r = rows[i];
          w.field(alpha).field(static_cast<unsigned long long>(m)).field(d_grid[i]).field(r.loss);
          w.field(r.ex.k_star).field(static_cast<unsigned long long>(r.ex.k_minus));
          w.field(static_cast<unsigned long long>(r.ex.k_plus)).field(r.theory);
          w.end_row();
          loss_pts.push_back({d_grid[i], r.loss});
          frontier_pts.push_back({d_grid[i], r.ex.k_star});
        }
        const std::string suffix = "-m" + std::to_string(m);
        fits.push_back({"coverage-data" + suffix, alpha, loglog_fit(loss_pts)});
        fits.push_back({"coverage-frontier" + suffix, alpha, loglog_fit(frontier_pts, full_window(d_grid))});
      }
    }
  }

  // Compute law from the kernel against its Mellin prediction.
  {
    CsvWriter w(ctx.dir / "compute.csv", {"alpha", "kernel", "tau", "delta_L", "prediction"});
    for (double alpha : alphas) {
      const auto model = make_zipf(alpha, std::nullopt);
      const auto pf = compute_prefactor(model, kernel);
      std::vector<double> loss(tau_grid.size());
      parallel_for(tau_grid.size(), ctx.jobs,
                   [&](std::size_t i) { loss[i] = asymptotic_loss(model, kernel, tau_grid[i]); });
      std::vector<PowerLawPoint> pts;
      for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        w.field(alpha).field(c.text("analytic.kernel")).field(tau_grid[i]).field(loss[i]);
        w.field(pf.factor * std::pow(tau_grid[i], -pf.s));
        w.end_row();
        pts.push_back({tau_grid[i], loss[i]});
      }
      fits.push_back({"compute-" + c.text("analytic.kernel"), alpha, loglog_fit(pts, full_window(tau_grid))});
    }
  }

  // Stochastic per-pattern dynamics on a finite vocabulary.
  {
    CsvWriter w(ctx.dir / "dynamics.csv",
                {"alpha", "tau", "seed", "delta_L", "delta_L_expected", "k_star", "k_minus", "k_plus"});
    const auto steps = log_grid(1e3, 1e6, 7);
    nlohmann::json used = nlohmann::json::array();
    for (double alpha : alphas) {
      DynamicsConfig base;
      base.model = make_zipf(alpha, 1000);
      base.beta = c.number("analytic.beta");
      struct Row {
        DynamicsConfig cfg;
        ResidualProfile simulated;
        double expected;
      };
      std::vector<Row> rows(steps.size());
      parallel_for(steps.size(), ctx.jobs, [&](std::size_t i) {
        DynamicsConfig cfg = base;
        cfg.steps = static_cast<std::uint64_t>(std::llround(steps[i]));
        cfg.seed = derive_seed(ctx.root_seed, i, "analytic/dynamics");
        rows[i] = {cfg, simulate_residuals(cfg), weighted_loss(expected_profile(cfg, 1000))};
      });
      std::vector<PowerLawPoint> pts;
      for (auto& r : rows) {
        const auto ex = extract_frontier(r.simulated, delta);
        const double loss = weighted_loss(r.simulated);
        w.field(alpha).field(static_cast<unsigned long long>(r.cfg.steps));
        w.field(static_cast<unsigned long long>(r.cfg.seed)).field(loss).field(r.expected).field(ex.k_star);
        w.field(static_cast<unsigned long long>(ex.k_minus)).field(static_cast<unsigned long long>(ex.k_plus));
        w.end_row();
        pts.push_back({static_cast<double>(r.cfg.steps), loss});
        write_profile_csv(ctx.dir / "profiles" /
                              ("dynamics_alpha" + label(alpha) + "_tau" + std::to_string(r.cfg.steps) + ".csv"),
                          r.simulated);
        used.push_back(r.cfg.seed);
      }
      fits.push_back({"dynamics-sim", alpha, loglog_fit(pts)});
    }
    ctx.seeds["dynamics"] = used;
  }

  fs::remove(ctx.dir / "fits.csv");
  append_fits_csv(ctx.dir / "fits.csv", fits);
  for (const auto& f : fits) {
    ctx.out << f.series << " alpha=" << f.alpha << " slope=" << f.fit.slope << " r2=" << f.fit.r2 << "\n";
  }
}

ExperimentConfig network_config(const Config& c) {
  ExperimentConfig e;
  e.vocab = c.count("nn.vocab");
  e.alpha = c.number("nn.alpha");
  e.hidden = c.count("nn.hidden");
  e.steps = c.count("nn.steps");
  e.lr = c.number("nn.lr");
  e.momentum = c.number("nn.momentum");
  e.batch = c.count("nn.batch");
  e.init_std = c.number("nn.init_std");
  e.frontier_delta = c.number("nn.frontier_delta");
  e.reduction = parse_reduction(c.text("nn.loss_reduction"));
  validate(e);
  return e;
}

void run_nn_sweep(Context& ctx) {
  const Config& c = ctx.config;
  const auto base = network_config(c);
  const auto axis = parse_axis(c.text("nn.axis"));
  auto grid = c.numbers("nn.grid");
  if (grid.empty()) grid = default_sweep_grid(axis);
  const auto seed_indices = indices(c.numbers("nn.seeds"), "nn.seeds");
  std::vector<std::uint64_t> seeds;
  for (auto i : seed_indices) seeds.push_back(network_seed(ctx.root_seed, i));
  ctx.seeds["nn"] = {{"indices", seed_indices}, {"derived", seeds}};

  SweepOptions so;
  so.name = "nn-" + to_string(axis);
  so.jobs = ctx.jobs;
  so.profile_dir = ctx.dir / "profiles";
  fs::create_directories(*so.profile_dir);
  ctx.out << "training " << grid.size() << " x " << seeds.size() << " cells on the " << to_string(axis)
          << " axis\n";
  const auto cells = sweep(base, axis, grid, seeds, so);

  std::vector<SweepRecord> records;
  for (const auto& cell : cells) records.push_back(cell.record);
  const std::string csv = "sweep_" + to_string(axis) + ".csv";
  write_sweep_csv(ctx.dir / csv, records);

  std::vector<PowerLawPoint> loss_pts, frontier_pts;
  for (const auto& s : summarize(cells)) {
    loss_pts.push_back({s.value, s.delta_loss});
    frontier_pts.push_back({s.value, s.k_star});
  }
  const auto loss_fit = loglog_fit(loss_pts, full_window(grid));
  const auto frontier_fit = loglog_fit(frontier_pts, full_window(grid));
  const std::vector<FitRow> fits{{"nn-" + to_string(axis), base.alpha, loss_fit},
                                 {"nn-" + to_string(axis) + "-frontier", base.alpha, frontier_fit}};
  fs::remove(ctx.dir / "fits.csv");
  append_fits_csv(ctx.dir / "fits.csv", fits);

  nlohmann::json summary = {{"axis", to_string(axis)},
                            {"alpha", base.alpha},
                            {"loss_slope", loss_fit.slope},
                            {"loss_r2", loss_fit.r2},
                            {"frontier_slope", frontier_fit.slope},
                            {"seeds_per_cell", seeds.size()},
                            {"aggregate", "median"}};
  if (axis == SweepAxis::compute_tau && loss_fit.slope < 0.0 && base.alpha > 1.0) {
    summary["inferred_beta"] = infer_beta(base.alpha, -loss_fit.slope);
  }
  std::ofstream(ctx.dir / "nn_summary.json") << summary.dump(2) << "\n";
  ctx.out << "loss slope " << loss_fit.slope << " (r2 " << loss_fit.r2 << "), frontier slope " << frontier_fit.slope
          << "\n";
}

void run_dln(Context& ctx) {
  const Config& c = ctx.config;
  const auto depths = indices(c.numbers("dln.depths"), "dln.depths");
  const auto zetas = c.numbers("dln.zetas");
  if (depths.size() != zetas.size()) throw UsageError("dln.depths and dln.zetas must have the same length");
  const auto ranks = indices(c.numbers("dln.ranks"), "dln.ranks");
  const auto points = c.count("dln.trajectory_points");
  fs::create_directories(ctx.dir / "trajectories");
  fs::create_directories(ctx.dir / "profiles");

  CsvWriter beta_csv(ctx.dir / "beta.csv", {"depth", "zeta", "beta_theory", "beta_fit", "rate_slope"});
  CsvWriter rate_csv(ctx.dir / "rates.csv", {"depth", "zeta", "k", "p_k", "rate", "rate_theory"});
  for (std::size_t i = 0; i < depths.size(); ++i) {
    DlnConfig cfg;
    cfg.model = make_zipf(c.number("dln.alpha"), c.count("dln.vocab"));
    cfg.depth = static_cast<unsigned>(depths[i]);
    cfg.zeta = zetas[i];
    cfg.eta = c.number("dln.eta");
    validate(cfg);
    const auto fit = recover_beta(cfg, ranks);
    const double theory = beta_from_depth(cfg.depth, cfg.zeta);
    beta_csv.field(cfg.depth).field(cfg.zeta).field(theory).field(fit.beta).field(fit.slope);
    beta_csv.end_row();
    for (const auto& r : fit.rates) {
      const double rate_theory = 2.0 * cfg.eta * cfg.depth * effective_rate(r.p, target_weight(cfg, r.k), cfg.depth);
      rate_csv.field(cfg.depth).field(cfg.zeta).field(static_cast<unsigned long long>(r.k)).field(r.p);
      rate_csv.field(r.rate).field(rate_theory);
      rate_csv.end_row();
    }
    const std::string tag = "L" + std::to_string(cfg.depth) + "_zeta" + label(cfg.zeta);
    for (auto k : ranks) {
      const double t_end = time_to_residual(cfg, k, 1e-9);
      write_trajectory_csv(ctx.dir / "trajectories" / ("dln_" + tag + "_k" + std::to_string(k) + ".csv"),
                           simulate_flow(cfg, k, t_end, points));
    }
    const double t_mid = time_to_residual(cfg, ranks.back(), 0.5);
    std::vector<double> times;
    for (int j = -2; j <= 2; ++j) times.push_back(t_mid * std::pow(10.0, j));
    const auto profiles = flow_profiles(cfg, times);
    for (std::size_t j = 0; j < profiles.size(); ++j) {
      write_profile_csv(ctx.dir / "profiles" / ("dln_" + tag + "_t" + std::to_string(j) + ".csv"), profiles[j]);
    }
    ctx.out << "L=" << cfg.depth << " zeta=" << cfg.zeta << " beta_fit=" << fit.beta << " theory=" << theory << "\n";
  }
}

void run_plan(Context& ctx) {
  const Config& c = ctx.config;
  BottleneckModel m = bottleneck_from_theory(c.number("plan.alpha"), c.number("plan.beta"), c.number("plan.gamma"),
                                             c.number("plan.A"), c.number("plan.B"), c.number("plan.G"),
                                             c.number("plan.flops_per_unit"));
  if (c.number("plan.alpha_N") > 0.0) m.capacity.exponent = c.number("plan.alpha_N");
  if (c.number("plan.alpha_D") > 0.0) m.data.exponent = c.number("plan.alpha_D");
  if (c.number("plan.alpha_tau") > 0.0) m.optimization.exponent = c.number("plan.alpha_tau");
  validate(m);
  const double ke = kaplan_exponent(m);
  const double ce = chinchilla_exponent(m);

  CsvWriter w(ctx.dir / "plan.csv", {"C", "kaplan_N", "kaplan_tau", "kaplan_loss", "kaplan_exponent", "chinchilla_N",
                                      "chinchilla_D", "chinchilla_loss", "chinchilla_exponent"});
  nlohmann::json rows = nlohmann::json::array();
  for (double C : log_grid(c.number("plan.c_min"), c.number("plan.c_max"), c.count("plan.points"))) {
    const auto k = kaplan_optimum(m, C);
    const auto h = chinchilla_optimum(m, C);
    w.field(C).field(k.n_opt).field(k.tau_opt).field(k.loss).field(ke);
    w.field(h.n_opt).field(h.d_opt).field(h.loss).field(ce);
    w.end_row();
    rows.push_back({{"C", C},
                    {"kaplan", {{"N", k.n_opt}, {"tau", k.tau_opt}, {"loss", k.loss}}},
                    {"chinchilla", {{"N", h.n_opt}, {"D", h.d_opt}, {"loss", h.loss}}}});
  }
  const nlohmann::json plan = {
      {"model",
       {{"A", m.capacity.coefficient},
        {"alpha_N", m.capacity.exponent},
        {"B", m.data.coefficient},
        {"alpha_D", m.data.exponent},
        {"G", m.optimization.coefficient},
        {"alpha_tau", m.optimization.exponent},
        {"flops_per_unit", m.flops_per_unit}}},
      {"kaplan_exponent", ke},
      {"chinchilla_exponent", ce},
      {"rows", rows}};
  std::ofstream(ctx.dir / "plan.json") << plan.dump(2) << "\n";
  ctx.out << "N_opt ~ C^" << ke << " (data abundant), C^" << ce << " (data limited)\n";
}

void run_verify(Context& ctx) {
  const Config& c = ctx.config;
  const std::string profile = c.text("verify.profile");
  if (profile != "full" && profile != "quick") throw UsageError("verify.profile must be full or quick");
  AcceptanceOptions opt;
  opt.quick = profile == "quick";
  opt.jobs = ctx.jobs;
  opt.root_seed = ctx.root_seed;
  opt.nn_seeds = indices(c.numbers("nn.seeds"), "nn.seeds");
  opt.compute_seeds = indices(c.numbers("verify.compute_seeds"), "verify.compute_seeds");
  opt.network = network_config(c);
  opt.artifact_dir = ctx.dir;
  opt.log = [&](const std::string& line) { ctx.out << "  " << line << std::endl; };
  ctx.seeds["nn_indices"] = opt.nn_seeds;
  ctx.seeds["compute_indices"] = opt.compute_seeds;

  ctx.checks = run_acceptance(opt, [&](const CheckResult& r) { ctx.out << format_result_line(r) << std::endl; });
  if (c.flag("verify.determinism")) {
    const auto scratch = ctx.dir / ".determinism";
    auto r = determinism_check(c, ctx.jobs, scratch);
    fs::remove_all(scratch);
    ctx.out << format_result_line(r) << std::endl;
    ctx.checks.push_back(std::move(r));
    write_verify_csv(ctx.dir / "verify.csv", ctx.checks);
  }
  std::size_t failed = 0, skipped = 0;
  for (const auto& r : ctx.checks) {
    failed += r.status == CheckStatus::fail;
    skipped += r.status == CheckStatus::skip;
  }
  ctx.out << ctx.checks.size() - failed - skipped << " passed, " << failed << " failed, " << skipped << " skipped\n";
  if (failed > 0) ctx.exit_code = 1;
}

std::vector<fs::path> list_outputs(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().filename() != "manifest.json") out.push_back(fs::relative(e.path(), dir));
  }
  std::sort(out.begin(), out.end());
  return out;
}

fs::path fresh_run_dir(const fs::path& root, const std::string& command) {
  const std::string stem = utc_timestamp("%Y%m%dT%H%M%SZ") + "-" + command;
  fs::path dir = root / stem;
  for (int i = 2; fs::exists(dir); ++i) dir = root / (stem + "-" + std::to_string(i));
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"analytic", "nn-sweep", "dln", "plan", "verify"};
  return names;
}

std::uint64_t resolve_root_seed(const Config& config) {
  if (!config.was_set("run.seed")) {
    if (const char* env = std::getenv("FRONTIER_LAB_SEED"); env && *env) {
      char* end = nullptr;
      const auto v = std::strtoull(env, &end, 10);
      if (*end != '\0') throw UsageError(std::string("FRONTIER_LAB_SEED is not an integer: ") + env);
      return v;
    }
  }
  return config.count("run.seed");
}

RunOutcome run_command(const RunRequest& request, std::ostream& out) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), request.command) == names.end()) {
    throw UsageError("unknown command '" + request.command + "'");
  }
  const Config& config = request.config;
  unsigned jobs = request.jobs ? *request.jobs : static_cast<unsigned>(config.count("run.jobs"));
  if (jobs == 0) jobs = default_jobs();

  RunOutcome outcome;
  outcome.run_dir = request.run_dir ? *request.run_dir : fresh_run_dir(config.text("run.out_dir"), request.command);
  std::error_code ec;
  fs::create_directories(outcome.run_dir, ec);
  if (ec || !fs::is_directory(outcome.run_dir)) {
    throw std::runtime_error("cannot create output directory " + outcome.run_dir.string() + ": " + ec.message());
  }

  Context ctx{config, outcome.run_dir, jobs, resolve_root_seed(config), out, nlohmann::json::object(), {}, 0};
  const std::string started = utc_timestamp("%Y-%m-%dT%H:%M:%SZ");
  out << request.command << " -> " << outcome.run_dir.string() << "\n";

  if (request.command == "analytic") run_analytic(ctx);
  if (request.command == "nn-sweep") run_nn_sweep(ctx);
  if (request.command == "dln") run_dln(ctx);
  if (request.command == "plan") run_plan(ctx);
  if (request.command == "verify") run_verify(ctx);

  outcome.outputs = list_outputs(outcome.run_dir);
  outcome.checks = ctx.checks;
  outcome.exit_code = ctx.exit_code;

  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& p : outcome.outputs) outputs.push_back(p.generic_string());
  const nlohmann::json manifest = {{"command", request.command},
                                   {"code_version", kCodeVersion},
                                   {"config", config.to_json()},
                                   {"root_seed", ctx.root_seed},
                                   {"seeds", ctx.seeds},
                                   {"jobs", jobs},
                                   {"outputs", outputs},
                                   {"exit_code", outcome.exit_code},
                                   {"started", started},
                                   {"finished", utc_timestamp("%Y-%m-%dT%H:%M:%SZ")}};
  std::ofstream(outcome.run_dir / "manifest.json") << manifest.dump(2) << "\n";
  return outcome;
}

CheckResult determinism_check(const Config& config, unsigned jobs, const fs::path& scratch) {
  CheckResult r;
  r.id = "determinism";
  r.title = "repeated quick verify runs write identical CSVs";
  r.target = "byte-identical CSV files";
  const auto start = std::chrono::steady_clock::now();
  try {
    Config quick = config;
    quick.set("verify.profile", std::string("quick"));
    quick.set("verify.determinism", false);
    std::vector<std::vector<fs::path>> listings;
    for (int i = 0; i < 2; ++i) {
      const fs::path dir = scratch / ("run" + std::to_string(i));
      fs::remove_all(dir);
      RunRequest req{"verify", quick, dir, jobs};
      std::ostringstream sink;
      listings.push_back(run_command(req, sink).outputs);
    }
    std::size_t compared = 0;
    std::string mismatch;
    if (listings[0] != listings[1]) mismatch = "file sets differ";
    for (const auto& rel : listings[0]) {
      if (rel.extension() != ".csv" || !mismatch.empty()) continue;
      ++compared;
      if (read_file(scratch / "run0" / rel) != read_file(scratch / "run1" / rel)) mismatch = rel.generic_string();
    }
    r.measured = std::to_string(compared) + " CSV files compared";
    r.status = mismatch.empty() && compared > 0 ? CheckStatus::pass : CheckStatus::fail;
    if (!mismatch.empty()) r.detail = "mismatch: " + mismatch;
  } catch (const std::exception& e) {
    r.status = CheckStatus::fail;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace frontier_lab
