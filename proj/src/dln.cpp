#include "frontier_lab/dln.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "frontier_lab/csv_io.hpp"
#include "frontier_lab/errors.hpp"
#include "frontier_lab/fitting.hpp"

namespace frontier_lab {

namespace {

double min_target(const DlnConfig& config) {
  // u*_k = scale * p_k^zeta is smallest at the last rank for zeta >= 0.
  return target_weight(config, *config.model.support());
}

void check_rank(const DlnConfig& config, std::uint64_t k) {
  if (k < 1 || k > *config.model.support()) {
    throw DomainError("dln: rank " + std::to_string(k) + " outside the support");
  }
}

}  // namespace

void validate(const DlnConfig& config) {
  if (!config.model.is_finite()) throw ConfigError("dln: needs a finite Zipf support");
  if (config.depth < 2) throw ConfigError("dln: depth must be >= 2");
  if (!(config.zeta >= 0.0)) throw ConfigError("dln: zeta must be >= 0 (negative zeta is unlearnable)");
  if (!(config.eta > 0.0)) throw ConfigError("dln: eta must be positive");
  if (!(config.target_scale > 0.0)) throw ConfigError("dln: target_scale must be positive");
  if (config.u0 > 0.0 && !(config.u0 < min_target(config))) {
    throw ConfigError("dln: u0 must lie in (0, min_k u*_k)");
  }
}

double target_weight(const DlnConfig& config, std::uint64_t k) {
  return config.target_scale * std::pow(config.model.probability(static_cast<double>(k)), config.zeta);
}

double initial_weight(const DlnConfig& config) {
  return config.u0 > 0.0 ? config.u0 : 1e-4 * min_target(config);
}

double effective_rate(double p, double u_star, unsigned depth) {
  return p * std::pow(u_star, 2.0 - 2.0 / depth);
}

double beta_from_depth(double depth, double zeta) { return 2.0 + zeta * (2.0 - 2.0 / depth); }

std::vector<FlowPoint> simulate_flow(const DlnConfig& config, std::uint64_t k, std::span<const double> times) {
  validate(config);
  check_rank(config, k);
  if (times.empty()) return {};
  if (times.front() < 0.0 || !std::is_sorted(times.begin(), times.end())) {
    throw DomainError("simulate_flow: times must be non-negative and non-decreasing");
  }

  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 1>;

  const double p = config.model.probability(static_cast<double>(k));
  const double u_star = target_weight(config, k);
  const double u0 = initial_weight(config);
  const double power = 2.0 - 2.0 / config.depth;
  const double gain = config.eta * config.depth * p;

  const auto rhs = [&](const State& x, State& dxdt, double) {
    const double u = std::max(x[0], 0.0);
    dxdt[0] = gain * std::pow(u, power) * (u_star - u);
  };

  std::vector<FlowPoint> out;
  out.reserve(times.size());
  const auto observe = [&](const State& x, double t) {
    const double u = x[0];
    if (!(u > 0.0) || u > u_star * (1.0 + 1e-9)) {
      throw IntegratorError("simulate_flow: u left (0, u*] at t = " + format_double(t) + " for rank " +
                            std::to_string(k));
    }
    const double gap = (u - u_star) / u_star;
    out.push_back({t, u, gap * gap});
  };

  // Time scale of the early phase; the stepper adapts from there.
  const double dt0 = 1e-3 / (gain * std::pow(u0, power - 1.0) * u_star + 1e-300);
  auto stepper = odeint::make_dense_output(1e-14 * u_star, 1e-10, odeint::runge_kutta_dopri5<State>());
  stepper.initialize(State{u0}, 0.0, std::min(dt0, std::max(times.back(), 1e-300)));

  // Close to u* the explicit stepper is limited by stability rather than
  // accuracy. Past a relative gap of 1e-7 the flow is continued with the
  // Bernoulli solution of de/dt = -a e + b e^2 (e = u* - u), exact to O(e^2).
  const double a = gain * std::pow(u_star, power);
  const double b = a * power / u_star;
  bool tail = false;
  double t1 = 0.0, e1 = 0.0;
  const auto tail_state = [&](double t) {
    const double inv = (1.0 / e1 - b / a) * std::exp(a * (t - t1)) + b / a;
    return State{u_star - 1.0 / inv};
  };
  const auto serve_within_step = [&](std::size_t& i) {
    for (; i < times.size() && times[i] <= stepper.current_time(); ++i) {
      State s;
      stepper.calc_state(times[i], s);
      observe(s, times[i]);
    }
  };

  std::size_t i = 0;
  for (; i < times.size() && times[i] == 0.0; ++i) observe(State{u0}, 0.0);
  while (i < times.size()) {
    if (tail) {
      observe(tail_state(times[i]), times[i]);
      ++i;
      continue;
    }
    serve_within_step(i);
    if (i == times.size()) break;
    stepper.do_step(rhs);
    const double e = u_star - stepper.current_state()[0];
    if (e > 0.0 && e < 1e-7 * u_star) {
      serve_within_step(i);
      tail = true;
      t1 = stepper.current_time();
      e1 = e;
    }
  }
  return out;
}

std::vector<FlowPoint> simulate_flow(const DlnConfig& config, std::uint64_t k, double t_end, std::size_t points) {
  if (!(t_end > 0.0)) throw DomainError("simulate_flow: t_end must be positive");
  std::vector<double> times{0.0};
  const double t_min = t_end * 1e-6;
  for (std::size_t i = 0; i < points; ++i) {
    const double f = points > 1 ? static_cast<double>(i) / static_cast<double>(points - 1) : 1.0;
    times.push_back(t_min * std::pow(t_end / t_min, f));
  }
  times.back() = t_end;
  return simulate_flow(config, k, times);
}

double logistic_flow(double u0, double u_star, double p, double eta, double t) {
  const double a = u0 / (u_star - u0);
  const double lambda = p * u_star;
  // u* / (1 + e^{-2 eta Lambda t} / A), stable for large t.
  return u_star / (1.0 + std::exp(-2.0 * eta * lambda * t) / a);
}

double time_to_residual(const DlnConfig& config, std::uint64_t k, double q_target) {
  validate(config);
  check_rank(config, k);
  if (!(q_target > 0.0 && q_target < 1.0)) throw DomainError("time_to_residual: q_target must lie in (0, 1)");
  const double u_star = target_weight(config, k);
  const double y0 = initial_weight(config) / u_star;
  const double y1 = 1.0 - std::sqrt(q_target);
  if (y1 <= y0) return 0.0;

  // dy/dt = eta L Lambda y^a (1 - y) with y = u/u*, a = 2 - 2/L. Then
  // t = (1/(eta L Lambda)) int dy / (y^a (1-y)), written as the smooth part
  // int (y^{1-a} - y)/(1 - y) dv (y = e^v) plus the closed-form -ln(1-y).
  const double a = 2.0 - 2.0 / config.depth;
  const auto smooth = [a](double v) {
    const double y = std::exp(v);
    const double one_minus = -std::expm1(v);
    if (one_minus < 1e-8) return a;  // limit as y -> 1
    return (std::pow(y, 1.0 - a) - y) / one_minus;
  };
  using boost::math::quadrature::gauss_kronrod;
  const double integral = gauss_kronrod<double, 61>::integrate(smooth, std::log(y0), std::log(y1), 20, 1e-12) +
                          std::log((1.0 - y0) / (1.0 - y1));
  const double p = config.model.probability(static_cast<double>(k));
  return integral / (config.eta * config.depth * effective_rate(p, u_star, config.depth));
}

BetaFit recover_beta(const DlnConfig& config, std::span<const std::uint64_t> ranks, std::optional<double> t_end) {
  validate(config);
  if (ranks.size() < 4) throw InsufficientDataError("recover_beta: need at least 4 ranks");
  std::vector<double> log_p;
  BetaFit result;
  for (std::uint64_t k : ranks) {
    check_rank(config, k);
    log_p.push_back(std::log(config.model.probability(static_cast<double>(k))));
  }
  const auto [pmin, pmax] = std::minmax_element(log_p.begin(), log_p.end());
  if ((*pmax - *pmin) / std::log(10.0) < 1.5) {
    throw InsufficientDataError("recover_beta: ranks must span at least 1.5 decades of p_k");
  }

  constexpr double kWindowHi = 1e-2;
  constexpr double kWindowLo = 1e-8;
  constexpr std::size_t kGrid = 400;

  std::vector<double> log_rate;
  for (std::uint64_t k : ranks) {
    const double t_lo = time_to_residual(config, k, kWindowHi);
    const double t_hi = std::max(t_lo, t_end ? std::min(*t_end, time_to_residual(config, k, kWindowLo))
                                             : time_to_residual(config, k, kWindowLo));
    std::vector<double> times{0.0};
    for (std::size_t i = 0; i < kGrid; ++i) {
      times.push_back(t_lo + (t_hi - t_lo) * static_cast<double>(i) / (kGrid - 1));
    }
    if (t_end) times.push_back(std::max(*t_end, t_hi));
    const auto traj = simulate_flow(config, k, times);
    if (traj.back().q > 0.1) {
      throw InsufficientHorizonError("recover_beta: rank " + std::to_string(k) + " still has q = " +
                                     format_double(traj.back().q) + " at t_end");
    }
    if (!(t_hi > t_lo)) {
      throw InsufficientHorizonError("recover_beta: rank " + std::to_string(k) + " never enters the convergence window");
    }
    std::vector<double> ts;
    std::vector<double> lq;
    for (const auto& pt : traj) {
      if (pt.q >= kWindowLo && pt.q <= kWindowHi) {
        ts.push_back(pt.t);
        lq.push_back(std::log(pt.q));
      }
    }
    if (ts.size() < 3) {
      throw InsufficientHorizonError("recover_beta: rank " + std::to_string(k) +
                                     " has too few points in the convergence window");
    }
    const double rate = -ols(ts, lq).slope;
    result.rates.push_back({k, config.model.probability(static_cast<double>(k)), rate});
    log_rate.push_back(std::log(rate));
  }
  result.slope = ols(log_p, log_rate).slope;
  result.beta = result.slope + 1.0;
  return result;
}

std::vector<ResidualProfile> flow_profiles(const DlnConfig& config, std::span<const double> times) {
  validate(config);
  const std::uint64_t K = *config.model.support();
  std::vector<std::vector<double>> q(times.size(), std::vector<double>(K));
  for (std::uint64_t k = 1; k <= K; ++k) {
    const auto flow = simulate_flow(config, k, times);
    for (std::size_t i = 0; i < times.size(); ++i) q[i][k - 1] = std::clamp(flow[i].q, 0.0, 1.0);
  }
  std::vector<ResidualProfile> out;
  out.reserve(times.size());
  for (auto& residuals : q) out.push_back(make_profile(std::move(residuals), config.model));
  return out;
}

void write_trajectory_csv(const std::filesystem::path& path, std::span<const FlowPoint> points) {
  CsvWriter w(path, {"t", "u", "q"});
  for (const auto& pt : points) {
    w.field(pt.t).field(pt.u).field(pt.q);
    w.end_row();
  }
}

}  // namespace frontier_lab
