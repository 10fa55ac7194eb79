#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/tools/roots.hpp>

#include "frontier_lab/allocator.hpp"
#include "frontier_lab/errors.hpp"

using namespace frontier_lab;

namespace {

BottleneckModel symmetric() { return {{1.0, 0.5}, {1.0, 0.5}, {1.0, 0.5}, 6.0}; }

// Golden-section argmin over log N of max(eps_N(N), other(C / (f N))).
double numeric_argmin(const PowerTerm& cap, const PowerTerm& other, double f, double C) {
  const auto objective = [&](double logn) {
    const double n = std::exp(logn);
    return std::max(cap(n), other(C / (f * n)));
  };
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = -50.0, b = std::log(C / f) + 50.0;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  for (int i = 0; i < 200 && b - a > 1e-13; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = objective(x2);
    }
  }
  return std::exp(0.5 * (a + b));
}

BottleneckModel random_model(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(0.1, 10.0), ex(0.05, 1.0);
  return {{coef(rng), ex(rng)}, {coef(rng), ex(rng)}, {coef(rng), ex(rng)}, 6.0};
}

}  // namespace

TEST_CASE("joint loss examples") {
  CHECK(joint_loss(symmetric(), 100, 100, 100) == doctest::Approx(0.1).epsilon(1e-15));
  const auto m = symmetric();
  CHECK(joint_loss(m, 1e15, 1e15, 400) == doctest::Approx(m.optimization(400)).epsilon(1e-15));
}

TEST_CASE("property: max-sum bracketing on a 50^3 grid") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 3; ++trial) {
    const auto m = random_model(rng);
    for (int i = 0; i < 50; ++i) {
      for (int j = 0; j < 50; ++j) {
        for (int l = 0; l < 50; ++l) {
          const double N = std::pow(10.0, 9.0 * i / 49.0);
          const double D = std::pow(10.0, 9.0 * j / 49.0);
          const double T = std::pow(10.0, 9.0 * l / 49.0);
          const double joint = joint_loss(m, N, D, T);
          const double sum = additive_loss(m, N, D, T);
          REQUIRE(sum / 3.0 <= joint * (1.0 + 1e-15));
          REQUIRE(joint <= sum);
        }
      }
    }
  }
}

TEST_CASE("turnover examples") {
  BottleneckModel m{{0.01, 1e-9}, {1e-6, 1.0}, {1.0, 0.5}, 6.0};
  // eps_stat = 0.01 (capacity dominates), G = 1, alpha_tau = 0.5.
  CHECK(turnover_tau(m, 1.0, 1e6) == doctest::Approx(1e4).epsilon(1e-9));
  BottleneckModel unit{{2.0, 0.5}, {1.0, 0.5}, {2.0, 0.3}, 6.0};
  CHECK(turnover_tau(unit, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("turnover matches bisection on random models") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_model(rng);
    const double N = std::pow(10.0, 1.0 + 6.0 * std::uniform_real_distribution<double>(0, 1)(rng));
    const double D = std::pow(10.0, 1.0 + 6.0 * std::uniform_real_distribution<double>(0, 1)(rng));
    const double stat = std::max(m.capacity(N), m.data(D));
    const auto f = [&](double logt) { return m.optimization(std::exp(logt)) - stat; };
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t iters = 500;
    const auto br = boost::math::tools::bisect(f, -800.0, 800.0, tol, iters);
    const double oracle = std::exp(0.5 * (br.first + br.second));
    CHECK(turnover_tau(m, N, D) == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("Kaplan exponent examples") {
  CHECK(kaplan_exponent(symmetric()) == doctest::Approx(0.5).epsilon(1e-15));
  BottleneckModel m{{1.0, 0.5}, {1.0, 0.3}, {1.0, 0.25}, 6.0};
  CHECK(kaplan_exponent(m) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("Chinchilla exponent examples") {
  const auto s = symmetric();
  CHECK(chinchilla_exponent(s) == doctest::Approx(0.5).epsilon(1e-15));
  const auto a = chinchilla_optimum(s, 1e20), b = chinchilla_optimum(s, 1e22);
  CHECK(std::log(b.n_opt / a.n_opt) / std::log(100.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::log(b.d_opt / a.d_opt) / std::log(100.0) == doctest::Approx(0.5).epsilon(1e-12));
  BottleneckModel m{{1.0, 0.34}, {1.0, 0.28}, {1.0, 0.2}, 6.0};
  CHECK(chinchilla_exponent(m) == doctest::Approx(0.28 / 0.62).epsilon(1e-14));
  CHECK(chinchilla_exponent(m) == doctest::Approx(0.4516).epsilon(1e-4));
}

TEST_CASE("closed-form optima match a numeric minimizer") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_model(rng);
    for (double C : {1e15, 1e20, 1e25}) {
      const auto k = kaplan_optimum(m, C);
      CHECK(k.n_opt == doctest::Approx(numeric_argmin(m.capacity, m.optimization, m.flops_per_unit, C)).epsilon(1e-6));
      CHECK(k.tau_opt == doctest::Approx(C / (m.flops_per_unit * k.n_opt)).epsilon(1e-12));
      const auto c = chinchilla_optimum(m, C);
      CHECK(c.n_opt == doctest::Approx(numeric_argmin(m.capacity, m.data, m.flops_per_unit, C)).epsilon(1e-6));
      CHECK(c.d_opt == doctest::Approx(C / (m.flops_per_unit * c.n_opt)).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: balance optimality") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = random_model(rng);
    const double C = 1e21;
    const double f = m.flops_per_unit;
    const auto k = kaplan_optimum(m, C);
    CHECK(m.capacity(k.n_opt) == doctest::Approx(m.optimization(k.tau_opt)).epsilon(1e-9));
    CHECK(k.loss == doctest::Approx(m.capacity(k.n_opt)).epsilon(1e-9));
    const auto c = chinchilla_optimum(m, C);
    CHECK(m.capacity(c.n_opt) == doctest::Approx(m.data(c.d_opt)).epsilon(1e-9));
    for (double factor : {0.95, 1.05}) {
      const double n = k.n_opt * factor;
      CHECK(std::max(m.capacity(n), m.optimization(C / (f * n))) > k.loss);
      const double n2 = c.n_opt * factor;
      CHECK(std::max(m.capacity(n2), m.data(C / (f * n2))) > c.loss);
    }
  }
}

TEST_CASE("exponent identities with the consistency constructor") {
  const double alpha = 1.5, beta = 2.0, gamma = 0.5;
  const auto m = bottleneck_from_theory(alpha, beta, gamma, 1.0, 1.0, 1.0);
  const double aN = gamma * (alpha - 1.0), aD = (alpha - 1.0) / alpha, aT = (alpha - 1.0) / (alpha * beta);
  CHECK(m.capacity.exponent == doctest::Approx(aN));
  CHECK(m.data.exponent == doctest::Approx(aD));
  CHECK(m.optimization.exponent == doctest::Approx(aT));
  const auto lo = kaplan_optimum(m, 1e18), hi = kaplan_optimum(m, 1e24);
  const double loss_exp = -std::log(hi.loss / lo.loss) / std::log(1e6);
  // 0.25 * (1/6) / (0.25 + 1/6) = 0.1
  CHECK(loss_exp == doctest::Approx(aN * aT / (aN + aT)).epsilon(1e-12));
  CHECK(loss_exp == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(kaplan_exponent(m) == doctest::Approx(aT / (aN + aT)).epsilon(1e-14));
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate(BottleneckModel{{1.0, 0.0}, {1.0, 0.5}, {1.0, 0.5}, 6.0}), DomainError);
  CHECK_THROWS_AS(validate(BottleneckModel{{-1.0, 0.5}, {1.0, 0.5}, {1.0, 0.5}, 6.0}), DomainError);
  CHECK_THROWS_AS(validate(BottleneckModel{{1.0, 0.5}, {1.0, 0.5}, {1.0, 0.5}, 0.0}), DomainError);
}
