#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "frontier_lab/errors.hpp"
#include "frontier_lab/frontier.hpp"

using namespace frontier_lab;

namespace {

std::vector<double> step_profile(std::size_t K, std::size_t learned) {
  std::vector<double> q(K, 1.0);
  for (std::size_t i = 0; i < learned; ++i) q[i] = 0.0;
  return q;
}

double logistic_q(double k, double center, double width_decades) {
  return 1.0 / (1.0 + std::exp(-(std::log10(k) - std::log10(center)) / width_decades));
}

std::vector<double> logistic_profile(std::size_t K, double center, double width) {
  std::vector<double> q(K);
  for (std::size_t i = 0; i < K; ++i) q[i] = logistic_q(static_cast<double>(i + 1), center, width);
  return q;
}

// Crossing of a continuous increasing q(k) by bisection on a dense grid.
double brute_crossing(double level, double center, double width) {
  double lo = 1.0, hi = 1e6;
  for (int i = 0; i < 200; ++i) {
    const double mid = std::sqrt(lo * hi);
    (logistic_q(mid, center, width) < level ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

}  // namespace

TEST_CASE("exact step profile") {
  const auto prof = make_profile(step_profile(200, 50), make_zipf(1.5, 200));
  const auto ex = extract_frontier(prof, 0.25);
  CHECK(ex.k_minus == 50);
  CHECK(ex.k_plus == 51);
  CHECK(ex.k_star >= 50.0);
  CHECK(ex.k_star <= 51.0);
  CHECK(ex.k_star == doctest::Approx(std::sqrt(50.0 * 51.0)).epsilon(1e-12));
  CHECK(ex.saturation == Saturation::none);
}

TEST_CASE("fully learned and fully unlearned profiles saturate") {
  const auto model = make_zipf(1.5, 30);
  const auto learned = extract_frontier(make_profile(std::vector<double>(30, 0.0), model), 0.25);
  CHECK(learned.k_minus == 30);
  CHECK(learned.k_plus == 31);
  CHECK(learned.k_star == 30.0);
  CHECK(learned.saturation == Saturation::all_learned);

  const auto unlearned = extract_frontier(make_profile(std::vector<double>(30, 1.0), model), 0.25);
  CHECK(unlearned.k_minus == 0);
  CHECK(unlearned.k_plus == 1);
  CHECK(unlearned.k_star == 1.0);
  CHECK(unlearned.saturation == Saturation::all_unlearned);
}

TEST_CASE("logistic profile centred at 100") {
  const auto prof = make_profile(logistic_profile(1000, 100.0, 0.1), make_zipf(1.5, 1000));
  const auto ex = extract_frontier(prof, 0.25);
  const double oracle = std::sqrt(brute_crossing(0.25, 100.0, 0.1) * brute_crossing(0.75, 100.0, 0.1));
  CHECK(oracle == doctest::Approx(100.0).epsilon(1e-6));
  CHECK(std::abs(ex.k_star - 100.0) <= 2.0);
  CHECK(std::abs(ex.k_star - oracle) <= 2.0);
}

TEST_CASE("delta=0.5 puts both boundaries at the half crossing") {
  const auto prof = make_profile(logistic_profile(1000, 100.0, 0.1), make_zipf(1.5, 1000));
  const auto ex = extract_frontier(prof, 0.5);
  CHECK(ex.k_plus <= ex.k_minus + 1);
  CHECK(ex.k_star == doctest::Approx(100.0).epsilon(0.01));
}

TEST_CASE("precondition errors") {
  CHECK_THROWS_AS(make_profile({}, make_zipf(1.5, 10)), DomainError);
  CHECK_THROWS_AS(make_profile({0.5, 1.2}, make_zipf(1.5, 10)), DomainError);
  CHECK_THROWS_AS(make_profile({0.5, -0.1}, make_zipf(1.5, 10)), DomainError);
  CHECK_THROWS_AS(make_profile(std::vector<double>(11, 0.5), make_zipf(1.5, 10)), DomainError);
  const auto prof = make_profile({0.1, 0.9}, make_zipf(1.5, 10));
  CHECK_THROWS_AS(extract_frontier(prof, 0.0), DomainError);
  CHECK_THROWS_AS(extract_frontier(prof, 0.6), DomainError);
  CHECK_THROWS_AS(sandwich_check(prof, extract_frontier(prof, 0.25), 0.0), DomainError);
  CHECK_THROWS_AS(sandwich_check(prof, extract_frontier(prof, 0.25), 1.0), DomainError);
}

TEST_CASE("sandwich on an exact step") {
  const auto model = make_zipf(1.5, 200);
  const auto prof = make_profile(step_profile(200, 50), model);
  const auto ex = extract_frontier(prof, 0.25);
  const auto r = sandwich_check(prof, ex, 0.01);
  CHECK(r.holds);
  CHECK(r.actual == doctest::Approx(tail_mass(model, 50)).epsilon(1e-12));
  // The delta-weighted head term is the only slack above the tail.
  CHECK(r.upper == doctest::Approx(0.25 * (1.0 - tail_mass(model, 49)) + tail_mass(model, 49)).epsilon(1e-12));
  CHECK(r.lower == doctest::Approx(0.75 * tail_mass(model, 51)).epsilon(1e-12));
}

TEST_CASE("sandwich on a logistic profile matches direct summation") {
  const auto model = make_zipf(1.5, 1000);
  const auto q = logistic_profile(1000, 100.0, 0.1);
  const auto prof = make_profile(q, model);
  const auto ex = extract_frontier(prof, 0.25);
  const auto r = sandwich_check(prof, ex, 0.1);
  double lower = 0.0, actual = 0.0, head = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    const double p = model.probability(k);
    actual += p * q[i];
    if (k > 1.1 * ex.k_star) lower += p;
    if (k <= 0.9 * ex.k_star) head += p;
    else tail += p;
  }
  CHECK(r.lower == doctest::Approx(0.75 * lower).epsilon(1e-12));
  CHECK(r.actual == doctest::Approx(actual).epsilon(1e-12));
  CHECK(r.upper == doctest::Approx(0.25 * head + tail).epsilon(1e-12));
  CHECK(r.holds);
}

TEST_CASE("fully unlearned sandwich") {
  const auto model = make_zipf(2.0, 100);
  const auto prof = make_profile(std::vector<double>(100, 1.0), model);
  const auto r = sandwich_check(prof, extract_frontier(prof, 0.25), 0.1);
  CHECK(r.actual == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.holds);
}

TEST_CASE("mass beyond a short profile counts as unlearned") {
  const auto model = make_zipf(2.0, std::nullopt);
  const auto prof = make_profile(std::vector<double>(10, 0.0), model);
  CHECK(weighted_loss(prof) == doctest::Approx(tail_mass(model, 10)).epsilon(1e-12));
}

TEST_CASE("property: extraction invariants on random monotone profiles") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t K = 1 + rng() % 300;
    std::vector<double> q(K);
    for (auto& x : q) x = u(rng);
    std::sort(q.begin(), q.end());
    const auto prof = make_profile(q, make_zipf(1.0 + u(rng), K));
    const double d1 = 0.05 + 0.2 * u(rng);
    const double d2 = d1 + (0.5 - d1) * u(rng);
    const auto a = extract_frontier(prof, d1);
    const auto b = extract_frontier(prof, d2);
    CHECK(a.k_minus <= a.k_plus);
    if (a.saturation == Saturation::none) {
      CHECK(static_cast<double>(a.k_minus) <= a.k_star * (1.0 + 1e-12));
      CHECK(a.k_star <= static_cast<double>(a.k_plus) * (1.0 + 1e-12));
    }
    // Shrinking delta never widens the learned set or narrows the unlearned one.
    CHECK(a.k_minus <= b.k_minus);
    CHECK(a.k_plus >= b.k_plus);
  }
}

TEST_CASE("property: envelope is the running maximum") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> q(500);
  for (auto& x : q) x = u(rng);
  const auto env = monotone_envelope(q);
  double running = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    running = std::max(running, q[i]);
    CHECK(env[i] == running);
  }
}

TEST_CASE("profile CSV round trip is exact") {
  const auto model = make_zipf(1.7, 50);
  std::vector<double> q(50);
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::sin(static_cast<double>(i)) * std::sin(static_cast<double>(i));
  q[1] = 4e-320;  // subnormal
  const auto path = std::filesystem::temp_directory_path() / "frontier_lab_profile_roundtrip.csv";
  write_profile_csv(path, make_profile(q, model));
  const auto rows = read_profile_csv(path);
  REQUIRE(rows.size() == 50);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].k == i + 1);
    CHECK(rows[i].p == model.probability(static_cast<double>(i + 1)));
    CHECK(rows[i].q == q[i]);
  }
  std::filesystem::remove(path);
}
