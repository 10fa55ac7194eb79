#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "frontier_lab/coverage.hpp"
#include "frontier_lab/errors.hpp"
#include "frontier_lab/fitting.hpp"

using namespace frontier_lab;

namespace {

std::vector<PowerLawPoint> power_points(double c, double slope, int n) {
  std::vector<PowerLawPoint> pts;
  for (int x = 1; x <= n; ++x) pts.push_back({static_cast<double>(x), c * std::pow(x, slope)});
  return pts;
}

}  // namespace

TEST_CASE("exact power law") {
  const auto f = loglog_fit(power_points(3.0, -0.5, 100), std::pair{1.0, 100.0});
  CHECK(std::abs(f.slope + 0.5) < 1e-10);
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-10));
  CHECK(f.n_points == 100);
  const auto trimmed = loglog_fit(power_points(3.0, -0.5, 100));
  CHECK(std::abs(trimmed.slope + 0.5) < 1e-10);
  CHECK(trimmed.n_points < 100);
  CHECK(trimmed.window_lo == doctest::Approx(std::pow(100.0, 0.1)));
  CHECK(trimmed.window_hi == doctest::Approx(std::pow(100.0, 0.9)));
}

TEST_CASE("constant data has zero slope") {
  const auto f = loglog_fit(power_points(2.0, 0.0, 20));
  CHECK(f.slope == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(f.r2 == 1.0);
}

TEST_CASE("analytic coverage points at alpha 1.7") {
  const auto model = make_zipf(1.7, std::nullopt);
  std::vector<PowerLawPoint> pts;
  for (int i = 0; i < 41; ++i) {
    const double D = 1e3 * std::pow(1e4, i / 40.0);
    pts.push_back({D, coverage_loss({model, D, 1})});
  }
  CHECK(loglog_fit(pts).slope == doctest::Approx(-0.412).epsilon(0.002));
}

TEST_CASE("errors") {
  const std::vector<PowerLawPoint> two{{1.0, 1.0}, {2.0, 0.5}};
  CHECK_THROWS_AS(loglog_fit(two, std::pair{0.5, 3.0}), InsufficientDataError);
  std::vector<PowerLawPoint> bad = power_points(1.0, -1.0, 10);
  bad[4].y = 0.0;
  try {
    loglog_fit(bad, std::pair{1.0, 10.0});
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find('5') != std::string::npos);
  }
}

TEST_CASE("infer_beta examples") {
  CHECK(infer_beta(1.5, 0.15) == doctest::Approx(2.22).epsilon(0.005));
  CHECK(infer_beta(1.3, 0.14) == doctest::Approx(1.65).epsilon(0.005));
  CHECK(infer_beta(2.0, 0.25) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(infer_beta(1.5, 0.0), DomainError);
  CHECK_THROWS_AS(infer_beta(1.5, -0.1), DomainError);
}

TEST_CASE("property: scale equivariance") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> noise(0.0, 0.2);
  std::vector<PowerLawPoint> pts;
  for (int i = 1; i <= 40; ++i) pts.push_back({std::pow(1.3, i), std::pow(1.3, -0.4 * i) * std::exp(noise(rng))});
  const auto base = loglog_fit(pts);
  for (double scale : {1e-6, 0.5, 7.0, 1e8}) {
    auto scaled = pts;
    for (auto& p : scaled) p.y *= scale;
    const auto f = loglog_fit(scaled);
    CHECK(std::abs(f.slope - base.slope) < 1e-12);
    CHECK(f.intercept == doctest::Approx(base.intercept + std::log(scale)).epsilon(1e-12));
  }
}

TEST_CASE("property: symmetric window shrink keeps an exact slope") {
  const auto pts = power_points(0.7, -1.3, 1000);
  const double center = std::sqrt(1000.0);
  for (double half : {3.0, 1.5, 0.5}) {
    const auto f = loglog_fit(pts, std::pair{center / std::pow(10.0, half / 2.0), center * std::pow(10.0, half / 2.0)});
    CHECK(std::abs(f.slope + 1.3) < 1e-10);
  }
}

TEST_CASE("spearman") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{2, 4, 8, 16, 32};
  const std::vector<double> z{5, 4, 3, 2, 1};
  CHECK(spearman(x, y) == doctest::Approx(1.0));
  CHECK(spearman(x, z) == doctest::Approx(-1.0));
  const std::vector<double> ties{1, 1, 2, 2, 3};
  CHECK(spearman(x, ties) == doctest::Approx(9.0 / std::sqrt(90.0)).epsilon(1e-12));
}

TEST_CASE("fits.csv appends rows under a single header") {
  const auto path = std::filesystem::temp_directory_path() / "frontier_lab_fits_test.csv";
  std::filesystem::remove(path);
  const auto f = loglog_fit(power_points(1.0, -0.5, 10), std::pair{1.0, 10.0});
  const FitRow rows[] = {{"data", 1.5, f}};
  append_fits_csv(path, rows);
  append_fits_csv(path, rows);
  std::ifstream in(path);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "series,alpha,slope,intercept,r2,n,window_lo,window_hi");
  CHECK(lines[1] == lines[2]);
  CHECK(lines[1].rfind("data,1.5,", 0) == 0);
  std::filesystem::remove(path);
}

TEST_CASE("isotonic fit pools adjacent violators") {
  const std::vector<double> y{1.0, 3.0, 2.0, 2.0, 5.0, 0.0};
  const auto f = isotonic_fit(y);
  const std::vector<double> want{1.0, 7.0 / 3.0, 7.0 / 3.0, 7.0 / 3.0, 2.5, 2.5};
  REQUIRE(f.size() == want.size());
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(f[i] == doctest::Approx(want[i]).epsilon(1e-14));
  CHECK(isotonic_fit(std::vector<double>{}).empty());
}

TEST_CASE("property: isotonic fit equals the max-min block mean formula") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> y(1 + trial % 15);
    for (auto& v : y) v = u(rng);
    const auto f = isotonic_fit(y);
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) {
      double best = -INFINITY;
      for (std::size_t j = 0; j <= i; ++j) {
        double worst = INFINITY;
        for (std::size_t l = i; l < n; ++l) {
          double s = 0.0;
          for (std::size_t m = j; m <= l; ++m) s += y[m];
          worst = std::min(worst, s / static_cast<double>(l - j + 1));
        }
        best = std::max(best, worst);
      }
      CHECK(f[i] == doctest::Approx(best).epsilon(1e-12));
    }
    for (std::size_t i = 1; i < n; ++i) CHECK(f[i] >= f[i - 1]);
  }
}
