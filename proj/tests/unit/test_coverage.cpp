#include <doctest.h>

#include <cmath>
#include <vector>

#include "frontier_lab/coverage.hpp"
#include "frontier_lab/errors.hpp"
#include "frontier_lab/fitting.hpp"

using namespace frontier_lab;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return xs;
}

double data_slope(double alpha, unsigned m) {
  const auto model = make_zipf(alpha, std::nullopt);
  std::vector<PowerLawPoint> pts;
  for (double D : log_grid(1e3, 1e7, 41)) pts.push_back({D, coverage_loss({model, D, m})});
  return loglog_fit(pts).slope;
}

// Binomial lower tail by explicit enumeration with lgamma coefficients.
double binomial_cdf_oracle(double p, int D, int m) {
  double s = 0.0;
  for (int j = 0; j < m && j <= D; ++j) {
    const double logc = std::lgamma(D + 1.0) - std::lgamma(j + 1.0) - std::lgamma(D - j + 1.0);
    s += std::exp(logc + j * std::log(p) + (D - j) * std::log1p(-p));
  }
  return s;
}

double bisect_frontier(const ZipfModel& model, double D, double m) {
  double lo = 1.0, hi = 1e12;
  for (int i = 0; i < 300; ++i) {
    const double mid = std::sqrt(lo * hi);
    (D * model.probability(mid) > m ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

}  // namespace

TEST_CASE("residual_proxy examples") {
  double direct = 1.0;
  for (int i = 0; i < 10; ++i) direct *= 0.9;
  CHECK(residual_proxy(0.1, 10) == doctest::Approx(direct).epsilon(1e-14));
  CHECK(residual_proxy(0.1, 10) == doctest::Approx(0.34867844).epsilon(1e-8));
  CHECK(residual_proxy(0.0, 12345) == 1.0);
  CHECK(residual_proxy(1.0, 3) == 0.0);
  CHECK(residual_proxy(0.3, 0) == 1.0);
}

TEST_CASE("residual_proxy_m examples") {
  CHECK(residual_proxy_m(0.5, 2, 2) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(residual_proxy_m(0.1, 10, 1) == doctest::Approx(residual_proxy(0.1, 10)).epsilon(1e-14));
  CHECK(residual_proxy_m(1.0, 5, 3) == 0.0);
  CHECK(residual_proxy_m(0.0, 5, 3) == 1.0);
  CHECK(residual_proxy_m(0.4, 3, 5) == 1.0);
}

TEST_CASE("residual_proxy_m matches an enumerated binomial CDF") {
  for (double p : {1e-6, 1e-3, 0.01, 0.2, 0.5, 0.9}) {
    for (int D : {1, 7, 100, 5000}) {
      for (int m : {1, 2, 4, 8, 16}) {
        CHECK(residual_proxy_m(p, D, m) == doctest::Approx(binomial_cdf_oracle(p, D, m)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("coverage_loss with nothing observed") {
  CHECK(coverage_loss({make_zipf(1.5, std::nullopt), 0.0, 1}) == 1.0);
  CHECK(coverage_loss({make_zipf(1.5, 100), 0.0, 1}) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("data exponents reproduce the published predictions") {
  CHECK(-data_slope(1.5, 1) == doctest::Approx(0.333).epsilon(0.002));
  CHECK(-data_slope(1.7, 1) == doctest::Approx(0.412).epsilon(0.002));
  CHECK(-data_slope(2.1, 1) == doctest::Approx(0.524).epsilon(0.002));
}

TEST_CASE("data exponent matches (alpha-1)/alpha for m in {1,4}") {
  for (double alpha : {1.3, 1.5, 1.7, 1.9, 2.1}) {
    for (unsigned m : {1u, 4u}) {
      CHECK(std::abs(-data_slope(alpha, m) - (alpha - 1.0) / alpha) < 0.02);
    }
  }
}

TEST_CASE("exponent is invariant to the occurrence threshold") {
  for (double alpha : {1.5, 2.0}) {
    CHECK(std::abs(data_slope(alpha, 1) - data_slope(alpha, 8)) < 0.02);
  }
}

TEST_CASE("coverage_frontier closed form") {
  const auto m2 = make_zipf(2.0, std::nullopt);
  CHECK(coverage_frontier({m2, 1000.0, 1}) == doctest::Approx(bisect_frontier(m2, 1000.0, 1.0)).epsilon(1e-10));
  CHECK(coverage_frontier({m2, 1000.0, 1}) == doctest::Approx(24.66).epsilon(1e-3));
  const auto m15 = make_zipf(1.5, std::nullopt);
  CHECK(coverage_frontier({m15, 1e6, 1}) == doctest::Approx(std::pow(1e6 / m15.z(), 2.0 / 3.0)).epsilon(1e-12));
  CHECK(coverage_frontier({m15, 1e6, 1}) == doctest::Approx(bisect_frontier(m15, 1e6, 1.0)).epsilon(1e-10));
  for (unsigned m : {1u, 2u, 4u}) {
    const double ratio = coverage_frontier({m15, 1e5, 2 * m}) / coverage_frontier({m15, 1e5, m});
    CHECK(ratio == doctest::Approx(std::pow(2.0, -1.0 / 1.5)).epsilon(1e-12));
  }
}

TEST_CASE("frontier agrees with extraction on the proxy profile within a factor 2") {
  for (double alpha : {1.5, 2.0}) {
    const auto model = make_zipf(alpha, std::nullopt);
    for (unsigned m : {1u, 4u}) {
      for (double D : {1e3, 1e4, 1e5, 1e6}) {
        const CoverageConfig cfg{model, D, m};
        const double theory = coverage_frontier(cfg);
        const auto len = static_cast<std::uint64_t>(std::ceil(4.0 * theory)) + 16;
        const double measured = extract_frontier(coverage_profile(cfg, len), 0.25).k_star;
        CHECK(measured / theory <= 2.0);
        CHECK(measured / theory >= 0.5);
      }
    }
  }
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate(CoverageConfig{make_zipf(1.5, 10), -1.0, 1}), DomainError);
  CHECK_THROWS_AS(validate(CoverageConfig{make_zipf(1.5, 10), 10.0, 0}), DomainError);
}

TEST_CASE("property: exponential sandwich of the residual") {
  for (double p = 0.0; p <= 0.5; p += 0.01) {
    for (double D : {1.0, 2.0, 10.0, 100.0, 1e4}) {
      const double r = residual_proxy(p, D);
      CHECK(r <= std::exp(-D * p) * (1.0 + 1e-14));
      CHECK(r >= std::exp(-D * p) * std::exp(-D * p * p) * (1.0 - 1e-14));
    }
  }
}

TEST_CASE("property: sum-level equivalence with the exponential surrogate") {
  const auto model = make_zipf(1.5, std::nullopt);
  for (double D : {1e3, 1e4, 1e5}) {
    const double exact = coverage_loss({model, D, 1});
    const double surrogate = weighted_residual_sum(model, [D](double p) { return std::exp(-D * p); });
    const double ratio = exact / surrogate;
    CHECK(ratio <= 1.0 + std::exp(-std::sqrt(D)));
    CHECK(ratio >= std::exp(-1.0) - std::exp(-std::sqrt(D)));
  }
}

TEST_CASE("property: loss decreases in D and increases in m") {
  const auto model = make_zipf(1.7, std::nullopt);
  double prev = 2.0;
  for (double D : log_grid(10.0, 1e7, 25)) {
    const double l = coverage_loss({model, D, 1});
    CHECK(l < prev);
    prev = l;
  }
  for (double D : {1e2, 1e4, 1e6}) {
    double last = 0.0;
    for (unsigned m = 1; m <= 16; m *= 2) {
      const double l = coverage_loss({model, D, m});
      CHECK(l > last);
      last = l;
    }
  }
}

TEST_CASE("property: unbounded loss matches a long finite-support sum") {
  const auto inf = make_zipf(2.0, std::nullopt);
  const std::uint64_t K = 20000000;
  const auto fin_p = inf.probabilities(K);
  for (double D : {1e3, 1e5}) {
    double direct = 0.0;
    for (std::size_t i = fin_p.size(); i-- > 0;) direct += fin_p[i] * residual_proxy_m(fin_p[i], D, 2);
    // Ranks past K are unobserved with near certainty.
    direct += tail_mass(inf, K);
    CHECK(coverage_loss({inf, D, 2}) == doctest::Approx(direct).epsilon(1e-9));
  }
}
