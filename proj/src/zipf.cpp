#include "frontier_lab/zipf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "frontier_lab/errors.hpp"
#include "frontier_lab/numerics.hpp"

namespace frontier_lab {

namespace {

constexpr std::uint64_t kNormalizationTerms = 1'000'000;

// Sum_{k=first}^{last} k^{-alpha}, smallest terms first.
double power_sum(double alpha, std::uint64_t first, std::uint64_t last) {
  CompensatedSum s;
  for (std::uint64_t k = last; k >= first && k > 0; --k) {
    s.add(std::pow(static_cast<double>(k), -alpha));
  }
  return s.value();
}

double midpoint(const detail::RemainderBracket& b) { return 0.5 * (b.lower + b.upper); }

}  // namespace

namespace detail {

RemainderBracket power_remainder(double alpha, double n) {
  const double e = alpha - 1.0;
  const double upper = std::pow(n + 0.5, -e) / e;
  const double lower = std::pow(n + 1.0, -e) / e + 0.5 * std::pow(n + 1.0, -alpha);
  return {lower, upper};
}

}  // namespace detail

double ZipfModel::probability(double k) const {
  if (k < 1.0) return 0.0;
  if (support_ && k > static_cast<double>(*support_)) return 0.0;
  return std::pow(k, -alpha_) / z_;
}

std::vector<double> ZipfModel::probabilities(std::uint64_t n) const {
  if (support_) n = std::min(n, *support_);
  std::vector<double> p(n);
  for (std::uint64_t k = 1; k <= n; ++k) {
    p[k - 1] = std::pow(static_cast<double>(k), -alpha_) / z_;
  }
  return p;
}

ZipfModel make_zipf(double alpha, std::optional<std::uint64_t> support) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("zipf: alpha must be positive and finite, got " + std::to_string(alpha));
  }
  if (support) {
    if (*support == 0) throw DomainError("zipf: finite support must contain at least one rank");
    return ZipfModel(alpha, support, power_sum(alpha, 1, *support));
  }
  if (alpha <= 1.0) {
    throw DivergentNormalizationError("zipf: alpha <= 1 diverges on unbounded support (alpha=" +
                                      std::to_string(alpha) + ")");
  }
  const double head = power_sum(alpha, 1, kNormalizationTerms);
  const double rest = midpoint(detail::power_remainder(alpha, static_cast<double>(kNormalizationTerms)));
  return ZipfModel(alpha, std::nullopt, head + rest);
}

double tail_mass(const ZipfModel& model, std::uint64_t threshold) {
  if (threshold == 0) return 1.0;
  if (const auto k_max = model.support()) {
    if (threshold >= *k_max) return 0.0;
    return power_sum(model.alpha(), threshold + 1, *k_max) / model.z();
  }
  const std::uint64_t cap = std::max<std::uint64_t>(10 * threshold, kNormalizationTerms);
  const double exact = power_sum(model.alpha(), threshold + 1, cap);
  const double rest = midpoint(detail::power_remainder(model.alpha(), static_cast<double>(cap)));
  return (exact + rest) / model.z();
}

double frontier_loss(const ZipfModel& model, std::uint64_t k_star) {
  if (k_star < 1) throw DomainError("frontier_loss: k_star must be >= 1");
  return tail_mass(model, k_star);
}

double weighted_residual_sum(const ZipfModel& model, const std::function<double(double)>& residual,
                             std::uint64_t direct_terms) {
  const double alpha = model.alpha();
  const double z = model.z();
  const std::uint64_t n = model.support() ? *model.support() : std::max<std::uint64_t>(direct_terms, 16);

  CompensatedSum total;
  for (std::uint64_t k = n; k >= 1; --k) {
    const double p = std::pow(static_cast<double>(k), -alpha) / z;
    total.add(p * residual(p));
  }
  if (model.support()) return total.value();

  // Remainder Sum_{k>n} f(k) with f(x) = p(x) r(p(x)):
  //   int_{a}^{inf} f + f'(a)/24, a = n + 1/2.
  // The integral is split as int p + int p (r - 1); the first is closed-form.
  const double a = static_cast<double>(n) + 0.5;
  const auto f = [&](double x) {
    const double p = std::pow(x, -alpha) / z;
    return p * residual(p);
  };
  const double mass = std::pow(a, 1.0 - alpha) / ((alpha - 1.0) * z);

  using boost::math::quadrature::gauss_kronrod;
  const auto correction = [&](double t) {
    const double x = a * std::exp(t);
    const double p = std::pow(x, -alpha) / z;
    return x * p * (residual(p) - 1.0);
  };
  CompensatedSum corr;
  double lo = 0.0;
  double hi = 1.0;
  int quiet_panels = 0;
  while (lo < 700.0 / alpha) {
    const double piece = gauss_kronrod<double, 31>::integrate(correction, lo, hi, 12, 1e-13);
    corr.add(piece);
    quiet_panels = std::abs(piece) <= 1e-18 * mass ? quiet_panels + 1 : 0;
    if (quiet_panels >= 2) break;
    lo = hi;
    hi *= 2.0;
  }

  const double h = 1e-4 * a;
  const double slope = (f(a + h) - f(a - h)) / (2.0 * h);
  total.add(mass);
  total.add(corr.value());
  total.add(slope / 24.0);
  return total.value();
}

}  // namespace frontier_lab
