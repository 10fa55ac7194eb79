#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace frontier_lab {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. r2 is 1 for a perfect
/// fit, including constant y.
LineFit ols(std::span<const double> x, std::span<const double> y);

struct PowerLawPoint {
  double x;
  double y;
};

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;  // natural-log space
  double r2 = 0.0;
  std::size_t n_points = 0;
  double window_lo = 0.0;  // resource units
  double window_hi = 0.0;
};

/// OLS on (log x, log y) over x in [lo, hi]. Without a window the lowest and
/// highest 10% of the log-x range are dropped.
/// Throws InsufficientDataError with fewer than 3 points in the window and
/// DomainError naming the first non-positive coordinate.
PowerLawFit loglog_fit(std::span<const PowerLawPoint> points,
                       std::optional<std::pair<double, double>> window = std::nullopt);

/// beta = (alpha - 1) / (alpha * compute_slope), compute_slope being the
/// magnitude of the fitted loss-vs-steps slope.
double infer_beta(double alpha, double compute_slope);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

/// Least-squares nondecreasing fit (pool adjacent violators), unit weights.
std::vector<double> isotonic_fit(std::span<const double> y);

struct FitRow {
  std::string series;
  double alpha;
  PowerLawFit fit;
};

/// `series,alpha,slope,intercept,r2,n,window_lo,window_hi`; appends to an
/// existing file, writing the header only when creating it.
void append_fits_csv(const std::filesystem::path& path, std::span<const FitRow> rows);

}  // namespace frontier_lab
