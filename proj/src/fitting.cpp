#include "frontier_lab/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "frontier_lab/csv_io.hpp"
#include "frontier_lab/errors.hpp"

namespace frontier_lab {

LineFit ols(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw InsufficientDataError("ols: need at least two paired points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw InsufficientDataError("ols: x values are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) {
    fit.r2 = 1.0;
  } else {
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - (fit.intercept + fit.slope * x[i]);
      sse += e * e;
    }
    fit.r2 = std::clamp(1.0 - sse / syy, 0.0, 1.0);
  }
  return fit;
}

PowerLawFit loglog_fit(std::span<const PowerLawPoint> points, std::optional<std::pair<double, double>> window) {
  double lo = 0.0;
  double hi = 0.0;
  if (window) {
    std::tie(lo, hi) = *window;
  } else {
    double xmin = INFINITY;
    double xmax = 0.0;
    for (const auto& pt : points) {
      if (pt.x > 0.0) {
        xmin = std::min(xmin, pt.x);
        xmax = std::max(xmax, pt.x);
      }
    }
    if (!(xmax > 0.0)) throw InsufficientDataError("loglog_fit: no positive x values");
    const double lmin = std::log(xmin);
    const double span = std::log(xmax) - lmin;
    // Small slack so grid points sitting exactly on the trim edge survive rounding.
    lo = std::exp(lmin + 0.1 * span) * (1.0 - 1e-12);
    hi = std::exp(lmin + 0.9 * span) * (1.0 + 1e-12);
  }

  std::vector<double> lx;
  std::vector<double> ly;
  for (const auto& pt : points) {
    if (!(pt.x >= lo && pt.x <= hi)) continue;
    if (!(pt.x > 0.0) || !(pt.y > 0.0)) {
      throw DomainError("loglog_fit: non-positive point (" + format_double(pt.x) + ", " + format_double(pt.y) +
                        ")");
    }
    lx.push_back(std::log(pt.x));
    ly.push_back(std::log(pt.y));
  }
  if (lx.size() < 3) {
    throw InsufficientDataError("loglog_fit: " + std::to_string(lx.size()) + " points in window, need 3");
  }
  const LineFit line = ols(lx, ly);
  PowerLawFit fit;
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r2 = line.r2;
  fit.n_points = lx.size();
  fit.window_lo = lo;
  fit.window_hi = hi;
  return fit;
}

double infer_beta(double alpha, double compute_slope) {
  if (!(compute_slope > 0.0)) throw DomainError("infer_beta: compute slope magnitude must be positive");
  if (!(alpha > 1.0)) throw DomainError("infer_beta: alpha must exceed 1");
  return (alpha - 1.0) / (alpha * compute_slope);
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InsufficientDataError("spearman: need two paired samples");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> isotonic_fit(std::span<const double> y) {
  struct Block {
    double sum;
    std::size_t count;
  };
  std::vector<Block> blocks;
  blocks.reserve(y.size());
  for (double v : y) {
    blocks.push_back({v, 1});
    while (blocks.size() > 1) {
      const Block& b = blocks.back();
      const Block& a = blocks[blocks.size() - 2];
      if (a.sum * static_cast<double>(b.count) <= b.sum * static_cast<double>(a.count)) break;
      const Block merged{a.sum + b.sum, a.count + b.count};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (const auto& b : blocks) out.insert(out.end(), b.count, b.sum / static_cast<double>(b.count));
  return out;
}

void append_fits_csv(const std::filesystem::path& path, std::span<const FitRow> rows) {
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  if (fresh) out << "series,alpha,slope,intercept,r2,n,window_lo,window_hi\n";
  for (const auto& r : rows) {
    out << r.series << ',' << format_double(r.alpha) << ',' << format_double(r.fit.slope) << ','
        << format_double(r.fit.intercept) << ',' << format_double(r.fit.r2) << ',' << r.fit.n_points << ','
        << format_double(r.fit.window_lo) << ',' << format_double(r.fit.window_hi) << '\n';
  }
}

}  // namespace frontier_lab
