#include "frontier_lab/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "frontier_lab/csv_io.hpp"
#include "frontier_lab/errors.hpp"
#include "frontier_lab/numerics.hpp"

namespace frontier_lab {

ResidualProfile make_profile(std::vector<double> residuals, ZipfModel weights) {
  if (residuals.empty()) throw DomainError("residual profile must not be empty");
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    const double q = residuals[i];
    if (!(q >= 0.0 && q <= 1.0)) {
      throw DomainError("residual q_" + std::to_string(i + 1) + " = " + std::to_string(q) +
                        " outside [0, 1]");
    }
  }
  if (weights.support() && *weights.support() < residuals.size()) {
    throw DomainError("residual profile longer than the Zipf support");
  }
  return ResidualProfile{std::move(residuals), std::move(weights)};
}

std::vector<double> monotone_envelope(std::span<const double> residuals) {
  std::vector<double> env(residuals.begin(), residuals.end());
  for (std::size_t i = 1; i < env.size(); ++i) env[i] = std::max(env[i], env[i - 1]);
  return env;
}

FrontierExtraction extract_frontier(const ResidualProfile& profile, double delta) {
  if (profile.residuals.empty()) throw DomainError("extract_frontier: empty profile");
  if (!(delta > 0.0 && delta <= 0.5)) throw DomainError("extract_frontier: delta must lie in (0, 0.5]");

  const auto env = monotone_envelope(profile.residuals);
  const std::uint64_t K = env.size();
  const auto q = [&](std::uint64_t k) { return env[k - 1]; };

  FrontierExtraction out;
  out.delta = delta;
  out.k_minus = 0;
  while (out.k_minus < K && q(out.k_minus + 1) <= delta) ++out.k_minus;
  out.k_plus = 1;
  while (out.k_plus <= K && q(out.k_plus) < 1.0 - delta) ++out.k_plus;

  if (out.k_minus == K) {
    out.k_star = static_cast<double>(K);
    out.saturation = Saturation::all_learned;
    return out;
  }
  if (out.k_plus == 1) {
    out.k_star = 1.0;
    out.saturation = Saturation::all_unlearned;
    return out;
  }

  // Crossing of `level` between ranks a and a + 1, in log k.
  const auto crossing = [&](std::uint64_t a, double level) {
    const double qa = q(a);
    const double qb = q(a + 1);
    const double frac = qb > qa ? std::clamp((level - qa) / (qb - qa), 0.0, 1.0) : 0.0;
    const double la = std::log(static_cast<double>(a));
    return la + frac * (std::log(static_cast<double>(a + 1)) - la);
  };
  const double log_lo = out.k_minus >= 1 ? crossing(out.k_minus, delta) : 0.0;
  const double log_hi =
      out.k_plus <= K ? crossing(out.k_plus - 1, 1.0 - delta) : std::log(static_cast<double>(K));
  out.k_star = std::exp(0.5 * (log_lo + log_hi));
  return out;
}

namespace {

// Probability mass of ranks k with k > x, split into the profile part and the
// mass past the profile (which is always counted as unlearned).
double mass_above(std::span<const double> p, double beyond, double x) {
  const double start = std::floor(std::max(x, 0.0));
  CompensatedSum s;
  for (std::size_t i = p.size(); i-- > 0;) {
    const double k = static_cast<double>(i + 1);
    if (k <= start) break;
    s.add(p[i]);
  }
  s.add(beyond);
  return s.value();
}

double mass_at_or_below(std::span<const double> p, double x) {
  CompensatedSum s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (static_cast<double>(i + 1) > x) break;
    s.add(p[i]);
  }
  return s.value();
}

double unlearned_mass_past(const ResidualProfile& profile) {
  return tail_mass(profile.weights, profile.residuals.size());
}

double weighted_loss(std::span<const double> p, std::span<const double> q, double beyond) {
  CompensatedSum s;
  for (std::size_t i = p.size(); i-- > 0;) s.add(p[i] * q[i]);
  s.add(beyond);
  return s.value();
}

}  // namespace

double weighted_loss(const ResidualProfile& profile) {
  const auto p = profile.weights.probabilities(profile.residuals.size());
  return weighted_loss(p, profile.residuals, unlearned_mass_past(profile));
}

SandwichReport sandwich_check(const ResidualProfile& profile, const FrontierExtraction& extraction,
                              double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("sandwich_check: epsilon must lie in (0, 1)");
  const auto p = profile.weights.probabilities(profile.residuals.size());
  const double beyond = unlearned_mass_past(profile);
  const double delta = extraction.delta;
  const double k_star = extraction.k_star;

  SandwichReport r;
  r.lower = (1.0 - delta) * mass_above(p, beyond, (1.0 + epsilon) * k_star);
  r.actual = weighted_loss(p, profile.residuals, beyond);
  r.upper = delta * mass_at_or_below(p, (1.0 - epsilon) * k_star) +
            mass_above(p, beyond, (1.0 - epsilon) * k_star);
  r.holds = r.lower <= r.actual && r.actual <= r.upper;
  return r;
}

void write_profile_csv(const std::filesystem::path& path, std::span<const ProfileRow> rows) {
  CsvWriter w(path, {"k", "p_k", "q_k"});
  for (const auto& row : rows) {
    w.field(static_cast<unsigned long long>(row.k)).field(row.p).field(row.q);
    w.end_row();
  }
}

void write_profile_csv(const std::filesystem::path& path, const ResidualProfile& profile) {
  const auto p = profile.weights.probabilities(profile.residuals.size());
  std::vector<ProfileRow> rows(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) rows[i] = {i + 1, p[i], profile.residuals[i]};
  write_profile_csv(path, rows);
}

std::vector<ProfileRow> read_profile_csv(const std::filesystem::path& path) {
  const auto table = read_csv(path);
  const std::size_t ck = table.column("k");
  const std::size_t cp = table.column("p_k");
  const std::size_t cq = table.column("q_k");
  std::vector<ProfileRow> rows;
  rows.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    rows.push_back({std::stoull(r[ck]), parse_double(r[cp]), parse_double(r[cq])});
  }
  return rows;
}

}  // namespace frontier_lab
