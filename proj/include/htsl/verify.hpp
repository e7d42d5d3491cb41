#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "htsl/ensemble.hpp"
#include "htsl/growth.hpp"
#include "htsl/slln.hpp"

namespace htsl {

struct TailFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

struct LevelStats {
  std::size_t level = 0;
  // quantiles over paths of |S_{0,a^n}| / phi(a^n)
  double sum_q10 = 0.0, sum_q50 = 0.0, sum_q90 = 0.0;
  // quantiles over paths of M_{a^n,a^n} / phi(a^n)
  double max_q10 = 0.0, max_q50 = 0.0, max_q90 = 0.0;
};

/// Per-dyadic-level Monte Carlo diagnostics. The decay score is the
/// fraction of paths whose normalized |S_{0,a^n}| at the last level lies
/// below its value at the first level; a statistic obeying the SLLN scores
/// near 1, a CLT-scale statistic scores near 1/2.
struct DiagnosticsReport {
  std::vector<LevelStats> levels;
  double decay_score = 0.0;      // on the normalized partial sum
  double decay_score_max = 0.0;  // on the normalized block maximum
  std::optional<TailFit> tail;
  nlohmann::json meta;

  nlohmann::json to_json() const;
  void write_csv(const std::filesystem::path& file) const; // tidy: level,statistic,value
};

/// Walks the source once per (path, phi) and reports quantile decay of
/// |S_{0,a^n}|/phi(a^n) and M_{a^n,a^n}/phi(a^n) for n = 0..levels.
/// Rows must be at least 2*a^levels + 1 long. The multi-phi overload shares
/// one pass over the data across all normalizers.
std::vector<DiagnosticsReport> decay_diagnostic(
    const IncrementSource& source, std::span<const GrowthFunction> phis,
    std::uint64_t a, std::size_t levels);

DiagnosticsReport decay_diagnostic(const IncrementSource& source,
                                   const GrowthFunction& phi, std::uint64_t a,
                                   std::size_t levels);

DiagnosticsReport decay_diagnostic(const PathEnsemble& ensemble,
                                   const GrowthFunction& phi, std::uint64_t a,
                                   std::size_t levels);

/// Least-squares fit of log empirical survival against log u over a
/// geometric grid of 12 points between the 90th and 99.9th percentile
/// (or the supplied range). Needs >= 1000 positive samples and at least
/// 5 grid points with nonzero survival.
TailFit tail_exponent(std::vector<double> sup_samples,
                      std::optional<std::pair<double, double>> u_range = {});

struct BorelCantelliBudget {
  std::vector<double> bounds; // K n^-e, n = 1..N
  double partial_sum = 0.0;
  std::optional<double> tail_bound; // K N^(1-e) / (e-1) when e > 1
  Verdict verdict = Verdict::inconclusive;

  nlohmann::json to_json() const;
};

/// Summability witness behind the Borel-Cantelli steps: per-level bounds
/// K n^-e and their sum. e <= 1 with K > 0 gives verdict violated.
BorelCantelliBudget borel_cantelli_budget(double k_const, double exponent,
                                          std::size_t levels);

/// Per-level quantiles of
///   sup_{a^n <= t <= a^(n+1)} |X(t) - X(a^n)| / (a^{nH} (log a^n)^(1/p+eps))
/// over a value ensemble on a uniform grid, for n = level_min..levels.
/// The sup is the grid max; requires >= 64 grid points inside the smallest
/// reported block.
DiagnosticsReport bridge_check(const PathEnsemble& values, std::uint64_t a,
                               double hurst, double p, double eps,
                               std::size_t levels, std::size_t level_min = 1);

} // namespace htsl
