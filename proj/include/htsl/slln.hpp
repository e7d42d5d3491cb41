#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "htsl/ensemble.hpp"
#include "htsl/growth.hpp"

namespace htsl {

enum class Verdict { satisfied, violated, inconclusive };

std::string to_string(Verdict v);

/// Result of evaluating the block moment series
///   sum_n sup_k E|S_{k,a^n} / phi(a^n)|^p
/// over finitely many levels. A Monte Carlo partial sum can never prove
/// convergence; `satisfied` requires an analytic tail certificate (term
/// ratios eventually below 1).
struct SllnCertificate {
  double p = 0.0;
  GrowthFunction phi = GrowthFunction::power(1.0);
  std::uint64_t a = 2;
  double c = 0.0;  // contraction constant paired with (p, c1(phi), a)
  double c1 = 0.0;
  double c2 = 0.0;
  std::vector<double> moment_terms; // per level n = 0..N
  double partial_sum = 0.0;
  std::optional<double> tail_bound; // nullopt = unbounded / not certified
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> flags;

  nlohmann::json to_json() const;
};

/// Estimates sup_{0<=k<=K} E|S_{k,a^n}/phi(a^n)|^p per level from the
/// ensemble and accumulates the partial sum. When `analytic_term` supplies
/// the closed-form per-level value, a ratio test over the upper half of the
/// levels certifies (or refutes) summability; otherwise the verdict stays
/// inconclusive unless every term vanishes.
///
/// Heavy-tail handling: stable ensembles with p >= alpha are flagged
/// (non-finite moment); with alpha/2 < p < alpha the estimator switches to
/// median-of-means over 32 path blocks.
SllnCertificate moment_series(
    const PathEnsemble& ensemble, double p, const GrowthFunction& phi,
    std::uint64_t a, std::size_t levels, std::size_t k_window,
    const std::function<double(std::size_t)>& analytic_term = {});

struct SeriesReport {
  std::vector<double> terms;
  double partial_sum = 0.0;
  std::optional<double> tail_bound;
  double observed_ratio = 0.0; // max term ratio over the upper half
  Verdict verdict = Verdict::inconclusive;

  nlohmann::json to_json() const;
};

/// Series test of the corollary route: terms g(2^n)/phi(2^n)^p for
/// n = 0..N, with a geometric tail bound when the observed term ratios stay
/// below 1. g_level(n) must return g(2^n).
SeriesReport corollary_series(const std::function<double(std::size_t)>& g_level,
                              const GrowthFunction& phi, double p,
                              std::size_t levels);

/// Covariance bound with an optional certified geometric tail ratio.
struct CovarianceBound {
  std::function<double(std::size_t)> f;
  std::optional<double> tail_ratio;
};

struct QuasiStationaryReport {
  double D = 0.0;                  // sum_n a^n / phi(a^n)^2
  std::vector<double> h_table;     // h(1..m_max)
  double weighted_sum_partial = 0.0; // sum_{m<=m_max} f(m) h(m)
  std::optional<double> tail_bound;
  Verdict verdict = Verdict::inconclusive;

  nlohmann::json to_json() const;
};

/// Evaluates the quasi-stationary condition: D, the tail sums h(m), and the
/// weighted series sum_m f(m) h(m), each with certified geometric tails.
/// Throws guard_error when D diverges (term ratio >= 1).
QuasiStationaryReport quasi_stationary_series(const CovarianceBound& f,
                                              const GrowthFunction& phi,
                                              std::uint64_t a,
                                              std::size_t m_max);

struct RecursionCertificate {
  std::vector<double> f_bounds;  // F_0..F_{N}; F_{n+1} = c F_n + term_n
  double limit_bound = 0.0;      // sup of the sequence
  double summed_bound = 0.0;     // (F_0 + sum terms) / (1 - c)
  bool floored_negative_terms = false;
};

/// Unrolls the proof recursion F_{n+1} <= c F_n + G_n from measured term
/// sequences. Negative estimated terms are floored at 0 and flagged.
RecursionCertificate recursion_certificate(std::vector<double> terms, double c,
                                           double f0 = 0.0);

struct SssiMomentReport {
  std::vector<double> ratios; // r_n, n = 0..N
  std::vector<std::string> flags;
};

/// Per-level check of E|X(a^n) - X(0)|^p = a^{nHp} E|X(1) - X(0)|^p on an
/// ensemble of process values sampled at integers. Uses the process-value
/// difference form X(k+a^n) - X(k) (a^n increments), one index short of the
/// inclusive S_{k,a^n} convention; see the module notes.
SssiMomentReport sssi_moment_identity(const PathEnsemble& values, double hurst,
                                      double p, std::uint64_t a,
                                      std::size_t levels);

} // namespace htsl
