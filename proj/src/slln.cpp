#include "htsl/slln.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "htsl/errors.hpp"
#include "htsl/stats.hpp"

namespace htsl {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::satisfied: return "satisfied";
    case Verdict::violated: return "violated";
    default: return "inconclusive";
  }
}

namespace {

constexpr int kSchemaVersion = 1;

// Ratio test over the upper half of a positive term sequence. Returns the
// max observed ratio; the certificate extrapolates it as a geometric bound
// for the unseen tail, which is exact for geometric families and a
// monotone-ratio assumption for slowly varying ones.
struct RatioTest {
  double r = 0.0;
  double r_min = 2.0;
  bool usable = false;
};

RatioTest tail_ratio_test(const std::vector<double>& terms) {
  RatioTest t;
  if (terms.size() < 4) return t;
  const std::size_t from = terms.size() / 2;
  for (std::size_t n = from; n + 1 < terms.size(); ++n) {
    if (terms[n] <= 0.0) {
      return t; // zero term: treat tail as already vanished
    }
    const double r = terms[n + 1] / terms[n];
    t.r = std::max(t.r, r);
    t.r_min = std::min(t.r_min, r);
  }
  t.usable = true;
  return t;
}

void apply_series_verdict(const std::vector<double>& terms, double& partial,
                          std::optional<double>& tail, Verdict& verdict) {
  partial = 0.0;
  for (double v : terms) partial += v;
  const bool all_zero =
      std::all_of(terms.begin(), terms.end(), [](double v) { return v == 0.0; });
  if (all_zero) {
    tail = 0.0;
    verdict = Verdict::satisfied;
    return;
  }
  const RatioTest t = tail_ratio_test(terms);
  if (!t.usable) {
    verdict = Verdict::inconclusive;
    return;
  }
  if (t.r < 1.0 - 1e-9) {
    tail = terms.back() * t.r / (1.0 - t.r);
    verdict = Verdict::satisfied;
  } else if (t.r_min >= 1.0 - 1e-12 && terms.back() > 0.0) {
    verdict = Verdict::violated; // terms not even vanishing
  } else {
    verdict = Verdict::inconclusive;
  }
}

} // namespace

nlohmann::json SllnCertificate::to_json() const {
  return {{"schema_version", kSchemaVersion},
          {"type", "slln-certificate"},
          {"p", p},
          {"phi", phi.to_json()},
          {"a", a},
          {"c", c},
          {"c1", c1},
          {"c2", c2},
          {"moment_terms", moment_terms},
          {"partial_sum", partial_sum},
          {"tail_bound", tail_bound ? nlohmann::json(*tail_bound) : nlohmann::json("unbounded")},
          {"verdict", to_string(verdict)},
          {"flags", flags}};
}

SllnCertificate moment_series(
    const PathEnsemble& ensemble, double p, const GrowthFunction& phi,
    std::uint64_t a, std::size_t levels, std::size_t k_window,
    const std::function<double(std::size_t)>& analytic_term) {
  if (!(p > 0.0)) {
    throw std::invalid_argument("moment_series: p must be positive");
  }
  if (a < 2) {
    throw std::invalid_argument("moment_series: a must be >= 2");
  }
  const double top_block = std::pow(static_cast<double>(a),
                                    static_cast<double>(levels));
  if (top_block + static_cast<double>(k_window) + 1.0 >
      static_cast<double>(ensemble.points)) {
    throw std::invalid_argument(
        "moment_series: ensemble rows shorter than k_window + a^levels + 1");
  }

  SllnCertificate cert;
  cert.p = p;
  cert.phi = phi;
  cert.a = a;

  // Structural constants from the growth module.
  const DoublingBounds db =
      doubling_bounds(phi, std::max(2.0 * top_block, 4.0 * phi.x0()));
  cert.c1 = db.c1;
  cert.c2 = db.c2;
  cert.c = contraction_constant(p, db.c1, a);
  if (cert.c >= 1.0) {
    cert.flags.push_back("contraction constant >= 1: block base not admissible");
  }

  // Heavy-tail routing from the generating spec.
  bool median_of_means = false;
  if (ensemble.meta.contains("law") &&
      ensemble.meta["law"].contains("alpha")) {
    const double alpha = ensemble.meta["law"]["alpha"].get<double>();
    if (alpha < 2.0) {
      if (p >= alpha) {
        cert.flags.push_back("p >= alpha: p-th moment non-finite for stable law");
      } else if (p > 0.5 * alpha) {
        median_of_means = true;
        cert.flags.push_back("median-of-means moment estimator (p close to alpha)");
      }
    }
  }

  // Prefix sums per path make S_{k,a^n} an O(1) lookup.
  std::vector<std::vector<double>> prefix(ensemble.paths);
  for (std::size_t pth = 0; pth < ensemble.paths; ++pth) {
    auto r = ensemble.row(pth);
    prefix[pth].resize(r.size() + 1);
    prefix[pth][0] = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      prefix[pth][i + 1] = prefix[pth][i] + r[i];
    }
  }

  std::vector<double> per_path(ensemble.paths);
  std::uint64_t block = 1;
  for (std::size_t n = 0; n <= levels; ++n, block *= a) {
    const double norm = std::pow(phi(static_cast<double>(block)), p);
    double sup = 0.0;
    for (std::size_t k = 0; k <= k_window; ++k) {
      for (std::size_t pth = 0; pth < ensemble.paths; ++pth) {
        // inclusive convention: S_{k,b} spans entries k..k+b
        per_path[pth] = prefix[pth][k + block + 1] - prefix[pth][k];
      }
      const double est = median_of_means
                             ? moment_p_median_of_means(per_path, p)
                             : moment_p(per_path, p);
      sup = std::max(sup, est / norm);
    }
    cert.moment_terms.push_back(sup);
  }

  if (analytic_term) {
    std::vector<double> analytic(levels + 1);
    for (std::size_t n = 0; n <= levels; ++n) {
      analytic[n] = analytic_term(n);
    }
    double dummy_partial;
    std::optional<double> tail;
    Verdict verdict = Verdict::inconclusive;
    apply_series_verdict(analytic, dummy_partial, tail, verdict);
    cert.tail_bound = tail;
    cert.verdict = verdict;
    cert.partial_sum = 0.0;
    for (double v : cert.moment_terms) cert.partial_sum += v;
  } else {
    apply_series_verdict(cert.moment_terms, cert.partial_sum, cert.tail_bound,
                         cert.verdict);
    if (cert.verdict == Verdict::violated) {
      // Empirical terms alone cannot refute the hypothesis either.
      cert.verdict = Verdict::inconclusive;
    } else if (cert.verdict == Verdict::satisfied &&
               !std::all_of(cert.moment_terms.begin(), cert.moment_terms.end(),
                            [](double v) { return v == 0.0; })) {
      cert.verdict = Verdict::inconclusive;
      cert.tail_bound.reset();
    }
  }
  if (!cert.flags.empty() && cert.verdict == Verdict::satisfied &&
      std::find_if(cert.flags.begin(), cert.flags.end(), [](const auto& f) {
        return f.find("non-finite") != std::string::npos;
      }) != cert.flags.end()) {
    cert.verdict = Verdict::inconclusive;
  }
  return cert;
}

nlohmann::json SeriesReport::to_json() const {
  return {{"schema_version", kSchemaVersion},
          {"type", "series-report"},
          {"terms", terms},
          {"partial_sum", partial_sum},
          {"tail_bound", tail_bound ? nlohmann::json(*tail_bound) : nlohmann::json("unbounded")},
          {"observed_ratio", observed_ratio},
          {"verdict", to_string(verdict)}};
}

SeriesReport corollary_series(const std::function<double(std::size_t)>& g_level,
                              const GrowthFunction& phi, double p,
                              std::size_t levels) {
  if (!g_level) {
    throw std::invalid_argument("corollary_series: g_level must be callable");
  }
  SeriesReport rep;
  for (std::size_t n = 0; n <= levels; ++n) {
    const double x = std::pow(2.0, static_cast<double>(n));
    const double g = g_level(n);
    if (!(g >= 0.0)) {
      throw std::invalid_argument("corollary_series: g must be nonnegative");
    }
    rep.terms.push_back(g / std::pow(phi(x), p));
  }
  apply_series_verdict(rep.terms, rep.partial_sum, rep.tail_bound, rep.verdict);
  rep.observed_ratio = tail_ratio_test(rep.terms).r;
  return rep;
}

nlohmann::json QuasiStationaryReport::to_json() const {
  return {{"schema_version", kSchemaVersion},
          {"type", "quasi-stationary-report"},
          {"D", D},
          {"h_table", h_table},
          {"weighted_sum_partial", weighted_sum_partial},
          {"tail_bound", tail_bound ? nlohmann::json(*tail_bound) : nlohmann::json("unbounded")},
          {"verdict", to_string(verdict)}};
}

namespace {

// sum_{n >= n0} a^n / phi(a^n)^2, summed until the terms fall below
// relative machine precision. Throws guard_error if the term ratio fails
// to contract.
double certified_tail_sum(const GrowthFunction& phi, std::uint64_t a,
                          std::size_t n0) {
  double sum = 0.0;
  double block = std::pow(static_cast<double>(a), static_cast<double>(n0));
  double prev = -1.0;
  for (std::size_t n = n0; n < n0 + 2000; ++n, block *= a) {
    const double ph = phi(block);
    const double term = block / (ph * ph);
    if (prev >= 0.0 && term >= prev * (1.0 - 1e-12)) {
      throw guard_error(
          "quasi_stationary_series: a^n/phi(a^n)^2 is not contracting; D diverges");
    }
    sum += term;
    if (term < 1e-18 * sum) {
      return sum;
    }
    prev = term;
  }
  throw guard_error("quasi_stationary_series: series did not converge in 2000 terms");
}

} // namespace

QuasiStationaryReport quasi_stationary_series(const CovarianceBound& f,
                                              const GrowthFunction& phi,
                                              std::uint64_t a,
                                              std::size_t m_max) {
  if (!f.f) {
    throw std::invalid_argument("quasi_stationary_series: f must be callable");
  }
  if (a < 2 || m_max < 1) {
    throw std::invalid_argument("quasi_stationary_series: need a >= 2, m_max >= 1");
  }
  QuasiStationaryReport rep;
  rep.D = certified_tail_sum(phi, a, 0);

  // h(m) is constant between powers of a; cache per floor(log_a m).
  const double la = std::log(static_cast<double>(a));
  std::vector<double> h_by_level;
  rep.h_table.resize(m_max);
  for (std::size_t m = 1; m <= m_max; ++m) {
    const std::size_t n0 = static_cast<std::size_t>(
        std::floor(std::log(static_cast<double>(m)) / la + 1e-12));
    if (n0 >= h_by_level.size()) {
      h_by_level.resize(n0 + 1, -1.0);
    }
    if (h_by_level[n0] < 0.0) {
      h_by_level[n0] = certified_tail_sum(phi, a, n0);
    }
    rep.h_table[m - 1] = h_by_level[n0];
  }

  for (std::size_t m = 1; m <= m_max; ++m) {
    const double fm = f.f(m);
    if (!(fm >= 0.0)) {
      throw std::invalid_argument("quasi_stationary_series: f must be nonnegative");
    }
    rep.weighted_sum_partial += fm * rep.h_table[m - 1];
  }

  if (f.tail_ratio && *f.tail_ratio < 1.0) {
    // h is nonincreasing, so the tail is dominated by a geometric series.
    const double r = *f.tail_ratio;
    rep.tail_bound = f.f(m_max) * rep.h_table[m_max - 1] * r / (1.0 - r);
    rep.verdict = Verdict::satisfied;
  } else {
    rep.verdict = Verdict::inconclusive;
  }
  return rep;
}

RecursionCertificate recursion_certificate(std::vector<double> terms, double c,
                                           double f0) {
  if (!(c > 0.0 && c < 1.0)) {
    throw std::invalid_argument("recursion_certificate: need 0 < c < 1");
  }
  if (!(f0 >= 0.0)) {
    throw std::invalid_argument("recursion_certificate: F0 must be >= 0");
  }
  RecursionCertificate cert;
  double term_sum = 0.0;
  for (double& t : terms) {
    if (t < 0.0) {
      t = 0.0;
      cert.floored_negative_terms = true;
    }
    term_sum += t;
  }
  cert.f_bounds.resize(terms.size() + 1);
  cert.f_bounds[0] = f0;
  double f = f0;
  for (std::size_t n = 0; n < terms.size(); ++n) {
    f = c * f + terms[n];
    cert.f_bounds[n + 1] = f;
  }
  cert.limit_bound = *std::max_element(cert.f_bounds.begin(), cert.f_bounds.end());
  cert.summed_bound = (f0 + term_sum) / (1.0 - c);
  return cert;
}

SssiMomentReport sssi_moment_identity(const PathEnsemble& values, double hurst,
                                      double p, std::uint64_t a,
                                      std::size_t levels) {
  if (!(hurst > 0.0)) {
    throw std::invalid_argument("sssi_moment_identity: hurst must be positive");
  }
  if (!(p > 0.0)) {
    throw std::invalid_argument("sssi_moment_identity: p must be positive");
  }
  const double top = std::pow(static_cast<double>(a), static_cast<double>(levels));
  if (top + 1.0 > static_cast<double>(values.points)) {
    throw std::invalid_argument("sssi_moment_identity: ensemble too short");
  }

  SssiMomentReport rep;
  if (values.meta.contains("alpha")) {
    const double alpha = values.meta["alpha"].get<double>();
    if (alpha < 2.0 && p >= alpha) {
      rep.flags.push_back("p >= alpha: p-th moment non-finite for stable input");
    }
  }
  rep.flags.push_back("increment form X(k+a^n)-X(k)");

  std::vector<double> diff(values.paths);
  for (std::size_t pth = 0; pth < values.paths; ++pth) {
    diff[pth] = values.row(pth)[1] - values.row(pth)[0];
  }
  const double base = moment_p(diff, p);
  std::uint64_t block = 1;
  for (std::size_t n = 0; n <= levels; ++n, block *= a) {
    for (std::size_t pth = 0; pth < values.paths; ++pth) {
      diff[pth] = values.row(pth)[block] - values.row(pth)[0];
    }
    const double scaled =
        std::pow(static_cast<double>(block), hurst * p) * base;
    rep.ratios.push_back(moment_p(diff, p) / scaled);
  }
  return rep;
}

} // namespace htsl
