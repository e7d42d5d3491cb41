#include "htsl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>

#include "htsl/errors.hpp"
#include "htsl/parallel.hpp"
#include "htsl/stats.hpp"

namespace htsl {

namespace {
constexpr int kSchemaVersion = 1;
} // namespace

nlohmann::json DiagnosticsReport::to_json() const {
  nlohmann::json lv = nlohmann::json::array();
  for (const auto& s : levels) {
    lv.push_back({{"level", s.level},
                  {"sum_q10", s.sum_q10},
                  {"sum_q50", s.sum_q50},
                  {"sum_q90", s.sum_q90},
                  {"max_q10", s.max_q10},
                  {"max_q50", s.max_q50},
                  {"max_q90", s.max_q90}});
  }
  nlohmann::json j = {{"schema_version", kSchemaVersion},
                      {"type", "diagnostics-report"},
                      {"levels", lv},
                      {"decay_score", decay_score},
                      {"decay_score_max", decay_score_max},
                      {"meta", meta}};
  if (tail) {
    j["tail_fit"] = {{"slope", tail->slope},
                     {"stderr", tail->stderr_},
                     {"r2", tail->r2},
                     {"points", tail->points}};
  }
  return j;
}

void DiagnosticsReport::write_csv(const std::filesystem::path& file) const {
  std::ofstream os(file, std::ios::binary);
  if (!os) {
    throw std::runtime_error("DiagnosticsReport: cannot open " + file.string());
  }
  os << "level,statistic,value\n";
  char buf[64];
  auto emit = [&](std::size_t level, const char* stat, double v) {
    std::snprintf(buf, sizeof buf, "%zu,%s,%.17g\n", level, stat, v);
    os << buf;
  };
  for (const auto& s : levels) {
    emit(s.level, "sum_q10", s.sum_q10);
    emit(s.level, "sum_q50", s.sum_q50);
    emit(s.level, "sum_q90", s.sum_q90);
    emit(s.level, "max_q10", s.max_q10);
    emit(s.level, "max_q50", s.max_q50);
    emit(s.level, "max_q90", s.max_q90);
  }
  const std::size_t last = levels.empty() ? 0 : levels.back().level;
  emit(last, "decay_score", decay_score);
  emit(last, "decay_score_max", decay_score_max);
  if (tail) {
    emit(last, "tail_slope", tail->slope);
    emit(last, "tail_stderr", tail->stderr_);
    emit(last, "tail_r2", tail->r2);
  }
}

std::vector<DiagnosticsReport> decay_diagnostic(
    const IncrementSource& source, std::span<const GrowthFunction> phis,
    std::uint64_t a, std::size_t levels) {
  if (phis.empty()) {
    throw std::invalid_argument("decay_diagnostic: need at least one phi");
  }
  if (a < 2) {
    throw std::invalid_argument("decay_diagnostic: a must be >= 2");
  }
  const double top = std::pow(static_cast<double>(a),
                              static_cast<double>(levels));
  if (2.0 * top + 1.0 > static_cast<double>(source.length)) {
    throw std::invalid_argument(
        "decay_diagnostic: rows must hold at least 2*a^levels + 1 increments");
  }
  const std::size_t n_levels = levels + 1;
  const std::size_t need = 2 * static_cast<std::size_t>(top) + 1;

  // Raw per-path statistics (phi-independent): |S_{0,a^n}| and M_{a^n,a^n}.
  std::vector<double> abs_sum(source.paths * n_levels);
  std::vector<double> blk_max(source.paths * n_levels);

  parallel_for(source.paths, [&](std::size_t p) {
    thread_local std::vector<double> row;
    row.resize(source.length);
    source.fill(p, row);
    std::uint64_t block = 1;
    for (std::size_t n = 0; n < n_levels; ++n, block *= a) {
      abs_sum[p * n_levels + n] = std::abs(partial_sum(row, 0, block));
      blk_max[p * n_levels + n] = running_max(row, block, block);
    }
    (void)need;
  });

  std::vector<DiagnosticsReport> out;
  std::vector<double> sum_stat(source.paths), max_stat(source.paths);
  std::vector<double> first_vals(source.paths), last_vals(source.paths);
  std::vector<double> first_max(source.paths), last_max(source.paths);
  for (const auto& phi : phis) {
    DiagnosticsReport rep;
    std::uint64_t block = 1;
    for (std::size_t n = 0; n < n_levels; ++n, block *= a) {
      const double norm = phi(static_cast<double>(block));
      for (std::size_t p = 0; p < source.paths; ++p) {
        sum_stat[p] = abs_sum[p * n_levels + n] / norm;
        max_stat[p] = blk_max[p * n_levels + n] / norm;
      }
      if (n == 0) {
        first_vals = sum_stat;
        first_max = max_stat;
      }
      if (n + 1 == n_levels) {
        last_vals = sum_stat;
        last_max = max_stat;
      }
      LevelStats s;
      s.level = n;
      s.sum_q10 = quantile(sum_stat, 0.1);
      s.sum_q50 = quantile(sum_stat, 0.5);
      s.sum_q90 = quantile(sum_stat, 0.9);
      s.max_q10 = quantile(max_stat, 0.1);
      s.max_q50 = quantile(max_stat, 0.5);
      s.max_q90 = quantile(max_stat, 0.9);
      rep.levels.push_back(s);
    }
    std::size_t below = 0, below_max = 0;
    for (std::size_t p = 0; p < source.paths; ++p) {
      below += last_vals[p] < first_vals[p];
      below_max += last_max[p] < first_max[p];
    }
    rep.decay_score = static_cast<double>(below) / source.paths;
    rep.decay_score_max = static_cast<double>(below_max) / source.paths;
    rep.meta = {{"a", a}, {"levels", levels}, {"paths", source.paths},
                {"phi", phi.to_json()}};
    out.push_back(std::move(rep));
  }
  return out;
}

DiagnosticsReport decay_diagnostic(const IncrementSource& source,
                                   const GrowthFunction& phi, std::uint64_t a,
                                   std::size_t levels) {
  return decay_diagnostic(source, std::span<const GrowthFunction>(&phi, 1), a,
                          levels)
      .front();
}

DiagnosticsReport decay_diagnostic(const PathEnsemble& ensemble,
                                   const GrowthFunction& phi, std::uint64_t a,
                                   std::size_t levels) {
  return decay_diagnostic(ensemble_source(ensemble), phi, a, levels);
}

TailFit tail_exponent(std::vector<double> sup_samples,
                      std::optional<std::pair<double, double>> u_range) {
  if (sup_samples.size() < 1000) {
    throw std::invalid_argument("tail_exponent: need >= 1000 samples");
  }
  for (double v : sup_samples) {
    if (!(v > 0.0)) {
      throw std::invalid_argument("tail_exponent: samples must be positive");
    }
  }
  double u_lo, u_hi;
  if (u_range) {
    u_lo = u_range->first;
    u_hi = u_range->second;
  } else {
    u_lo = quantile(sup_samples, 0.90);
    u_hi = quantile(sup_samples, 0.999);
  }
  if (!(u_hi > u_lo && u_lo > 0.0)) {
    throw std::invalid_argument("tail_exponent: degenerate u range (no tail to fit)");
  }

  std::sort(sup_samples.begin(), sup_samples.end());
  const std::size_t kPoints = 12;
  std::vector<double> log_u, log_s;
  const double n = static_cast<double>(sup_samples.size());
  for (std::size_t i = 0; i < kPoints; ++i) {
    const double u = u_lo * std::pow(u_hi / u_lo,
                                     static_cast<double>(i) / (kPoints - 1));
    const auto it = std::upper_bound(sup_samples.begin(), sup_samples.end(), u);
    const double survivors =
        static_cast<double>(std::distance(it, sup_samples.end()));
    if (survivors > 0.0) {
      log_u.push_back(std::log(u));
      log_s.push_back(std::log(survivors / n));
    }
  }
  if (log_u.size() < 5) {
    throw std::invalid_argument(
        "tail_exponent: fewer than 5 grid points with nonzero survival");
  }
  const LinearFit f = least_squares(log_u, log_s);
  TailFit t;
  t.slope = f.slope;
  t.stderr_ = f.slope_stderr;
  t.r2 = f.r2;
  t.points = log_u.size();
  return t;
}

nlohmann::json BorelCantelliBudget::to_json() const {
  return {{"schema_version", kSchemaVersion},
          {"type", "borel-cantelli-budget"},
          {"bounds", bounds},
          {"partial_sum", partial_sum},
          {"tail_bound", tail_bound ? nlohmann::json(*tail_bound) : nlohmann::json("unbounded")},
          {"verdict", to_string(verdict)}};
}

BorelCantelliBudget borel_cantelli_budget(double k_const, double exponent,
                                          std::size_t levels) {
  if (!(k_const >= 0.0)) {
    throw std::invalid_argument("borel_cantelli_budget: K must be >= 0");
  }
  BorelCantelliBudget b;
  for (std::size_t n = 1; n <= levels; ++n) {
    const double v =
        k_const * std::pow(static_cast<double>(n), -exponent);
    b.bounds.push_back(v);
    b.partial_sum += v;
  }
  if (k_const == 0.0) {
    b.tail_bound = 0.0;
    b.verdict = Verdict::satisfied;
  } else if (exponent > 1.0) {
    b.tail_bound = k_const *
                   std::pow(static_cast<double>(levels), 1.0 - exponent) /
                   (exponent - 1.0);
    b.verdict = Verdict::satisfied;
  } else {
    b.verdict = Verdict::violated; // harmonic or worse: series diverges
  }
  return b;
}

DiagnosticsReport bridge_check(const PathEnsemble& values, std::uint64_t a,
                               double hurst, double p, double eps,
                               std::size_t levels, std::size_t level_min) {
  if (a < 2 || level_min < 1 || level_min > levels) {
    throw std::invalid_argument("bridge_check: need a >= 2, 1 <= level_min <= levels");
  }
  if (!(p > 0.0) || !(eps > 0.0) || !(hurst > 0.0)) {
    throw std::invalid_argument("bridge_check: p, eps, hurst must be positive");
  }
  const double step = values.grid_step;
  const double top_time = std::pow(static_cast<double>(a),
                                   static_cast<double>(levels + 1));
  const std::size_t need =
      static_cast<std::size_t>(std::ceil(top_time / step)) + 1;
  if (need > values.points) {
    throw std::invalid_argument("bridge_check: ensemble does not reach a^(levels+1)");
  }
  const double min_block = std::pow(static_cast<double>(a),
                                    static_cast<double>(level_min)) *
                           (static_cast<double>(a) - 1.0);
  if (min_block / step < 64.0) {
    throw guard_error("bridge_check: grid too coarse; smallest reported block "
                      "resolves fewer than 64 points");
  }

  DiagnosticsReport rep;
  std::vector<double> stat(values.paths);
  std::vector<double> first_vals, last_vals;
  for (std::size_t n = level_min; n <= levels; ++n) {
    const double t0 = std::pow(static_cast<double>(a), static_cast<double>(n));
    const double t1 = t0 * static_cast<double>(a);
    const std::size_t i0 = static_cast<std::size_t>(std::llround(t0 / step));
    const std::size_t i1 = static_cast<std::size_t>(
        std::min(std::llround(t1 / step),
                 static_cast<long long>(values.points - 1)));
    const double norm =
        std::pow(t0, hurst) * std::pow(std::log(t0), 1.0 / p + eps);
    for (std::size_t pth = 0; pth < values.paths; ++pth) {
      auto row = values.row(pth);
      const double base = row[i0];
      double sup = 0.0;
      for (std::size_t i = i0; i <= i1; ++i) {
        sup = std::max(sup, std::abs(row[i] - base));
      }
      stat[pth] = sup / norm;
    }
    if (n == level_min) first_vals = stat;
    if (n == levels) last_vals = stat;
    LevelStats s;
    s.level = n;
    s.sum_q10 = quantile(stat, 0.1);
    s.sum_q50 = quantile(stat, 0.5);
    s.sum_q90 = quantile(stat, 0.9);
    s.max_q10 = s.sum_q10;
    s.max_q50 = s.sum_q50;
    s.max_q90 = s.sum_q90;
    rep.levels.push_back(s);
  }
  std::size_t below = 0;
  for (std::size_t pth = 0; pth < values.paths; ++pth) {
    below += last_vals[pth] < first_vals[pth];
  }
  rep.decay_score = static_cast<double>(below) / values.paths;
  rep.decay_score_max = rep.decay_score;
  rep.meta = {{"a", a},       {"levels", levels}, {"level_min", level_min},
              {"hurst", hurst}, {"p", p},         {"eps", eps},
              {"statistic", "bridge-sup"}};
  return rep;
}

} // namespace htsl
