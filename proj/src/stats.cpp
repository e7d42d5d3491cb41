#include "htsl/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace htsl {

double quantile(std::vector<double> sample, double q) {
  if (sample.empty()) {
    throw std::invalid_argument("quantile: empty sample");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("quantile: q must be in [0, 1]");
  }
  std::sort(sample.begin(), sample.end());
  const double pos = q * static_cast<double>(sample.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sample.size()) return sample.back();
  const double frac = pos - static_cast<double>(lo);
  return sample[lo] * (1.0 - frac) + sample[lo + 1] * frac;
}

double ks_distance(std::vector<double> sample,
                   const std::function<double(double)>& cdf) {
  if (sample.empty()) {
    throw std::invalid_argument("ks_distance: empty sample");
  }
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

double anderson_darling_2sample(std::vector<double> a, std::vector<double> b) {
  const std::size_t n1 = a.size(), n2 = b.size();
  if (n1 < 2 || n2 < 2) {
    throw std::invalid_argument("anderson_darling_2sample: samples too small");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t N = n1 + n2;

  // A^2 for k = 2 samples, continuous data (Scholz & Stephens 1987).
  double a2 = 0.0;
  std::size_t ia = 0, ib = 0;
  for (std::size_t j = 1; j <= N - 1; ++j) {
    // advance past the j-th smallest of the pooled sample
    if (ib >= n2 || (ia < n1 && a[ia] <= b[ib])) {
      ++ia;
    } else {
      ++ib;
    }
    const double jd = static_cast<double>(j);
    const double w = jd * static_cast<double>(N - j);
    const double t1 = static_cast<double>(N) * static_cast<double>(ia) - jd * n1;
    const double t2 = static_cast<double>(N) * static_cast<double>(ib) - jd * n2;
    a2 += (t1 * t1 / n1 + t2 * t2 / n2) / w;
  }
  a2 /= static_cast<double>(N);

  // Standardization: T = (A^2 - (k-1)) / sigma, k = 2.
  const double k = 2.0;
  const double H = 1.0 / n1 + 1.0 / n2;
  std::vector<double> harm(N + 1, 0.0);
  for (std::size_t i = 1; i <= N; ++i) {
    harm[i] = harm[i - 1] + 1.0 / static_cast<double>(i);
  }
  const double h = harm[N - 1];
  double g = 0.0;
  for (std::size_t j = 2; j <= N - 1; ++j) {
    g += (harm[N - 1] - harm[N - j]) / static_cast<double>(j);
  }
  const double Nd = static_cast<double>(N);
  const double A = (4.0 * g - 6.0) * (k - 1.0) + (10.0 - 6.0 * g) * H;
  const double B = (2.0 * g - 4.0) * k * k + 8.0 * h * k +
                   (2.0 * g - 14.0 * h - 4.0) * H - 8.0 * h + 4.0 * g - 6.0;
  const double C = (6.0 * h + 2.0 * g - 2.0) * k * k +
                   (4.0 * h - 4.0 * g + 6.0) * k + (2.0 * h - 6.0) * H +
                   4.0 * h;
  const double D = (2.0 * h + 6.0) * k * k - 4.0 * h * k;
  const double var = (A * Nd * Nd * Nd + B * Nd * Nd + C * Nd + D) /
                     ((Nd - 1.0) * (Nd - 2.0) * (Nd - 3.0));
  return (a2 - (k - 1.0)) / std::sqrt(var);
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw std::invalid_argument("least_squares: need >= 3 matched points");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) {
    throw std::invalid_argument("least_squares: degenerate x values");
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r2 = (syy == 0.0) ? 1.0 : 1.0 - ss_res / syy;
  f.slope_stderr =
      (x.size() > 2) ? std::sqrt(ss_res / (n - 2.0) / sxx) : 0.0;
  return f;
}

double moment_p(std::span<const double> sample, double p) {
  if (sample.empty()) {
    throw std::invalid_argument("moment_p: empty sample");
  }
  double s = 0.0;
  for (double v : sample) {
    s += std::pow(std::abs(v), p);
  }
  return s / static_cast<double>(sample.size());
}

double moment_p_median_of_means(std::span<const double> sample, double p,
                                std::size_t blocks) {
  if (sample.empty()) {
    throw std::invalid_argument("moment_p_median_of_means: empty sample");
  }
  blocks = std::min(blocks, sample.size());
  std::vector<double> means(blocks);
  const std::size_t per = sample.size() / blocks;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * per;
    const std::size_t hi = (b + 1 == blocks) ? sample.size() : lo + per;
    means[b] = moment_p(sample.subspan(lo, hi - lo), p);
  }
  return quantile(std::move(means), 0.5);
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double cauchy_cdf(double x) {
  return 0.5 + std::atan(x) / std::numbers::pi;
}

} // namespace htsl
