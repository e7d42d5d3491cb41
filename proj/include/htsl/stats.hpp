#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace htsl {

/// Quantile of a sample by linear interpolation of order statistics
/// (type-7). q in [0, 1].
double quantile(std::vector<double> sample, double q);

/// Kolmogorov-Smirnov distance between the empirical CDF of the sample and
/// a reference CDF.
double ks_distance(std::vector<double> sample,
                   const std::function<double(double)>& cdf);

/// Scholz-Stephens standardized two-sample Anderson-Darling statistic.
/// Values above ~6 reject equality of distributions at roughly the 1e-3
/// level.
double anderson_darling_2sample(std::vector<double> a, std::vector<double> b);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r2 = 0.0;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// Mean of |x|^p over the sample.
double moment_p(std::span<const double> sample, double p);

/// Median-of-means estimate of E|X|^p over `blocks` contiguous blocks;
/// steadier than the plain mean when the summands are heavy tailed.
double moment_p_median_of_means(std::span<const double> sample, double p,
                                std::size_t blocks = 32);

double normal_cdf(double x);
double cauchy_cdf(double x);

} // namespace htsl
