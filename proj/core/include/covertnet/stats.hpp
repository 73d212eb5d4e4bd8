#pragma once

#include <functional>
#include <span>
#include <vector>

namespace covertnet::stats {

double median(std::vector<double> values);

/// Linear-interpolation quantile, q in [0, 1].
double quantile(std::vector<double> values, double q);

/// Kolmogorov-Smirnov distance between the empirical CDF of `samples` and `cdf`.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// 1 - exp(-pi z^2 density): nearest-point distance law for a uniform
/// population of the given density (points per unit area).
double nearest_point_cdf(double z, double density);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<double> residuals;
};

/// Ordinary least squares y = slope x + intercept. Throws RegressionError on
/// fewer than two points or zero variance in x or y.
LineFit ols(std::span<const double> x, std::span<const double> y);

/// OLS on (log x, log y). Throws RegressionError on non-positive values.
LineFit loglog_fit(std::span<const double> x, std::span<const double> y);

}  // namespace covertnet::stats
