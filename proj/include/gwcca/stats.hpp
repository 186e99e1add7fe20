#ifndef GWCCA_STATS_HPP
#define GWCCA_STATS_HPP

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gwcca::stats {

/// Empirical quantile with linear interpolation between order statistics:
/// h = (N - 1) * level, result = x[floor h] + frac(h) * (x[floor h + 1] - x[floor h]).
/// Throws InputError on an empty sample, ParameterError for a level outside [0, 1].
double quantile(std::span<const double> values, double level);

/// Same rule on data that is already sorted ascending.
double quantile_sorted(std::span<const double> sorted, double level);

struct FiveNumber {
  double min = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double abs_mean = 0.0;
};

FiveNumber describe(std::span<const double> values);

/// Population Pearson correlation matrix of the columns of `block`.
Eigen::MatrixXd pearson_matrix(const Eigen::MatrixXd& block);

}  // namespace gwcca::stats

#endif  // GWCCA_STATS_HPP
