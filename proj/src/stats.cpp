#include "gwcca/stats.hpp"

#include <algorithm>
#include <cmath>

#include "gwcca/error.hpp"

namespace gwcca::stats {

double quantile_sorted(std::span<const double> sorted, double level) {
  if (sorted.empty()) {
    throw InputError("quantile of an empty sample");
  }
  if (!(level >= 0.0 && level <= 1.0)) {
    throw ParameterError("quantile level must lie in [0, 1]");
  }
  const double h = static_cast<double>(sorted.size() - 1) * level;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double quantile(std::span<const double> values, double level) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_sorted(sorted, level);
}

FiveNumber describe(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  FiveNumber out;
  out.min = quantile_sorted(sorted, 0.0);
  out.q25 = quantile_sorted(sorted, 0.25);
  out.median = quantile_sorted(sorted, 0.5);
  out.q75 = quantile_sorted(sorted, 0.75);
  out.max = quantile_sorted(sorted, 1.0);
  double sum = 0.0;
  double abs_sum = 0.0;
  for (double v : values) {
    sum += v;
    abs_sum += std::abs(v);
  }
  out.mean = sum / static_cast<double>(values.size());
  out.abs_mean = abs_sum / static_cast<double>(values.size());
  return out;
}

Eigen::MatrixXd pearson_matrix(const Eigen::MatrixXd& block) {
  const Eigen::MatrixXd centered = block.rowwise() - block.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered;
  const Eigen::VectorXd inv_sd = cov.diagonal().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd corr = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
  corr = corr.cwiseMax(-1.0).cwiseMin(1.0);
  corr.diagonal().setOnes();
  return corr;
}

}  // namespace gwcca::stats
