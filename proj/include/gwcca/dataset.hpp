#ifndef GWCCA_DATASET_HPP
#define GWCCA_DATASET_HPP

#include <algorithm>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gwcca {

/// Planar coordinates plus two aligned variable blocks.
struct SpatialDataset {
  std::vector<std::string> ids;
  Eigen::Matrix<double, Eigen::Dynamic, 2> coords;
  Eigen::MatrixXd x;
  Eigen::MatrixXd y;
  std::vector<std::string> x_names;
  std::vector<std::string> y_names;

  [[nodiscard]] Eigen::Index n() const { return coords.rows(); }
  [[nodiscard]] Eigen::Index p() const { return x.cols(); }
  [[nodiscard]] Eigen::Index q() const { return y.cols(); }
  [[nodiscard]] Eigen::Index psi() const { return std::min(p(), q()); }

  /// Throws InputError on inconsistent shapes, non-finite values or n <= p + q.
  void validate() const;

  /// Fills ids "0".."n-1" and names X1.., Y1.. where they are missing.
  void fill_default_labels();
};

}  // namespace gwcca

#endif  // GWCCA_DATASET_HPP
