#include "gwcca/dataset.hpp"

#include <string>

#include "gwcca/error.hpp"

namespace gwcca {

void SpatialDataset::validate() const {
  const Eigen::Index rows = coords.rows();
  if (x.rows() != rows || y.rows() != rows) {
    throw InputError("dataset: coordinate and variable blocks have different row counts");
  }
  if (!ids.empty() && static_cast<Eigen::Index>(ids.size()) != rows) {
    throw InputError("dataset: id count does not match row count");
  }
  if (p() < 1 || q() < 1) {
    throw InputError("dataset: both variable sets need at least one column");
  }
  if (!x_names.empty() && static_cast<Eigen::Index>(x_names.size()) != p()) {
    throw InputError("dataset: X name count does not match p");
  }
  if (!y_names.empty() && static_cast<Eigen::Index>(y_names.size()) != q()) {
    throw InputError("dataset: Y name count does not match q");
  }
  if (rows <= p() + q()) {
    throw InputError("dataset: need n > p + q (n = " + std::to_string(rows) +
                     ", p + q = " + std::to_string(p() + q()) + ")");
  }
  if (!coords.allFinite() || !x.allFinite() || !y.allFinite()) {
    throw InputError("dataset: non-finite value");
  }
}

void SpatialDataset::fill_default_labels() {
  if (ids.empty()) {
    ids.reserve(static_cast<std::size_t>(n()));
    for (Eigen::Index i = 0; i < n(); ++i) ids.push_back(std::to_string(i));
  }
  if (x_names.empty()) {
    for (Eigen::Index c = 0; c < p(); ++c) x_names.push_back("X" + std::to_string(c + 1));
  }
  if (y_names.empty()) {
    for (Eigen::Index c = 0; c < q(); ++c) y_names.push_back("Y" + std::to_string(c + 1));
  }
}

}  // namespace gwcca
