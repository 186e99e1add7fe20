#ifndef GWCCA_TEST_SUPPORT_HPP
#define GWCCA_TEST_SUPPORT_HPP

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "gwcca/dataset.hpp"

namespace test {

inline Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = z(rng);
  }
  return m;
}

inline Eigen::MatrixXd uniform(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = u(rng);
  }
  return m;
}

// Random SPD matrix with eigenvalues in [0.2, 2.2].
inline Eigen::MatrixXd spd(Eigen::Index dim, std::mt19937_64& rng) {
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(dim, dim, rng));
  const Eigen::MatrixXd q = qr.householderQ();
  const Eigen::VectorXd ev = (uniform(dim, 1, rng).array() * 2.0 + 0.2).matrix();
  return q * ev.asDiagonal() * q.transpose();
}

// Points in the unit square; Y mixes X with a spatially varying coefficient so
// local fits differ from the global one.
inline gwcca::SpatialDataset random_dataset(Eigen::Index n, Eigen::Index p, Eigen::Index q,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  gwcca::SpatialDataset d;
  d.coords = uniform(n, 2, rng);
  d.x = gaussian(n, p, rng);
  d.y = gaussian(n, q, rng);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = d.coords(i, 0);
    for (Eigen::Index m = 0; m < std::min(p, q); ++m) {
      d.y(i, m) += (m == 0 ? 2.0 * s : 1.0 - s) * d.x(i, m);
    }
  }
  d.fill_default_labels();
  return d;
}

}  // namespace test

#endif  // GWCCA_TEST_SUPPORT_HPP
