#ifndef GWCCA_GW_MOMENTS_HPP
#define GWCCA_GW_MOMENTS_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "gwcca/error.hpp"
#include "gwcca/kernels.hpp"

namespace gwcca {

namespace detail {

inline constexpr double kMinWeightMass = 1e-12;

template <typename Scalar>
void require_mass(Scalar mass) {
  if (!(mass >= Scalar(kMinWeightMass))) {
    throw DegenerateError("weight mass below 1e-12: empty neighborhood");
  }
}

template <typename DX, typename DW>
void require_same_length(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DW>& w) {
  if (x.size() != w.size()) {
    throw InputError("weighted statistic: data and weights differ in length");
  }
}

}  // namespace detail

// Weighted moments normalize by the weight mass, so rescaling all weights by a
// positive constant leaves every result unchanged.

template <typename DX, typename DW>
typename DX::Scalar gw_mean(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DW>& w) {
  detail::require_same_length(x, w);
  const auto mass = w.sum();
  detail::require_mass(mass);
  return x.cwiseProduct(w).sum() / mass;
}

template <typename DX, typename DY, typename DW>
typename DX::Scalar gw_cov(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y,
                           const Eigen::MatrixBase<DW>& w) {
  detail::require_same_length(x, w);
  detail::require_same_length(y, w);
  const auto mass = w.sum();
  detail::require_mass(mass);
  const auto mx = x.cwiseProduct(w).sum() / mass;
  const auto my = y.cwiseProduct(w).sum() / mass;
  return ((x.array() - mx) * (y.array() - my) * w.array()).sum() / mass;
}

/// Population-style (no degree-of-freedom correction) weighted standard deviation.
template <typename DX, typename DW>
typename DX::Scalar gw_std(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DW>& w) {
  using Scalar = typename DX::Scalar;
  return std::sqrt(std::max(Scalar(0), gw_cov(x, x, w)));
}

/// Local correlation, clamped to [-1, 1]; zero local variance is an error naming
/// the offending variable.
template <typename DX, typename DY, typename DW>
typename DX::Scalar gw_corr(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y,
                            const Eigen::MatrixBase<DW>& w, std::string_view x_name = "x",
                            std::string_view y_name = "y") {
  using Scalar = typename DX::Scalar;
  const Scalar sx = gw_std(x, w);
  const Scalar sy = gw_std(y, w);
  if (!(sx > Scalar(0))) {
    throw DegenerateError("zero local variance in variable '" + std::string(x_name) + "'");
  }
  if (!(sy > Scalar(0))) {
    throw DegenerateError("zero local variance in variable '" + std::string(y_name) + "'");
  }
  const Scalar r = gw_cov(x, y, w) / (sx * sy);
  return std::clamp(r, Scalar(-1), Scalar(1));
}

template <typename Scalar>
struct LocalCovariances {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix sigma_xx;
  Matrix sigma_yy;
  Matrix sigma_xy;
  Scalar weight_mass = Scalar(0);
  Eigen::Index target_index = 0;

  [[nodiscard]] Eigen::Index p() const { return sigma_xx.rows(); }
  [[nodiscard]] Eigen::Index q() const { return sigma_yy.rows(); }
};

/// Weighted covariance blocks of X and Y around their weighted means.
///
/// Columns are centred at their GW means and the weighted cross-products are
/// divided by the weight mass, so entry (a, b) of sigma_xx equals
/// gw_cov(X.col(a), X.col(b), w). Only observations with positive weight are
/// touched, which keeps compact kernels cheap on large inputs.
template <typename DX, typename DY, typename DW>
LocalCovariances<typename DX::Scalar> gw_cov_matrices(const Eigen::MatrixBase<DX>& X,
                                                      const Eigen::MatrixBase<DY>& Y,
                                                      const Eigen::MatrixBase<DW>& w,
                                                      Eigen::Index target_index = 0) {
  using Scalar = typename DX::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  const Eigen::Index q = Y.cols();
  if (Y.rows() != n || w.size() != n) {
    throw InputError("gw_cov_matrices: X, Y and weights must have the same number of rows");
  }
  if ((w.array() < Scalar(0)).any()) {
    throw InputError("gw_cov_matrices: negative weight");
  }

  const Eigen::Index positive = (w.array() > Scalar(0)).count();
  if (positive < p + q + 2) {
    throw DegenerateError("location " + std::to_string(target_index) + ": only " +
                          std::to_string(positive) + " positive weights, need at least " +
                          std::to_string(p + q + 2));
  }

  Matrix Z(positive, p + q);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> wz(positive);
  for (Eigen::Index i = 0, row = 0; i < n; ++i) {
    if (w(i) > Scalar(0)) {
      Z.row(row).head(p) = X.row(i);
      Z.row(row).tail(q) = Y.row(i);
      wz(row) = w(i);
      ++row;
    }
  }
  const Scalar mass = wz.sum();
  detail::require_mass(mass);

  const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> mean = (wz.transpose() * Z) / mass;
  Z.rowwise() -= mean;
  const Matrix weighted = Z.array().colwise() * wz.array();
  Matrix joint = (Z.transpose() * weighted) / mass;
  joint = Scalar(0.5) * (joint + joint.transpose()).eval();

  LocalCovariances<Scalar> out;
  out.sigma_xx = joint.topLeftCorner(p, p);
  out.sigma_yy = joint.bottomRightCorner(q, q);
  out.sigma_xy = joint.topRightCorner(p, q);
  out.weight_mass = mass;
  out.target_index = target_index;
  return out;
}

template <typename DX, typename DY>
LocalCovariances<typename DX::Scalar> gw_cov_matrices(
    const Eigen::MatrixBase<DX>& X, const Eigen::MatrixBase<DY>& Y,
    const WeightVector<typename DX::Scalar>& w) {
  return gw_cov_matrices(X, Y, w.weights, w.target_index);
}

}  // namespace gwcca

#endif  // GWCCA_GW_MOMENTS_HPP
