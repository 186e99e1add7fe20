#ifndef GWCCA_CCA_HPP
#define GWCCA_CCA_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "gwcca/error.hpp"
#include "gwcca/gw_moments.hpp"

namespace gwcca {

template <typename Scalar>
struct Regularization {
  bool applied = false;
  Scalar ridge_xx = Scalar(0);  // absolute ridge added to sigma_xx
  Scalar ridge_yy = Scalar(0);
};

template <typename Scalar>
struct CCASolution {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector rho;        // descending, in [0, 1]
  Matrix a_weights;  // p x psi
  Matrix b_weights;  // q x psi
  // Inter-set loadings: corr(X_m, V_j) and corr(Y_m, U_j).
  Matrix x_cross_loadings;  // p x psi
  Matrix y_cross_loadings;  // q x psi
  Regularization<Scalar> regularization;

  [[nodiscard]] Eigen::Index psi() const { return rho.size(); }
};

namespace detail {

inline constexpr std::array<double, 3> kRidgeLadder{1e-10, 1e-8, 1e-6};
inline constexpr double kRidgeTrigger = 1e-10;
inline constexpr double kEigenFloor = 1e-12;

template <typename Scalar>
struct Whitener {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> inv_sqrt;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> regularized;
  Scalar ridge = Scalar(0);
  bool escalated = false;
};

// Inverse square root of block + ridge*I by symmetric eigendecomposition. When the
// smallest eigenvalue falls below 1e-10 * trace/dim the ridge climbs a fixed ladder
// (relative to trace/dim); an indefinite block that survives the ladder is an error.
template <typename Derived>
Whitener<typename Derived::Scalar> whiten(const Eigen::MatrixBase<Derived>& block,
                                          typename Derived::Scalar user_ridge,
                                          const char* name) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index dim = block.rows();
  const Matrix identity = Matrix::Identity(dim, dim);
  const Scalar scale = block.trace() / Scalar(dim);
  if (!(scale > Scalar(0)) || !block.allFinite()) {
    throw DegenerateError(std::string("covariance block ") + name +
                          " has zero or non-finite trace");
  }
  const Scalar trigger = Scalar(kRidgeTrigger) * scale;

  Whitener<Scalar> out;
  out.ridge = user_ridge;
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  out.regularized = block + out.ridge * identity;
  eig.compute(out.regularized);
  std::size_t rung = 0;
  while (eig.eigenvalues().minCoeff() < trigger) {
    if (rung == kRidgeLadder.size()) {
      throw NumericalError(std::string("covariance block ") + name +
                           " is indefinite beyond tolerance after ridge escalation");
    }
    out.escalated = true;
    out.ridge = user_ridge + Scalar(kRidgeLadder[rung++]) * scale;
    out.regularized = block + out.ridge * identity;
    eig.compute(out.regularized);
  }

  auto values = eig.eigenvalues();
  const Scalar floor = Scalar(kEigenFloor) * values.maxCoeff();
  values = values.cwiseMax(floor);
  out.inv_sqrt = eig.eigenvectors() * values.cwiseSqrt().cwiseInverse().asDiagonal() *
                 eig.eigenvectors().transpose();
  return out;
}

// Largest |entry| of (a_j, b_j) made positive; ties go to the lowest index.
template <typename Scalar>
void fix_signs(CCASolution<Scalar>& sol) {
  const Eigen::Index p = sol.a_weights.rows();
  for (Eigen::Index j = 0; j < sol.psi(); ++j) {
    Scalar best = Scalar(-1);
    Scalar sign = Scalar(1);
    for (Eigen::Index m = 0; m < p + sol.b_weights.rows(); ++m) {
      const Scalar v = m < p ? sol.a_weights(m, j) : sol.b_weights(m - p, j);
      if (std::abs(v) > best) {
        best = std::abs(v);
        sign = v < Scalar(0) ? Scalar(-1) : Scalar(1);
      }
    }
    if (sign < Scalar(0)) {
      sol.a_weights.col(j) = -sol.a_weights.col(j);
      sol.b_weights.col(j) = -sol.b_weights.col(j);
    }
  }
}

template <typename Scalar>
void cross_loadings(const LocalCovariances<Scalar>& cov, CCASolution<Scalar>& sol) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Matrix xv = cov.sigma_xy * sol.b_weights;
  const Matrix yu = cov.sigma_xy.transpose() * sol.a_weights;
  sol.x_cross_loadings = Matrix::Zero(xv.rows(), sol.psi());
  sol.y_cross_loadings = Matrix::Zero(yu.rows(), sol.psi());
  for (Eigen::Index j = 0; j < sol.psi(); ++j) {
    const Scalar var_u = sol.a_weights.col(j).dot(cov.sigma_xx * sol.a_weights.col(j));
    const Scalar var_v = sol.b_weights.col(j).dot(cov.sigma_yy * sol.b_weights.col(j));
    for (Eigen::Index m = 0; m < xv.rows(); ++m) {
      const Scalar d = cov.sigma_xx(m, m) * var_v;
      if (d > Scalar(0)) sol.x_cross_loadings(m, j) = xv(m, j) / std::sqrt(d);
    }
    for (Eigen::Index m = 0; m < yu.rows(); ++m) {
      const Scalar d = cov.sigma_yy(m, m) * var_u;
      if (d > Scalar(0)) sol.y_cross_loadings(m, j) = yu(m, j) / std::sqrt(d);
    }
  }
}

}  // namespace detail

/// Canonical correlations from covariance blocks via whitening and an SVD.
///
/// Both blocks are whitened with a (floored) inverse square root, the whitened
/// cross block K = Sxx^{-1/2} Sxy Syy^{-1/2} is decomposed, and its singular values
/// are the canonical correlations. Weight vectors are the back-transformed singular
/// vectors, scaled to unit variance under the (regularized) blocks and sign-fixed.
template <typename Scalar>
CCASolution<Scalar> solve_cca(const LocalCovariances<Scalar>& cov, Scalar ridge = Scalar(0)) {
  using Matrix = typename CCASolution<Scalar>::Matrix;
  const Eigen::Index p = cov.sigma_xx.rows();
  const Eigen::Index q = cov.sigma_yy.rows();
  if (cov.sigma_xx.cols() != p || cov.sigma_yy.cols() != q || cov.sigma_xy.rows() != p ||
      cov.sigma_xy.cols() != q) {
    throw InputError("solve_cca: inconsistent covariance block shapes");
  }
  if (p == 0 || q == 0) {
    throw InputError("solve_cca: empty variable set");
  }
  if (ridge < Scalar(0)) {
    throw ParameterError("solve_cca: ridge must be nonnegative");
  }

  const auto wx = detail::whiten(cov.sigma_xx, ridge, "sigma_xx");
  const auto wy = detail::whiten(cov.sigma_yy, ridge, "sigma_yy");

  const Matrix k = wx.inv_sqrt * cov.sigma_xy * wy.inv_sqrt;
  Eigen::JacobiSVD<Matrix> svd(k, Eigen::ComputeThinU | Eigen::ComputeThinV);

  const Eigen::Index psi = std::min(p, q);
  CCASolution<Scalar> sol;
  sol.rho = svd.singularValues().head(psi).cwiseMax(Scalar(0)).cwiseMin(Scalar(1));
  sol.a_weights = wx.inv_sqrt * svd.matrixU().leftCols(psi);
  sol.b_weights = wy.inv_sqrt * svd.matrixV().leftCols(psi);

  for (Eigen::Index j = 0; j < psi; ++j) {
    const Scalar va = sol.a_weights.col(j).dot(wx.regularized * sol.a_weights.col(j));
    const Scalar vb = sol.b_weights.col(j).dot(wy.regularized * sol.b_weights.col(j));
    if (va > Scalar(0)) sol.a_weights.col(j) /= std::sqrt(va);
    if (vb > Scalar(0)) sol.b_weights.col(j) /= std::sqrt(vb);
  }
  detail::fix_signs(sol);
  detail::cross_loadings(cov, sol);

  sol.regularization.applied = wx.ridge > Scalar(0) || wy.ridge > Scalar(0);
  sol.regularization.ridge_xx = wx.ridge;
  sol.regularization.ridge_yy = wy.ridge;
  return sol;
}

/// Unweighted CCA over all rows: the stationary baseline.
template <typename DX, typename DY>
CCASolution<typename DX::Scalar> global_cca(const Eigen::MatrixBase<DX>& X,
                                            const Eigen::MatrixBase<DY>& Y,
                                            typename DX::Scalar ridge = 0) {
  using Scalar = typename DX::Scalar;
  const Eigen::Index n = X.rows();
  if (Y.rows() != n) {
    throw InputError("global_cca: X and Y row counts differ");
  }
  if (n <= X.cols() + Y.cols()) {
    throw DegenerateError("global_cca: need more rows than p + q");
  }
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    if (X.col(c).minCoeff() == X.col(c).maxCoeff()) {
      throw DegenerateError("global_cca: constant column X[" + std::to_string(c) + "]");
    }
  }
  for (Eigen::Index c = 0; c < Y.cols(); ++c) {
    if (Y.col(c).minCoeff() == Y.col(c).maxCoeff()) {
      throw DegenerateError("global_cca: constant column Y[" + std::to_string(c) + "]");
    }
  }
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> uniform =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Ones(n);
  return solve_cca(gw_cov_matrices(X, Y, uniform), ridge);
}

/// Canonical variates U = Xc a, V = Yc b on column-centred data.
template <typename DX, typename DY>
std::pair<Eigen::Matrix<typename DX::Scalar, Eigen::Dynamic, Eigen::Dynamic>,
          Eigen::Matrix<typename DX::Scalar, Eigen::Dynamic, Eigen::Dynamic>>
canonical_scores(const Eigen::MatrixBase<DX>& X, const Eigen::MatrixBase<DY>& Y,
                 const CCASolution<typename DX::Scalar>& solution) {
  if (X.cols() != solution.a_weights.rows() || Y.cols() != solution.b_weights.rows() ||
      X.rows() != Y.rows()) {
    throw InputError("canonical_scores: dimension mismatch between data and weights");
  }
  const auto Xc = (X.rowwise() - X.colwise().mean()).eval();
  const auto Yc = (Y.rowwise() - Y.colwise().mean()).eval();
  return {Xc * solution.a_weights, Yc * solution.b_weights};
}

}  // namespace gwcca

#endif  // GWCCA_CCA_HPP
