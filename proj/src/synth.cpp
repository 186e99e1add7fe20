#include "gwcca/synth.hpp"

#include <cmath>
#include <string>

#include "gwcca/error.hpp"

namespace gwcca::synth {

namespace {

constexpr Eigen::Index kMaxGrfPoints = 10000;
constexpr double kGrfJitter = 1e-8;

Eigen::VectorXd standard_normals(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = normal(rng);
  return z;
}

Eigen::MatrixXd orthonormal_columns(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) g(r, c) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  // Fix the QR sign ambiguity so the result tracks the draw.
  const Eigen::MatrixXd r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (Eigen::Index c = 0; c < cols; ++c) {
    if (r(c, c) < 0.0) q.col(c) = -q.col(c);
  }
  return q;
}

void check_rho(double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw ParameterError("canonical correlation " + std::to_string(rho) +
                         " outside [0, 1): joint covariance would not be positive definite");
  }
}

}  // namespace

void Params1::validate() const {
  if (n < 3) throw ParameterError("dataset 1: n must be at least 3");
  if (p < 2 || q < 2) throw ParameterError("dataset 1: p and q must be at least 2");
  if (!(bump.beta0 > 0.0 && bump.beta0 + bump.beta1 < 1.0)) {
    throw ParameterError("dataset 1: need 0 < beta0 and beta0 + beta1 < 1");
  }
  if (!(bump.sigma > 0.0)) throw ParameterError("dataset 1: bump sigma must be positive");
  if (!(rho_cap > 0.0 && rho_cap < 1.0)) throw ParameterError("dataset 1: rho_cap must lie in (0, 1)");
  if (!(jitter >= 0.0)) throw ParameterError("dataset 1: jitter must be nonnegative");
}

void Params2::validate() const {
  if (grid_size < 2) throw ParameterError("dataset 2: grid_size must be at least 2");
  if (p < 2 || q < 2) throw ParameterError("dataset 2: p and q must be at least 2");
  if (!(grf.length_scale > 0.0)) throw ParameterError("dataset 2: length scale must be positive");
  if (!(grf.marginal_sigma > 0.0)) throw ParameterError("dataset 2: sigma must be positive");
  if (!(rho_base >= 0.0 && rho_amp >= 0.0 && rho_base + rho_amp < 1.0)) {
    throw ParameterError("dataset 2: need rho_base, rho_amp >= 0 and rho_base + rho_amp < 1");
  }
  if (!(jitter >= 0.0)) throw ParameterError("dataset 2: jitter must be nonnegative");
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> make_directions(Eigen::Index p, Eigen::Index q,
                                                            Rng& rng, Eigen::Index columns) {
  if (p < columns || q < columns || columns < 1) {
    throw ParameterError("make_directions: p and q must be at least " + std::to_string(columns));
  }
  Eigen::MatrixXd a0 = orthonormal_columns(p, columns, rng);
  Eigen::MatrixXd b0 = orthonormal_columns(q, columns, rng);
  return {std::move(a0), std::move(b0)};
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> make_directions(Eigen::Index p, Eigen::Index q,
                                                            std::uint64_t seed) {
  Rng rng(seed);
  return make_directions(p, q, rng);
}

Eigen::MatrixXd cross_cov(const Eigen::MatrixXd& a0, const Eigen::MatrixXd& b0,
                          const Eigen::VectorXd& rhos) {
  if (a0.cols() != rhos.size() || b0.cols() != rhos.size()) {
    throw InputError("cross_cov: direction and correlation counts differ");
  }
  for (Eigen::Index c = 0; c < rhos.size(); ++c) check_rho(rhos(c));
  return a0 * rhos.asDiagonal() * b0.transpose();
}

Eigen::MatrixXd cross_cov(const Eigen::MatrixXd& a0, const Eigen::MatrixXd& b0, double rho1,
                          double rho2) {
  return cross_cov(a0, b0, Eigen::Vector2d(rho1, rho2));
}

Eigen::MatrixXd joint_covariance(const Eigen::MatrixXd& cross, double jitter) {
  const Eigen::Index p = cross.rows();
  const Eigen::Index q = cross.cols();
  Eigen::MatrixXd joint = Eigen::MatrixXd::Identity(p + q, p + q);
  joint.topRightCorner(p, q) = cross;
  joint.bottomLeftCorner(q, p) = cross.transpose();
  joint.diagonal().array() += jitter;
  return joint;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> sample_location(const Eigen::MatrixXd& joint_cov,
                                                            Eigen::Index p, Rng& rng) {
  Eigen::LLT<Eigen::MatrixXd> llt(joint_cov);
  if (llt.info() != Eigen::Success) {
    throw ParameterError("sample_location: joint covariance is not positive definite");
  }
  const Eigen::VectorXd draw = llt.matrixL() * standard_normals(joint_cov.rows(), rng);
  return {draw.head(p), draw.tail(joint_cov.rows() - p)};
}

void sample_observations(const Eigen::MatrixXd& rhos, const Eigen::MatrixXd& a0,
                         const Eigen::MatrixXd& b0, double jitter, Rng& rng,
                         SpatialDataset& out) {
  const Eigen::Index n = rhos.rows();
  const Eigen::Index p = a0.rows();
  const Eigen::Index q = b0.rows();
  out.x.resize(n, p);
  out.y.resize(n, q);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::MatrixXd joint =
        joint_covariance(cross_cov(a0, b0, rhos.row(i).transpose()), jitter);
    auto [x, y] = sample_location(joint, p, rng);
    out.x.row(i) = x.transpose();
    out.y.row(i) = y.transpose();
  }
}

double rho1_dataset1(const Params1& params, double i) {
  return std::min(params.rho1_slope * i + params.rho1_intercept, params.rho_cap);
}

double rho2_dataset1(const Params1& params, double i, double j) {
  const auto& b = params.bump;
  const double di = i - b.center.x();
  const double dj = j - b.center.y();
  const double value =
      b.beta0 + b.beta1 * std::exp(-(di * di + dj * dj) / (2.0 * b.sigma * b.sigma));
  return std::min(value, params.rho_cap);
}

std::pair<SpatialDataset, SyntheticTruth> generate_dataset1(const Params1& params) {
  params.validate();
  Rng rng(params.seed);
  SyntheticTruth truth;
  std::tie(truth.a0, truth.b0) = make_directions(params.p, params.q, rng);

  SpatialDataset data;
  data.coords.resize(params.n, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Eigen::Index i = 0; i < params.n; ++i) {
    data.coords(i, 0) = unit(rng);
    data.coords(i, 1) = unit(rng);
  }

  truth.rho_fields.resize(params.n, 2);
  for (Eigen::Index i = 0; i < params.n; ++i) {
    truth.rho_fields(i, 0) = rho1_dataset1(params, data.coords(i, 0));
    truth.rho_fields(i, 1) = rho2_dataset1(params, data.coords(i, 0), data.coords(i, 1));
  }
  sample_observations(truth.rho_fields, truth.a0, truth.b0, params.jitter, rng, data);
  data.fill_default_labels();
  return {std::move(data), std::move(truth)};
}

Eigen::VectorXd sample_grf(const Eigen::Matrix<double, Eigen::Dynamic, 2>& points,
                           double length_scale, double sigma, Rng& rng) {
  const Eigen::Index n = points.rows();
  if (n == 0) throw ParameterError("sample_grf: empty grid");
  if (!(length_scale > 0.0)) throw ParameterError("sample_grf: length scale must be positive");
  if (n > kMaxGrfPoints) {
    throw ParameterError("sample_grf: " + std::to_string(n) +
                         " points exceed the dense-factorization limit of 10000; use a "
                         "coarser grid");
  }
  const double var = sigma * sigma;
  const double inv_two_l2 = 1.0 / (2.0 * length_scale * length_scale);
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      const double d2 = (points.row(i) - points.row(j)).squaredNorm();
      cov(i, j) = var * std::exp(-d2 * inv_two_l2);
    }
  }
  cov.diagonal().array() += kGrfJitter * var;
  Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("sample_grf: covariance factorization failed; increase the grid "
                         "spacing or shorten the length scale");
  }
  return llt.matrixL() * standard_normals(n, rng);
}

Eigen::VectorXd sample_grf(const Eigen::Matrix<double, Eigen::Dynamic, 2>& points,
                           double length_scale, double sigma, std::uint64_t seed) {
  Rng rng(seed);
  return sample_grf(points, length_scale, sigma, rng);
}

Eigen::Matrix<double, Eigen::Dynamic, 2> unit_grid(Eigen::Index s) {
  if (s < 2) throw ParameterError("unit_grid: need at least 2 points per side");
  Eigen::Matrix<double, Eigen::Dynamic, 2> grid(s * s, 2);
  const double h = 1.0 / static_cast<double>(s - 1);
  for (Eigen::Index r = 0; r < s; ++r) {
    for (Eigen::Index c = 0; c < s; ++c) {
      grid(r * s + c, 0) = static_cast<double>(c) * h;
      grid(r * s + c, 1) = static_cast<double>(r) * h;
    }
  }
  return grid;
}

std::pair<SpatialDataset, SyntheticTruth> generate_dataset2(const Params2& params) {
  params.validate();
  Rng rng(params.seed);
  SyntheticTruth truth;
  std::tie(truth.a0, truth.b0) = make_directions(params.p, params.q, rng);

  SpatialDataset data;
  data.coords = unit_grid(params.grid_size);
  const Eigen::Index n = data.coords.rows();

  const Eigen::VectorXd z =
      sample_grf(data.coords, params.grf.length_scale, params.grf.marginal_sigma, rng);
  const double mean = z.mean();
  const double sd = std::sqrt((z.array() - mean).square().mean());
  if (!(sd > 0.0)) throw NumericalError("dataset 2: random field has zero spread");

  truth.rho_fields.resize(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    truth.rho_fields(i, 0) = 0.5 + 0.4 * std::tanh(params.tanh_alpha * (z(i) - mean) / sd);
    truth.rho_fields(i, 1) =
        params.rho_base + params.rho_amp * (data.coords(i, 0) + data.coords(i, 1)) / 2.0;
  }
  sample_observations(truth.rho_fields, truth.a0, truth.b0, params.jitter, rng, data);
  data.fill_default_labels();
  return {std::move(data), std::move(truth)};
}

}  // namespace gwcca::synth
