#ifndef GWCCA_SYNTH_HPP
#define GWCCA_SYNTH_HPP

#include <cstdint>
#include <random>
#include <utility>

#include <Eigen/Dense>

#include "gwcca/dataset.hpp"

namespace gwcca::synth {

using Rng = std::mt19937_64;

/// Localized Gaussian bump: beta0 + beta1 * exp(-|s - center|^2 / (2 sigma^2)).
struct Bump {
  double beta0 = 0.30;
  double beta1 = 0.45;
  Eigen::Vector2d center{0.5, 0.5};
  double sigma = 0.15;
};

struct Params1 {
  Eigen::Index n = 2000;
  Eigen::Index p = 5;
  Eigen::Index q = 5;
  double rho1_slope = 0.65;
  double rho1_intercept = 0.30;
  Bump bump;
  double jitter = 1e-6;
  double rho_cap = 0.95;
  std::uint64_t seed = 1;

  void validate() const;
};

struct GrfParams {
  double length_scale = 0.2;
  double marginal_sigma = 1.0;
};

struct Params2 {
  Eigen::Index grid_size = 60;
  Eigen::Index p = 5;
  Eigen::Index q = 5;
  GrfParams grf;
  double tanh_alpha = 1.0;
  double rho_base = 0.30;
  double rho_amp = 0.50;
  double jitter = 1e-6;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Prescribed canonical structure. rho_fields holds one column per planted variate.
struct SyntheticTruth {
  Eigen::MatrixXd rho_fields;  // n x 2
  Eigen::MatrixXd a0;          // p x 2, orthonormal columns
  Eigen::MatrixXd b0;          // q x 2, orthonormal columns
};

/// Orthonormal p x r and q x r direction matrices (r = 2 unless asked otherwise)
/// from a seeded Gaussian draw.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> make_directions(Eigen::Index p, Eigen::Index q,
                                                            std::uint64_t seed);
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> make_directions(Eigen::Index p, Eigen::Index q,
                                                            Rng& rng, Eigen::Index columns = 2);

/// A0 diag(rhos) B0^T; the cross-covariance with singular values `rhos`.
Eigen::MatrixXd cross_cov(const Eigen::MatrixXd& a0, const Eigen::MatrixXd& b0,
                          const Eigen::VectorXd& rhos);
Eigen::MatrixXd cross_cov(const Eigen::MatrixXd& a0, const Eigen::MatrixXd& b0, double rho1,
                          double rho2);

/// [[I_p, C], [C^T, I_q]] + jitter * I.
Eigen::MatrixXd joint_covariance(const Eigen::MatrixXd& cross, double jitter);

/// One zero-mean draw (x, y) from N(0, joint_cov) through a Cholesky factor.
std::pair<Eigen::VectorXd, Eigen::VectorXd> sample_location(const Eigen::MatrixXd& joint_cov,
                                                            Eigen::Index p, Rng& rng);

double rho1_dataset1(const Params1& params, double i);
double rho2_dataset1(const Params1& params, double i, double j);

std::pair<SpatialDataset, SyntheticTruth> generate_dataset1(const Params1& params);

/// Zero-mean Gaussian random field with squared-exponential covariance on the given
/// points, via a dense Cholesky factor (1e-8 relative jitter). More than 10^4 points
/// is refused.
Eigen::VectorXd sample_grf(const Eigen::Matrix<double, Eigen::Dynamic, 2>& points,
                           double length_scale, double sigma, std::uint64_t seed);
Eigen::VectorXd sample_grf(const Eigen::Matrix<double, Eigen::Dynamic, 2>& points,
                           double length_scale, double sigma, Rng& rng);

/// s x s grid over [0, 1]^2 including the corners, row-major in j then i.
Eigen::Matrix<double, Eigen::Dynamic, 2> unit_grid(Eigen::Index s);

std::pair<SpatialDataset, SyntheticTruth> generate_dataset2(const Params2& params);

/// Samples one observation per location given per-location rho rows (n x r) and
/// fixed directions (p x r, q x r). Shared by both generators.
void sample_observations(const Eigen::MatrixXd& rhos, const Eigen::MatrixXd& a0,
                         const Eigen::MatrixXd& b0, double jitter, Rng& rng,
                         SpatialDataset& out);

}  // namespace gwcca::synth

#endif  // GWCCA_SYNTH_HPP
