#include <cmath>
#include <random>

#include "doctest.h"

#include "gwcca/cca.hpp"
#include "gwcca/synth.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gwcca;

namespace {

LocalCovariances<double> blocks_from_joint(const Eigen::MatrixXd& joint, Eigen::Index p) {
  const Eigen::Index q = joint.rows() - p;
  LocalCovariances<double> cov;
  cov.sigma_xx = joint.topLeftCorner(p, p);
  cov.sigma_yy = joint.bottomRightCorner(q, q);
  cov.sigma_xy = joint.topRightCorner(p, q);
  cov.weight_mass = 1.0;
  return cov;
}

LocalCovariances<double> random_blocks(Eigen::Index p, Eigen::Index q, std::mt19937_64& rng) {
  const Eigen::MatrixXd z = test::gaussian(3 * (p + q), p + q, rng);
  const Eigen::MatrixXd joint = z.transpose() * z / static_cast<double>(z.rows());
  return blocks_from_joint(joint, p);
}

}  // namespace

TEST_CASE("scalar case is the absolute correlation") {
  LocalCovariances<double> cov;
  cov.sigma_xx = Eigen::MatrixXd::Constant(1, 1, 4.0);
  cov.sigma_yy = Eigen::MatrixXd::Constant(1, 1, 9.0);
  cov.sigma_xy = Eigen::MatrixXd::Constant(1, 1, -3.0);
  const auto sol = solve_cca(cov);
  CHECK(std::abs(sol.rho(0) - 0.5) < 1e-14);
  CHECK(std::abs(sol.a_weights(0, 0) * 2.0) == doctest::Approx(1.0));
}

TEST_CASE("uncorrelated blocks") {
  std::mt19937_64 rng(1);
  auto cov = random_blocks(3, 4, rng);
  cov.sigma_xy.setZero();
  const auto sol = solve_cca(cov);
  CHECK(sol.psi() == 3);
  CHECK(sol.rho.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("brute-force oracle for p = q = 2") {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 5; ++rep) {
    const auto cov = random_blocks(2, 2, rng);
    const auto sol = solve_cca(cov);
    const double oracle = oracle::brute_force_rho1(cov.sigma_xx, cov.sigma_yy, cov.sigma_xy);
    CHECK(std::abs(sol.rho(0) - oracle) < 1e-6);
  }
}

TEST_CASE("solution invariants") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::Index p = 1 + rep % 4;
    const Eigen::Index q = 1 + (rep * 7) % 5;
    const auto cov = random_blocks(p, q, rng);
    const auto sol = solve_cca(cov);
    REQUIRE(sol.psi() == std::min(p, q));
    for (Eigen::Index j = 0; j < sol.psi(); ++j) {
      CHECK(sol.rho(j) >= 0.0);
      CHECK(sol.rho(j) <= 1.0);
      if (j > 0) CHECK(sol.rho(j) <= sol.rho(j - 1));
      const Eigen::VectorXd a = sol.a_weights.col(j);
      const Eigen::VectorXd b = sol.b_weights.col(j);
      CHECK(std::abs(a.dot(cov.sigma_xx * a) - 1.0) < 1e-8);
      CHECK(std::abs(b.dot(cov.sigma_yy * b) - 1.0) < 1e-8);
      CHECK(std::abs(a.dot(cov.sigma_xy * b) - sol.rho(j)) < 1e-8);

      Eigen::VectorXd ab(p + q);
      ab << a, b;
      Eigen::Index arg = 0;
      ab.cwiseAbs().maxCoeff(&arg);
      CHECK(ab(arg) > 0.0);
    }
  }
}

TEST_CASE("weights of distinct variates are uncorrelated") {
  std::mt19937_64 rng(4);
  const auto cov = random_blocks(4, 4, rng);
  const auto sol = solve_cca(cov);
  const Eigen::MatrixXd uu = sol.a_weights.transpose() * cov.sigma_xx * sol.a_weights;
  const Eigen::MatrixXd uv = sol.a_weights.transpose() * cov.sigma_xy * sol.b_weights;
  CHECK((uu - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-8);
  CHECK((uv - Eigen::MatrixXd(sol.rho.asDiagonal())).norm() < 1e-8);
}

TEST_CASE("exact covariance round trip") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.95);
  const auto [a0, b0] = synth::make_directions(5, 5, 9);
  for (int rep = 0; rep < 20; ++rep) {
    const double r1 = u(rng);
    const double r2 = u(rng);
    const auto sol =
        solve_cca(blocks_from_joint(synth::joint_covariance(synth::cross_cov(a0, b0, r1, r2), 0.0),
                                    5));
    CHECK(std::abs(sol.rho(0) - std::max(r1, r2)) < 1e-10);
    CHECK(std::abs(sol.rho(1) - std::min(r1, r2)) < 1e-10);
    CHECK(sol.rho.tail(3).maxCoeff() < 1e-10);
  }
}

TEST_CASE("cross loadings match correlations of the scores") {
  std::mt19937_64 rng(6);
  const Eigen::MatrixXd x = test::gaussian(300, 3, rng);
  Eigen::MatrixXd y = test::gaussian(300, 4, rng);
  y.leftCols(3) += x * 0.8;
  const auto sol = global_cca(x, y);
  const auto [u, v] = canonical_scores(x, y, sol);
  for (Eigen::Index j = 0; j < sol.psi(); ++j) {
    for (Eigen::Index m = 0; m < 3; ++m) {
      CHECK(std::abs(sol.x_cross_loadings(m, j) - oracle::pearson(x.col(m), v.col(j))) < 1e-10);
    }
    for (Eigen::Index m = 0; m < 4; ++m) {
      CHECK(std::abs(sol.y_cross_loadings(m, j) - oracle::pearson(y.col(m), u.col(j))) < 1e-10);
    }
  }
}

TEST_CASE("global CCA") {
  std::mt19937_64 rng(7);
  SUBCASE("perfect linear relation") {
    const Eigen::MatrixXd x = test::gaussian(200, 3, rng);
    const Eigen::MatrixXd m = test::gaussian(3, 3, rng) + 3.0 * Eigen::MatrixXd::Identity(3, 3);
    const auto sol = global_cca(x, Eigen::MatrixXd(x * m));
    CHECK((sol.rho.array() - 1.0).abs().maxCoeff() < 1e-8);
  }
  SUBCASE("independent sets") {
    const auto sol = global_cca(test::gaussian(100000, 2, rng), test::gaussian(100000, 2, rng));
    CHECK(sol.rho.maxCoeff() < 0.05);
  }
  SUBCASE("scalar case is the Pearson correlation") {
    const Eigen::MatrixXd x = test::gaussian(150, 1, rng);
    const Eigen::MatrixXd y = -0.4 * x + test::gaussian(150, 1, rng);
    const auto sol = global_cca(x, y);
    CHECK(std::abs(sol.rho(0) - std::abs(oracle::pearson(x.col(0), y.col(0)))) < 1e-10);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(global_cca(test::gaussian(10, 2, rng), test::gaussian(9, 2, rng)), InputError);
    CHECK_THROWS_AS(global_cca(test::gaussian(4, 2, rng), test::gaussian(4, 2, rng)),
                    DegenerateError);
    Eigen::MatrixXd x = test::gaussian(30, 2, rng);
    x.col(1).setConstant(3.0);
    CHECK_THROWS_AS(global_cca(x, test::gaussian(30, 2, rng)), DegenerateError);
  }
}

TEST_CASE("canonical scores") {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXd x = test::gaussian(400, 3, rng);
  Eigen::MatrixXd y = test::gaussian(400, 3, rng);
  y += x * 0.5;
  const auto sol = global_cca(x, y);
  const auto [u, v] = canonical_scores(x, y, sol);
  CHECK(std::abs(oracle::pearson(u.col(0), v.col(0)) - sol.rho(0)) < 1e-8);
  CHECK(std::abs(oracle::pearson(u.col(0), u.col(1))) < 1e-6);

  auto zero = sol;
  zero.a_weights.setZero();
  CHECK(canonical_scores(x, y, zero).first.cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(canonical_scores(Eigen::MatrixXd(x.leftCols(2)), y, sol), InputError);
}

TEST_CASE("singular blocks are regularized") {
  std::mt19937_64 rng(9);
  Eigen::MatrixXd x = test::gaussian(100, 3, rng);
  x.col(2) = x.col(0);
  const auto sol = global_cca(x, test::gaussian(100, 2, rng));
  CHECK(sol.regularization.applied);
  CHECK(sol.regularization.ridge_xx > 0.0);
  CHECK(sol.regularization.ridge_yy == 0.0);
  CHECK(sol.rho.allFinite());
}

TEST_CASE("user ridge and argument checks") {
  std::mt19937_64 rng(10);
  const auto cov = random_blocks(2, 3, rng);
  const auto plain = solve_cca(cov);
  const auto ridged = solve_cca(cov, 0.5);
  CHECK(ridged.regularization.applied);
  CHECK(ridged.rho(0) < plain.rho(0));
  CHECK_THROWS_AS(solve_cca(cov, -1.0), ParameterError);

  auto bad = cov;
  bad.sigma_xy = Eigen::MatrixXd::Zero(3, 3);
  CHECK_THROWS_AS(solve_cca(bad), InputError);

  auto zero = cov;
  zero.sigma_xx.setZero();
  CHECK_THROWS_AS(solve_cca(zero), DegenerateError);
}

TEST_CASE("indefinite block beyond the ridge ladder") {
  LocalCovariances<double> cov;
  cov.sigma_xx = Eigen::Matrix2d{{1.0, 0.0}, {0.0, -0.5}};
  cov.sigma_yy = Eigen::MatrixXd::Identity(2, 2);
  cov.sigma_xy = Eigen::MatrixXd::Zero(2, 2);
  CHECK_THROWS_AS(solve_cca(cov), NumericalError);
}

TEST_CASE("single precision instantiation") {
  std::mt19937_64 rng(11);
  const auto cov = random_blocks(3, 3, rng);
  LocalCovariances<float> f;
  f.sigma_xx = cov.sigma_xx.cast<float>();
  f.sigma_yy = cov.sigma_yy.cast<float>();
  f.sigma_xy = cov.sigma_xy.cast<float>();
  const auto sf = solve_cca(f);
  const auto sd = solve_cca(cov);
  CHECK((sf.rho.cast<double>() - sd.rho).cwiseAbs().maxCoeff() < 1e-4);
}
