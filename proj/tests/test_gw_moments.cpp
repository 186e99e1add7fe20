#include <cmath>
#include <random>

#include "doctest.h"

#include "gwcca/gw_moments.hpp"
#include "gwcca/stats.hpp"
#include "support.hpp"

using namespace gwcca;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("gw_mean") {
  CHECK(gw_mean(vec({1, 2, 3}), vec({1, 0, 0})) == 1.0);
  CHECK(gw_mean(vec({0, 10}), vec({1, 3})) == 7.5);
  CHECK(gw_mean(vec({2, 4, 9}), vec({5, 5, 5})) == doctest::Approx(5.0));
  CHECK_THROWS_AS(gw_mean(vec({1, 2}), vec({0, 0})), DegenerateError);
  CHECK_THROWS_AS(gw_mean(vec({1, 2}), vec({1})), InputError);
}

TEST_CASE("gw_std") {
  CHECK(gw_std(vec({4, 4, 4}), vec({1, 2, 3})) == 0.0);
  CHECK(gw_std(vec({0, 10}), vec({1, 1})) == doctest::Approx(5.0));
  std::mt19937_64 rng(1);
  const Eigen::VectorXd x = test::gaussian(40, 1, rng);
  const double sd = std::sqrt((x.array() - x.mean()).square().sum() / 40.0);
  CHECK(std::abs(gw_std(x, Eigen::VectorXd::Ones(40)) - sd) < 1e-12);
}

TEST_CASE("gw_cov and gw_corr") {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd m = test::gaussian(60, 2, rng);
  const Eigen::VectorXd x = m.col(0);
  const Eigen::VectorXd y = m.col(1);
  const Eigen::VectorXd w = test::uniform(60, 1, rng);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(60);

  CHECK(std::abs(gw_cov(x, x, w) - std::pow(gw_std(x, w), 2)) < 1e-12);
  CHECK(gw_cov(Eigen::VectorXd::Constant(60, 2.0), Eigen::VectorXd::Constant(60, -1.0), w) ==
        0.0);
  const double cov = ((x.array() - x.mean()) * (y.array() - y.mean())).sum() / 60.0;
  CHECK(std::abs(gw_cov(x, y, ones) - cov) < 1e-12);

  const Eigen::VectorXd lin = (2.0 * x.array() + 3.0).matrix();
  CHECK(gw_corr(x, lin, w) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gw_corr(x, Eigen::VectorXd(-x), w) == doctest::Approx(-1.0).epsilon(1e-14));
  Eigen::MatrixXd both(60, 2);
  both << x, y;
  CHECK(std::abs(gw_corr(x, y, ones) - stats::pearson_matrix(both)(0, 1)) < 1e-12);
}

TEST_CASE("gw_corr names the constant variable") {
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(3);
  try {
    (void)gw_corr(vec({1, 1, 1}), vec({1, 2, 3}), w, "income", "age");
    FAIL("expected DegenerateError");
  } catch (const DegenerateError& e) {
    CHECK(std::string(e.what()).find("income") != std::string::npos);
  }
}

TEST_CASE("weights are scale free") {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd m = test::gaussian(30, 2, rng);
  const Eigen::VectorXd w = test::uniform(30, 1, rng);
  const Eigen::VectorXd w2 = 37.5 * w;
  CHECK(std::abs(gw_mean(m.col(0), w) - gw_mean(m.col(0), w2)) < 1e-12);
  CHECK(std::abs(gw_corr(m.col(0), m.col(1), w) - gw_corr(m.col(0), m.col(1), w2)) < 1e-12);
}

TEST_CASE("covariance blocks agree with the scalar statistics") {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd x = test::gaussian(50, 3, rng);
  const Eigen::MatrixXd y = test::gaussian(50, 2, rng);
  const Eigen::VectorXd w = test::uniform(50, 1, rng);
  const auto cov = gw_cov_matrices(x, y, w, 7);
  CHECK(cov.target_index == 7);
  CHECK(cov.weight_mass == doctest::Approx(w.sum()));
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      CHECK(std::abs(cov.sigma_xx(a, b) - gw_cov(x.col(a), x.col(b), w)) < 1e-12);
    }
    for (int b = 0; b < 2; ++b) {
      CHECK(std::abs(cov.sigma_xy(a, b) - gw_cov(x.col(a), y.col(b), w)) < 1e-12);
    }
  }
  CHECK((cov.sigma_xx - cov.sigma_xx.transpose()).norm() == 0.0);
  CHECK((cov.sigma_yy - cov.sigma_yy.transpose()).norm() == 0.0);
  CHECK((cov.sigma_xx.diagonal().array() >= 0).all());
}

TEST_CASE("uniform weights give 1/n global blocks") {
  std::mt19937_64 rng(6);
  const Eigen::MatrixXd x = test::gaussian(40, 2, rng);
  const Eigen::MatrixXd y = test::gaussian(40, 2, rng);
  const auto cov = gw_cov_matrices(x, y, Eigen::VectorXd::Ones(40));
  const Eigen::MatrixXd xc = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd yc = y.rowwise() - y.colwise().mean();
  CHECK((cov.sigma_xx - xc.transpose() * xc / 40.0).norm() < 1e-12);
  CHECK((cov.sigma_xy - xc.transpose() * yc / 40.0).norm() < 1e-12);
}

TEST_CASE("scalar blocks") {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXd x = test::gaussian(20, 1, rng);
  const Eigen::MatrixXd y = test::gaussian(20, 1, rng);
  const Eigen::VectorXd w = test::uniform(20, 1, rng);
  const auto cov = gw_cov_matrices(x, y, w);
  CHECK(std::abs(cov.sigma_xx(0, 0) - std::pow(gw_std(x.col(0), w), 2)) < 1e-12);
  CHECK(std::abs(cov.sigma_xy(0, 0) - gw_cov(x.col(0), y.col(0), w)) < 1e-12);
}

TEST_CASE("duplicated column gives a singular block") {
  std::mt19937_64 rng(9);
  Eigen::MatrixXd x = test::gaussian(30, 3, rng);
  x.col(2) = x.col(0);
  const auto cov = gw_cov_matrices(x, test::gaussian(30, 2, rng), Eigen::VectorXd::Ones(30));
  CHECK(cov.sigma_xx.col(0) == cov.sigma_xx.col(2));
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov.sigma_xx);
  CHECK(std::abs(eig.eigenvalues()(0)) < 1e-12);
}

TEST_CASE("covariance block errors") {
  std::mt19937_64 rng(10);
  const Eigen::MatrixXd x = test::gaussian(10, 2, rng);
  const Eigen::MatrixXd y = test::gaussian(10, 2, rng);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(10);
  w.head(5).setOnes();
  CHECK_THROWS_AS(gw_cov_matrices(x, y, w), DegenerateError);  // 5 < p + q + 2
  w.head(6).setOnes();
  CHECK_NOTHROW(gw_cov_matrices(x, y, w));
  w(0) = -1.0;
  CHECK_THROWS_AS(gw_cov_matrices(x, y, w), InputError);
  CHECK_THROWS_AS(gw_cov_matrices(x, test::gaussian(9, 2, rng), Eigen::VectorXd::Ones(10)),
                  InputError);
}
