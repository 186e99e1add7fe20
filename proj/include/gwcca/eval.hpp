#ifndef GWCCA_EVAL_HPP
#define GWCCA_EVAL_HPP

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gwcca::eval {

double mae(std::span<const double> estimates, std::span<const double> truth);
double rmse(std::span<const double> estimates, std::span<const double> truth);

struct VariateErrors {
  double mae_gwcca = 0.0;
  double rmse_gwcca = 0.0;
  double mae_cca = 0.0;
  double rmse_cca = 0.0;
};

struct EvalReport {
  std::vector<VariateErrors> variates;  // one per evaluated (truth) variate
  Eigen::Index chosen_k = 0;
  Eigen::Index n = 0;
};

/// Compares local estimates (n x psi) and the global correlations (psi) with the
/// true fields (n x r, r <= psi). Both estimate and truth are sorted descending at
/// each location before pairing; the global value of variate j is compared with the
/// j-th true field pointwise.
EvalReport compare_models(const Eigen::MatrixXd& local_rho, const Eigen::VectorXd& global_rho,
                          const Eigen::MatrixXd& truth, Eigen::Index chosen_k = 0);

/// Table-shaped CSV: dataset,variate,metric,gwcca,cca.
std::string report_csv(const EvalReport& report, const std::string& dataset_label);

}  // namespace gwcca::eval

#endif  // GWCCA_EVAL_HPP
