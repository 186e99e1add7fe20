#include "gwcca/eval.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "gwcca/csv.hpp"
#include "gwcca/error.hpp"

namespace gwcca::eval {

namespace {

void check_pair(std::span<const double> estimates, std::span<const double> truth) {
  if (estimates.size() != truth.size()) {
    throw InputError("error metric: estimate and truth lengths differ");
  }
  if (estimates.empty()) {
    throw InputError("error metric: empty input");
  }
}

Eigen::MatrixXd sorted_rows_desc(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = m;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    Eigen::RowVectorXd row = out.row(i);
    std::sort(row.data(), row.data() + row.size(), std::greater<>());
    out.row(i) = row;
  }
  return out;
}

}  // namespace

double mae(std::span<const double> estimates, std::span<const double> truth) {
  check_pair(estimates, truth);
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) sum += std::abs(estimates[i] - truth[i]);
  return sum / static_cast<double>(truth.size());
}

double rmse(std::span<const double> estimates, std::span<const double> truth) {
  check_pair(estimates, truth);
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double e = estimates[i] - truth[i];
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(truth.size()));
}

EvalReport compare_models(const Eigen::MatrixXd& local_rho, const Eigen::VectorXd& global_rho,
                          const Eigen::MatrixXd& truth, Eigen::Index chosen_k) {
  const Eigen::Index n = truth.rows();
  const Eigen::Index r = truth.cols();
  if (local_rho.rows() != n) {
    throw InputError("compare_models: estimate and truth location counts differ");
  }
  if (r < 1 || local_rho.cols() < r || global_rho.size() < r) {
    throw InputError("compare_models: fewer estimated variates than true fields");
  }
  const Eigen::MatrixXd est = sorted_rows_desc(local_rho);
  const Eigen::MatrixXd tru = sorted_rows_desc(truth);
  Eigen::VectorXd global = global_rho;
  std::sort(global.data(), global.data() + global.size(), std::greater<>());

  EvalReport report;
  report.n = n;
  report.chosen_k = chosen_k;
  for (Eigen::Index j = 0; j < r; ++j) {
    const Eigen::VectorXd e = est.col(j);
    const Eigen::VectorXd t = tru.col(j);
    const Eigen::VectorXd g = Eigen::VectorXd::Constant(n, global(j));
    const std::span<const double> es(e.data(), static_cast<std::size_t>(n));
    const std::span<const double> ts(t.data(), static_cast<std::size_t>(n));
    const std::span<const double> gs(g.data(), static_cast<std::size_t>(n));
    report.variates.push_back({mae(es, ts), rmse(es, ts), mae(gs, ts), rmse(gs, ts)});
  }
  return report;
}

std::string report_csv(const EvalReport& report, const std::string& dataset_label) {
  std::ostringstream out;
  out << "dataset,variate,metric,gwcca,cca\n";
  for (std::size_t j = 0; j < report.variates.size(); ++j) {
    const auto& v = report.variates[j];
    out << csv::quote(dataset_label) << ',' << j + 1 << ",MAE," << csv::format_number(v.mae_gwcca)
        << ',' << csv::format_number(v.mae_cca) << '\n';
    out << csv::quote(dataset_label) << ',' << j + 1 << ",RMSE,"
        << csv::format_number(v.rmse_gwcca) << ',' << csv::format_number(v.rmse_cca) << '\n';
  }
  return out.str();
}

}  // namespace gwcca::eval
