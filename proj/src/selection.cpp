#include "gwcca/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gwcca/error.hpp"
#include "gwcca/stats.hpp"

namespace gwcca {

void SelectionConfig::validate() const {
  auto fraction = [](double v, const char* name) {
    if (!(v > 0.0 && v <= 1.0)) {
      throw ConfigError(std::string("selection.") + name + " must lie in (0, 1]");
    }
  };
  fraction(phi, "phi");
  fraction(alpha, "alpha");
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw ConfigError("selection.beta must lie in [0, 1]");
  }
  if (!(report_threshold >= 0.0 && report_threshold <= 1.0)) {
    throw ConfigError("selection.report_threshold must lie in [0, 1]");
  }
  if (patience < 1) {
    throw ConfigError("selection.patience must be at least 1");
  }
  if (!(improvement_tol >= 0.0)) {
    throw ConfigError("selection.improvement_tol must be nonnegative");
  }
}

double rgof(const Eigen::MatrixXd& local_rhos, Eigen::Index c) {
  const Eigen::Index psi = local_rhos.cols();
  if (c < 1 || c > psi) {
    throw ParameterError("rgof: c = " + std::to_string(c) + " outside [1, " +
                         std::to_string(psi) + "]");
  }
  if (c == psi) return 0.0;
  // Location-major accumulation keeps the sums in index order.
  double captured = 0.0;
  double total = 0.0;
  for (Eigen::Index i = 0; i < local_rhos.rows(); ++i) {
    for (Eigen::Index j = 0; j < psi; ++j) {
      const double sq = local_rhos(i, j) * local_rhos(i, j);
      total += sq;
      if (j < c) captured += sq;
    }
  }
  if (!(total > 0.0)) {
    throw DegenerateError("rgof: all local canonical correlations are zero");
  }
  return std::clamp(1.0 - captured / total, 0.0, 1.0);
}

std::vector<double> rgof_profile(const Eigen::MatrixXd& local_rhos) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(local_rhos.cols()));
  for (Eigen::Index c = 1; c <= local_rhos.cols(); ++c) out.push_back(rgof(local_rhos, c));
  // Round-off can break monotonicity by an ulp between neighbouring c.
  for (std::size_t c = 1; c < out.size(); ++c) out[c] = std::min(out[c], out[c - 1]);
  return out;
}

double loading_threshold(std::span<const double> pooled_abs, double phi) {
  if (pooled_abs.empty()) {
    throw InputError("loading_threshold: empty loading pool");
  }
  return stats::quantile(pooled_abs, phi);
}

double support_ratio(const Eigen::MatrixXd& coefficients, double tau, double alpha) {
  const Eigen::Index n = coefficients.rows();
  const Eigen::Index k = coefficients.cols();
  if (n == 0 || k == 0) {
    throw InputError("support_ratio: empty coefficient matrix");
  }
  Eigen::Index supported = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto salient = (coefficients.row(i).array().abs() > tau).count();
    if (static_cast<double>(salient) / static_cast<double>(k) >= alpha) ++supported;
  }
  return static_cast<double>(supported) / static_cast<double>(n);
}

std::vector<Eigen::Index> screen_variates(std::span<const double> support, double beta) {
  std::vector<Eigen::Index> kept;
  if (support.empty()) return kept;
  const double mean =
      std::accumulate(support.begin(), support.end(), 0.0) / static_cast<double>(support.size());
  const double cut = beta * mean;
  for (std::size_t c = 0; c < support.size(); ++c) {
    if (c == 0 || support[c] >= cut) kept.push_back(static_cast<Eigen::Index>(c));
  }
  return kept;
}

std::vector<Eigen::Index> select_reportable(std::span<const double> mean_rho, double threshold) {
  std::vector<Eigen::Index> out;
  for (std::size_t c = 0; c < mean_rho.size(); ++c) {
    if (mean_rho[c] >= threshold) out.push_back(static_cast<Eigen::Index>(c));
  }
  return out;
}

std::string_view to_string(StopReason reason) noexcept {
  return reason == StopReason::early_stop ? "early_stop" : "exhausted";
}

EarlyStopper::EarlyStopper(int patience, double improvement_tol)
    : patience_(patience), tol_(improvement_tol) {
  if (patience_ < 1) throw ConfigError("patience must be at least 1");
}

bool EarlyStopper::push(double rgof_value) {
  if (stopped_) return true;
  if (!trace_.empty()) {
    const double prev = trace_.back();
    const double improvement = prev > 0.0 ? (prev - rgof_value) / prev : 0.0;
    stale_ = improvement < tol_ ? stale_ + 1 : 0;
  }
  trace_.push_back(rgof_value);
  stopped_ = stale_ >= patience_;
  return stopped_;
}

std::size_t EarlyStopper::chosen() const {
  if (trace_.empty()) throw ConfigError("early stopping: no candidate evaluated");
  if (stopped_) return trace_.size() - 1 - static_cast<std::size_t>(patience_);
  return static_cast<std::size_t>(std::min_element(trace_.begin(), trace_.end()) -
                                  trace_.begin());
}

StopDecision early_stop_rule(std::span<const double> rgof_trace, const SelectionConfig& config) {
  EarlyStopper stopper(config.patience, config.improvement_tol);
  for (double v : rgof_trace) {
    if (stopper.push(v)) break;
  }
  return {stopper.chosen(), stopper.reason(), stopper.evaluated()};
}

ScanRecord evaluate_fits(const std::vector<LocalCCAResult<double>>& fits,
                         const SelectionConfig& config) {
  if (fits.empty()) throw InputError("evaluate_fits: no local fits");
  const auto n = static_cast<Eigen::Index>(fits.size());
  const auto& first = fits.front().solution;
  const Eigen::Index psi = first.psi();
  const Eigen::Index p = first.a_weights.rows();
  const Eigen::Index q = first.b_weights.rows();

  ScanRecord rec;
  const Eigen::MatrixXd rhos = local_rhos(fits);
  rec.rgof_by_c = rgof_profile(rhos);
  for (Eigen::Index c = 0; c < psi; ++c) rec.mean_rho_by_variate.push_back(rhos.col(c).mean());

  // Salience is judged on inter-set loadings; they shrink with rho, so noise
  // variates carry little support.
  std::vector<double> pool;
  pool.reserve(static_cast<std::size_t>(n * psi * (p + q)));
  for (const auto& f : fits) {
    const auto& sol = f.solution;
    for (Eigen::Index c = 0; c < psi; ++c) {
      for (Eigen::Index m = 0; m < p; ++m) pool.push_back(std::abs(sol.x_cross_loadings(m, c)));
      for (Eigen::Index m = 0; m < q; ++m) pool.push_back(std::abs(sol.y_cross_loadings(m, c)));
    }
  }
  rec.tau = loading_threshold(pool, config.phi);

  Eigen::MatrixXd coefs(n, p + q);
  for (Eigen::Index c = 0; c < psi; ++c) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& sol = fits[static_cast<std::size_t>(i)].solution;
      coefs.row(i).head(p) = sol.x_cross_loadings.col(c).transpose();
      coefs.row(i).tail(q) = sol.y_cross_loadings.col(c).transpose();
    }
    rec.support.push_back(support_ratio(coefs, rec.tau, config.alpha));
  }
  rec.retained = screen_variates(rec.support, config.beta);
  rec.screened_dimension = rec.retained.back() + 1;
  rec.rgof = rec.rgof_by_c[static_cast<std::size_t>(rec.screened_dimension - 1)];
  return rec;
}

std::vector<Eigen::Index> CandidateGrid::build(Eigen::Index n, Eigen::Index p,
                                               Eigen::Index q) const {
  const Eigen::Index lo = k_min > 0 ? k_min : std::max<Eigen::Index>(p + q + 2, 20);
  const Eigen::Index hi = std::min(k_max > 0 ? k_max : n, n);
  if (lo > hi) {
    throw ConfigError("candidate grid is empty: k_min = " + std::to_string(lo) +
                      " exceeds k_max = " + std::to_string(hi));
  }
  std::vector<Eigen::Index> ks;
  if (spacing == Spacing::linear) {
    if (step < 1) throw ConfigError("scan.step must be at least 1");
    for (Eigen::Index k = lo; k <= hi; k += step) ks.push_back(k);
  } else {
    if (count < 1) throw ConfigError("scan.count must be at least 1");
    const double ratio =
        count > 1 ? std::pow(static_cast<double>(hi) / static_cast<double>(lo),
                             1.0 / static_cast<double>(count - 1))
                  : 1.0;
    for (Eigen::Index i = 0; i < count; ++i) {
      const auto k = static_cast<Eigen::Index>(
          std::llround(static_cast<double>(lo) * std::pow(ratio, static_cast<double>(i))));
      const Eigen::Index clamped = std::clamp(k, lo, hi);
      if (ks.empty() || clamped > ks.back()) ks.push_back(clamped);
    }
  }
  if (ks.back() != hi) ks.push_back(hi);
  return ks;
}

ScanResult early_stop_scan(const SpatialDataset& data, KernelFamily family,
                           std::span<const Eigen::Index> candidate_ks,
                           const SelectionConfig& config, double ridge, unsigned threads) {
  config.validate();
  if (candidate_ks.empty()) throw ConfigError("bandwidth scan: no candidates");
  if (!std::is_sorted(candidate_ks.begin(), candidate_ks.end())) {
    throw ConfigError("bandwidth scan: candidates must be ascending");
  }

  ScanResult result;
  EarlyStopper stopper(config.patience, config.improvement_tol);
  for (const Eigen::Index k : candidate_ks) {
    std::vector<LocalCCAResult<double>> fits;
    try {
      fits = fit_locations(data, KernelSpec::adaptive(family, k), ridge, threads);
    } catch (const DegenerateError&) {
      continue;
    }
    ScanRecord rec = evaluate_fits(fits, config);
    rec.candidate_k = k;
    result.records.push_back(std::move(rec));
    if (stopper.push(result.records.back().rgof)) break;
  }
  if (result.records.empty()) {
    throw ConfigError("bandwidth scan: every candidate k yields a degenerate neighborhood");
  }
  result.chosen_record = stopper.chosen();
  result.chosen_k = result.records[result.chosen_record].candidate_k;
  result.stop_reason = stopper.reason();
  return result;
}

}  // namespace gwcca
