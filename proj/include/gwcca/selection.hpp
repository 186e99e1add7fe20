#ifndef GWCCA_SELECTION_HPP
#define GWCCA_SELECTION_HPP

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gwcca/dataset.hpp"
#include "gwcca/kernels.hpp"
#include "gwcca/local_cca.hpp"

namespace gwcca {

struct SelectionConfig {
  double phi = 0.95;               // quantile level of the loading threshold
  double alpha = 0.1;              // fraction of salient coefficients per location
  double beta = 0.8;               // relative-support cut
  double report_threshold = 0.40;  // minimum mean local rho for reporting
  int patience = 2;
  double improvement_tol = 0.01;   // relative RGOF improvement counted as progress

  void validate() const;
};

/// Share of total squared local canonical correlation not captured by the first
/// c variates. `c` counts variates (1..psi).
double rgof(const Eigen::MatrixXd& local_rhos, Eigen::Index c);

/// rgof for c = 1..psi.
std::vector<double> rgof_profile(const Eigen::MatrixXd& local_rhos);

/// phi-quantile of pooled absolute loadings.
double loading_threshold(std::span<const double> pooled_abs, double phi);

/// Fraction of locations (rows) where at least an alpha share of the K
/// coefficients (columns) exceed tau in absolute value.
double support_ratio(const Eigen::MatrixXd& coefficients, double tau, double alpha);

/// Zero-based indices of variates whose support reaches beta * mean support.
/// Variate 0 is always kept.
std::vector<Eigen::Index> screen_variates(std::span<const double> support, double beta);

/// Zero-based indices with mean local rho >= threshold, in variate order.
std::vector<Eigen::Index> select_reportable(std::span<const double> mean_rho, double threshold);

enum class StopReason { early_stop, exhausted };
std::string_view to_string(StopReason reason) noexcept;

/// Incremental form of the early-stopping rule: feed RGOF values for ascending
/// candidates; push() returns true once the relative improvement has stayed below
/// the tolerance for `patience` consecutive steps.
class EarlyStopper {
 public:
  EarlyStopper(int patience, double improvement_tol);

  bool push(double rgof_value);

  [[nodiscard]] bool stopped() const noexcept { return stopped_; }
  [[nodiscard]] std::size_t evaluated() const noexcept { return trace_.size(); }
  /// On early stop: the candidate just before the stale run. Otherwise: the first
  /// RGOF-minimizing candidate seen so far.
  [[nodiscard]] std::size_t chosen() const;
  [[nodiscard]] StopReason reason() const noexcept {
    return stopped_ ? StopReason::early_stop : StopReason::exhausted;
  }

 private:
  int patience_;
  double tol_;
  int stale_ = 0;
  bool stopped_ = false;
  std::vector<double> trace_;
};

struct StopDecision {
  std::size_t chosen = 0;
  StopReason reason = StopReason::exhausted;
  std::size_t evaluated = 0;
};

/// The stopping rule applied to a complete trace.
StopDecision early_stop_rule(std::span<const double> rgof_trace, const SelectionConfig& config);

struct ScanRecord {
  Eigen::Index candidate_k = 0;
  std::vector<double> rgof_by_c;
  std::vector<Eigen::Index> retained;  // zero-based
  std::vector<double> mean_rho_by_variate;
  std::vector<double> support;
  double tau = 0.0;
  Eigen::Index screened_dimension = 0;  // number of leading variates RGOF is taken at
  double rgof = 0.0;
};

/// Screening statistics and RGOF for one set of local fits.
ScanRecord evaluate_fits(const std::vector<LocalCCAResult<double>>& fits,
                         const SelectionConfig& config);

/// Ascending adaptive-bandwidth candidates for the scan.
struct CandidateGrid {
  enum class Spacing { linear, geometric };
  Spacing spacing = Spacing::linear;
  Eigen::Index k_min = 0;  // 0: max(p + q + 2, 20)
  Eigen::Index k_max = 0;  // 0: n
  Eigen::Index step = 2;   // linear spacing
  Eigen::Index count = 30; // geometric spacing

  [[nodiscard]] std::vector<Eigen::Index> build(Eigen::Index n, Eigen::Index p,
                                                Eigen::Index q) const;
};

struct ScanResult {
  Eigen::Index chosen_k = 0;
  std::size_t chosen_record = 0;
  StopReason stop_reason = StopReason::exhausted;
  std::vector<ScanRecord> records;
};

/// Fits every location for each candidate k (ascending) and stops by the
/// early-stopping rule on RGOF at the screened dimension. Candidates whose fits are
/// degenerate are skipped; if all are, ConfigError.
ScanResult early_stop_scan(const SpatialDataset& data, KernelFamily family,
                           std::span<const Eigen::Index> candidate_ks,
                           const SelectionConfig& config, double ridge = 0.0,
                           unsigned threads = 0);

}  // namespace gwcca

#endif  // GWCCA_SELECTION_HPP
