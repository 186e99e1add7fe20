#ifndef GWCCA_PIPELINE_HPP
#define GWCCA_PIPELINE_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gwcca/cca.hpp"
#include "gwcca/config.hpp"
#include "gwcca/local_cca.hpp"
#include "gwcca/preprocess.hpp"
#include "gwcca/selection.hpp"
#include "gwcca/stats.hpp"

namespace gwcca {

struct FitResult {
  SpatialDataset data;  // after preprocessing
  PreprocessLog log;
  Config config;
  KernelSpec kernel;
  std::optional<ScanResult> scan;  // absent when the bandwidth was fixed
  std::vector<LocalCCAResult<double>> fits;
  ScanRecord selection;                // screening at the final bandwidth
  std::vector<Eigen::Index> retained;  // zero-based
  std::vector<Eigen::Index> reported;  // zero-based, subset of retained
  CCASolution<double> global;
};

/// Candidate bandwidth scan from the configured grid. With run.early_stop off the
/// whole grid is evaluated and the RGOF minimizer is returned.
ScanResult run_scan(const SpatialDataset& data, const Config& config);

/// Scan (unless kernel.k or kernel.bandwidth is set), final fit, screening and
/// reporting. `data` should already be preprocessed.
FitResult fit(SpatialDataset data, const Config& config, PreprocessLog log = {});

/// Preprocessing followed by fit.
FitResult run_pipeline(LoadedData loaded, const Config& config);

/// Per-location estimates of the reported variates, as exported and read back.
struct LocationTable {
  std::vector<std::string> ids;
  Eigen::Matrix<double, Eigen::Dynamic, 2> coords;
  Eigen::VectorXd bandwidth;
  std::vector<Eigen::Index> variates;  // one-based
  Eigen::MatrixXd rho;                 // n x variates
  std::vector<std::string> x_names;
  std::vector<std::string> y_names;
  std::vector<Eigen::MatrixXd> a;      // per variate, n x p
  std::vector<Eigen::MatrixXd> b;      // per variate, n x q
};

LocationTable location_table(const FitResult& fit);
/// Parses a locations CSV (id, x, y, bandwidth, rho_J, aJ_NAME, bJ_NAME).
LocationTable read_locations(const std::filesystem::path& path);

struct RhoRow {
  Eigen::Index variate = 0;  // one-based
  stats::FiveNumber stats;
  std::optional<double> global;
};

struct LoadingRow {
  Eigen::Index variate = 0;  // one-based
  char set = 'X';
  std::string variable;
  stats::FiveNumber stats;
};

struct Summary {
  std::vector<RhoRow> rho;
  std::vector<LoadingRow> loadings;
};

/// rho quantiles for every variate, loading quantiles for the reported ones.
Summary summarize(const FitResult& fit);
/// Same tables from an exported locations file (only its variates are present).
Summary summarize(const LocationTable& table);

std::string summary_rho_csv(const Summary& summary);
std::string summary_loadings_csv(const Summary& summary);
/// Fixed-width text rendering of both tables.
std::string format_summary(const Summary& summary);

std::string scan_csv(const ScanResult& scan);

/// Writes PREFIX_{locations,rho,global,summary_rho,summary_loadings,long,manifest}
/// (and PREFIX_scan.csv after a scan). Output bytes do not depend on the thread count.
std::vector<std::filesystem::path> export_fit(const FitResult& fit, const Summary& summary,
                                              const std::string& prefix);

/// Columns named `prefix` + 1.. r from a table (e.g. rho_1, rho_2).
Eigen::MatrixXd read_indexed_columns(const csv::Table& table, const std::string& prefix,
                                     const std::string& suffix, Eigen::Index count);

}  // namespace gwcca

#endif  // GWCCA_PIPELINE_HPP
