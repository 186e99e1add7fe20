#ifndef GWCCA_PREPROCESS_HPP
#define GWCCA_PREPROCESS_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gwcca/config.hpp"
#include "gwcca/csv.hpp"
#include "gwcca/dataset.hpp"

namespace gwcca {

struct LoadedData {
  SpatialDataset data;
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;  // rows with a missing declared cell
};

/// Builds a dataset from a parsed table. Missing column: InputError naming it.
LoadedData load_table(const csv::Table& table, const Schema& schema);
LoadedData load_csv(const std::filesystem::path& path, const Schema& schema);

struct Standardization {
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;  // population (1/n) convention
};

/// Column-wise z-scores. A constant column raises DegenerateError naming it.
std::pair<Eigen::MatrixXd, Standardization> zscore(const Eigen::MatrixXd& block,
                                                   const std::vector<std::string>& names);

struct FilterResult {
  std::vector<Eigen::Index> kept;       // column positions, ascending
  std::vector<std::string> dropped;     // in drop order
};

/// Greedy pairwise-collinearity filter. While some pair has |r| > threshold, the
/// worst pair loses the member with the larger mean |r| to the other remaining
/// columns; ties drop the later column.
FilterResult collinearity_filter(const Eigen::MatrixXd& block,
                                 const std::vector<std::string>& names, double threshold);

struct PreprocessLog {
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;
  std::vector<std::string> dropped_x;
  std::vector<std::string> dropped_y;
  bool standardized = false;
  Standardization x_scale;
  Standardization y_scale;
};

/// Filters X and Y separately, then standardizes both (global, not local).
PreprocessLog preprocess(SpatialDataset& data, const PreprocessConfig& config);

}  // namespace gwcca

#endif  // GWCCA_PREPROCESS_HPP
