#ifndef GWCCA_LOCAL_CCA_HPP
#define GWCCA_LOCAL_CCA_HPP

#include <vector>

#include "gwcca/cca.hpp"
#include "gwcca/dataset.hpp"
#include "gwcca/kernels.hpp"

namespace gwcca {

template <typename Scalar>
struct LocalCCAResult {
  Eigen::Index target_index = 0;
  Scalar bandwidth_used = Scalar(0);
  CCASolution<Scalar> solution;
};

/// Kernel weights at the target, weighted covariance blocks, then solve_cca.
/// Errors are rethrown with the target index in the message.
LocalCCAResult<double> local_cca(const SpatialDataset& data, Eigen::Index target,
                                 const KernelSpec& spec, double ridge = 0.0);

/// local_cca at every location. Results are stored by index, so the output does
/// not depend on the worker count.
std::vector<LocalCCAResult<double>> fit_locations(const SpatialDataset& data,
                                                  const KernelSpec& spec, double ridge = 0.0,
                                                  unsigned threads = 0);

/// n x psi matrix of local canonical correlations.
Eigen::MatrixXd local_rhos(const std::vector<LocalCCAResult<double>>& fits);

/// Flips (a_j, b_j) at each location to agree with its nearest already-visited
/// neighbor (in index order). Optional smoothing for maps; not applied by default.
void align_signs_to_neighbors(std::vector<LocalCCAResult<double>>& fits,
                              const Eigen::Matrix<double, Eigen::Dynamic, 2>& coords);

}  // namespace gwcca

#endif  // GWCCA_LOCAL_CCA_HPP
