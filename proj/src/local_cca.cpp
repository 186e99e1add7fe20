#include "gwcca/local_cca.hpp"

#include <limits>
#include <string>

#include "gwcca/parallel.hpp"

namespace gwcca {

namespace {

template <typename E>
[[noreturn]] void rethrow_at(const E& e, Eigen::Index target) {
  throw E("location " + std::to_string(target) + ": " + e.what());
}

}  // namespace

LocalCCAResult<double> local_cca(const SpatialDataset& data, Eigen::Index target,
                                 const KernelSpec& spec, double ridge) {
  if (target < 0 || target >= data.n()) {
    throw InputError("local_cca: target index " + std::to_string(target) + " out of range");
  }
  try {
    const auto weights = weight_vector(data.coords, target, spec);
    LocalCCAResult<double> out;
    out.target_index = target;
    out.bandwidth_used = weights.bandwidth_used;
    out.solution = solve_cca(gw_cov_matrices(data.x, data.y, weights), ridge);
    return out;
  } catch (const DegenerateError& e) {
    rethrow_at(e, target);
  } catch (const NumericalError& e) {
    rethrow_at(e, target);
  }
}

std::vector<LocalCCAResult<double>> fit_locations(const SpatialDataset& data,
                                                  const KernelSpec& spec, double ridge,
                                                  unsigned threads) {
  spec.validate(data.n());
  std::vector<LocalCCAResult<double>> out(static_cast<std::size_t>(data.n()));
  parallel_for(out.size(), threads, [&](std::size_t i) {
    out[i] = local_cca(data, static_cast<Eigen::Index>(i), spec, ridge);
  });
  return out;
}

Eigen::MatrixXd local_rhos(const std::vector<LocalCCAResult<double>>& fits) {
  if (fits.empty()) return {};
  const Eigen::Index psi = fits.front().solution.psi();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(fits.size()), psi);
  for (std::size_t i = 0; i < fits.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = fits[i].solution.rho.transpose();
  }
  return out;
}

void align_signs_to_neighbors(std::vector<LocalCCAResult<double>>& fits,
                              const Eigen::Matrix<double, Eigen::Dynamic, 2>& coords) {
  for (std::size_t i = 1; i < fits.size(); ++i) {
    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < i; ++j) {
      const double d = (coords.row(static_cast<Eigen::Index>(i)) -
                        coords.row(static_cast<Eigen::Index>(j)))
                           .squaredNorm();
      if (d < best) {
        best = d;
        nearest = j;
      }
    }
    auto& sol = fits[i].solution;
    const auto& ref = fits[nearest].solution;
    for (Eigen::Index c = 0; c < sol.psi(); ++c) {
      const double agreement = sol.a_weights.col(c).dot(ref.a_weights.col(c)) +
                               sol.b_weights.col(c).dot(ref.b_weights.col(c));
      if (agreement < 0.0) {
        sol.a_weights.col(c) = -sol.a_weights.col(c);
        sol.b_weights.col(c) = -sol.b_weights.col(c);
        sol.x_cross_loadings.col(c) = -sol.x_cross_loadings.col(c);
        sol.y_cross_loadings.col(c) = -sol.y_cross_loadings.col(c);
      }
    }
  }
}

}  // namespace gwcca
