#ifndef GWCCA_KERNELS_HPP
#define GWCCA_KERNELS_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gwcca/error.hpp"

namespace gwcca {

template <typename Scalar>
using Coords = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

enum class KernelFamily { gaussian, exponential, boxcar, bisquare, tricube };

KernelFamily parse_kernel_family(std::string_view name);
std::string_view to_string(KernelFamily family) noexcept;

/// Boxcar, bisquare and tricube vanish beyond the bandwidth.
constexpr bool has_compact_support(KernelFamily family) noexcept {
  return family == KernelFamily::boxcar || family == KernelFamily::bisquare ||
         family == KernelFamily::tricube;
}

struct FixedBandwidth {
  double radius = 0.0;
};

struct AdaptiveBandwidth {
  Eigen::Index neighbors = 0;
};

struct KernelSpec {
  KernelFamily family = KernelFamily::gaussian;
  std::variant<FixedBandwidth, AdaptiveBandwidth> bandwidth = AdaptiveBandwidth{};

  static KernelSpec fixed(KernelFamily family, double radius) {
    return {family, FixedBandwidth{radius}};
  }
  static KernelSpec adaptive(KernelFamily family, Eigen::Index k) {
    return {family, AdaptiveBandwidth{k}};
  }

  [[nodiscard]] bool is_adaptive() const noexcept {
    return std::holds_alternative<AdaptiveBandwidth>(bandwidth);
  }

  /// Throws ParameterError unless r > 0 (fixed) or 1 <= k <= n (adaptive).
  void validate(Eigen::Index n) const;

  [[nodiscard]] std::string describe() const;
};

/// Euclidean distance matrix for planar (projected) coordinates.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
pairwise_distances(const Eigen::MatrixBase<Derived>& coords) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = coords.rows();
  if (coords.cols() != 2) {
    throw InputError("pairwise_distances: coordinates must have two columns");
  }
  if (n < 2) {
    throw InputError("pairwise_distances: need at least two locations");
  }
  if (!coords.allFinite()) {
    throw InputError("pairwise_distances: non-finite coordinate");
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dist(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    dist(j, j) = Scalar(0);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const Scalar d = (coords.row(i) - coords.row(j)).norm();
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }
  return dist;
}

/// Distances from one target row to every location.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>
distances_from(const Eigen::MatrixBase<Derived>& coords, Eigen::Index target) {
  return (coords.rowwise() - coords.row(target)).rowwise().norm();
}

/// k-th smallest distance, the target itself being the 1st neighbor.
template <typename Derived>
typename Derived::Scalar adaptive_bandwidth(const Eigen::MatrixBase<Derived>& distances,
                                            Eigen::Index k) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = distances.size();
  if (k < 1 || k > n) {
    throw ParameterError("adaptive bandwidth: k = " + std::to_string(k) +
                         " outside [1, " + std::to_string(n) + "]");
  }
  std::vector<Scalar> scratch(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) scratch[static_cast<std::size_t>(i)] = distances(i);
  auto kth = scratch.begin() + (k - 1);
  std::nth_element(scratch.begin(), kth, scratch.end());
  return *kth;
}

template <typename Scalar>
Scalar kernel_weight(KernelFamily family, Scalar d, Scalar r) {
  if (!(r > Scalar(0))) {
    throw ParameterError("kernel bandwidth must be positive");
  }
  const Scalar u = d / r;
  switch (family) {
    case KernelFamily::gaussian:
      return std::exp(Scalar(-0.5) * u * u);
    case KernelFamily::exponential:
      return std::exp(-u);
    case KernelFamily::boxcar:
      return d <= r ? Scalar(1) : Scalar(0);
    case KernelFamily::bisquare: {
      if (d > r) return Scalar(0);
      const Scalar t = Scalar(1) - u * u;
      return t * t;
    }
    case KernelFamily::tricube: {
      if (d > r) return Scalar(0);
      const Scalar t = Scalar(1) - u * u * u;
      return t * t * t;
    }
  }
  return Scalar(0);
}

template <typename Scalar>
struct WeightVector {
  Eigen::Index target_index = 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;
  Scalar bandwidth_used = Scalar(0);

  [[nodiscard]] Eigen::Index positive_count() const {
    return (weights.array() > Scalar(0)).count();
  }
  [[nodiscard]] Scalar mass() const { return weights.sum(); }
};

/// Applies the kernel to the target's distance row, resolving an adaptive bandwidth
/// at the target first.
template <typename DerivedD>
WeightVector<typename DerivedD::Scalar> weights_from_distances(
    const Eigen::MatrixBase<DerivedD>& distances, Eigen::Index target, const KernelSpec& spec) {
  using Scalar = typename DerivedD::Scalar;
  const Eigen::Index n = distances.size();
  spec.validate(n);

  WeightVector<Scalar> out;
  out.target_index = target;
  if (const auto* adaptive = std::get_if<AdaptiveBandwidth>(&spec.bandwidth)) {
    out.bandwidth_used = adaptive_bandwidth(distances, adaptive->neighbors);
  } else {
    out.bandwidth_used = static_cast<Scalar>(std::get<FixedBandwidth>(spec.bandwidth).radius);
  }
  if (!(out.bandwidth_used > Scalar(0))) {
    throw DegenerateError("location " + std::to_string(target) +
                          ": bandwidth resolved to zero (k too small or duplicate points)");
  }
  out.weights.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.weights(j) = kernel_weight(spec.family, distances(j), out.bandwidth_used);
  }
  return out;
}

template <typename Derived>
WeightVector<typename Derived::Scalar> weight_vector(const Eigen::MatrixBase<Derived>& coords,
                                                     Eigen::Index target,
                                                     const KernelSpec& spec) {
  if (target < 0 || target >= coords.rows()) {
    throw InputError("weight_vector: target index " + std::to_string(target) + " out of range");
  }
  const auto distances = distances_from(coords, target);
  return weights_from_distances(distances, target, spec);
}

}  // namespace gwcca

#endif  // GWCCA_KERNELS_HPP
