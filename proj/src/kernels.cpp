#include "srf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace srf {

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::linear: return "linear";
    case KernelFamily::rbf: return "rbf";
    case KernelFamily::laplacian: return "laplacian";
  }
  return "unknown";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "linear") return KernelFamily::linear;
  if (name == "rbf") return KernelFamily::rbf;
  if (name == "laplacian") return KernelFamily::laplacian;
  throw std::invalid_argument("unknown kernel family: " + name);
}

double kappa_exact(const KernelKind& kind, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("kappa_exact: dimension mismatch");
  }
  switch (kind.family) {
    case KernelFamily::linear:
      return x.dot(y);
    case KernelFamily::rbf: {
      const double d2 = (x - y).squaredNorm();
      return std::exp(-d2 / (2.0 * kind.bandwidth * kind.bandwidth));
    }
    case KernelFamily::laplacian: {
      const double d1 = (x - y).cwiseAbs().sum();
      return std::exp(-d1 / kind.bandwidth);
    }
  }
  throw std::invalid_argument("kappa_exact: unknown kernel family");
}

FeatureMap fit_feature_map(RngState& rng, const KernelKind& kind,
                           int input_dim, int output_dim) {
  if (input_dim < 1 || output_dim < 1) {
    throw std::invalid_argument("fit_feature_map: dimensions must be positive");
  }
  if (kind.family != KernelFamily::linear && kind.bandwidth <= 0.0) {
    throw std::invalid_argument("fit_feature_map: bandwidth must be positive");
  }
  FeatureMap map;
  map.kind = kind;
  map.input_dim = input_dim;
  map.output_dim = output_dim;
  map.seed = rng.seed();
  map.stream = rng.stream();
  switch (kind.family) {
    case KernelFamily::linear:
      map.projection = sample_matrix(rng, output_dim, input_dim,
                                     Dist::gaussian) /
                       std::sqrt(static_cast<double>(output_dim));
      break;
    case KernelFamily::rbf:
      map.frequencies =
          sample_matrix(rng, output_dim, input_dim, Dist::gaussian) /
          kind.bandwidth;
      map.offsets =
          sample_matrix(rng, output_dim, 1, Dist::uniform_0_2pi).col(0);
      break;
    case KernelFamily::laplacian:
      map.frequencies =
          sample_matrix(rng, output_dim, input_dim, Dist::cauchy) /
          kind.bandwidth;
      map.offsets =
          sample_matrix(rng, output_dim, 1, Dist::uniform_0_2pi).col(0);
      break;
  }
  return map;
}

Eigen::MatrixXd embed(const FeatureMap& map, const Eigen::MatrixXd& x) {
  if (x.cols() != map.input_dim) {
    throw std::invalid_argument("embed: feature dimension mismatch");
  }
  if (map.kind.family == KernelFamily::linear) {
    return x * map.projection.transpose();
  }
  Eigen::MatrixXd phases = x * map.frequencies.transpose();
  phases.rowwise() += map.offsets.transpose();
  const double scale = std::sqrt(2.0 / map.output_dim);
  return scale * phases.array().cos().matrix();
}

BandwidthEstimate median_bandwidth(const Eigen::MatrixXd& x,
                                   KernelFamily family) {
  const auto n = x.rows();
  if (n < 2) {
    throw std::invalid_argument("median_bandwidth: need at least two rows");
  }
  const bool l1 = family == KernelFamily::laplacian;
  const std::int64_t total_pairs = static_cast<std::int64_t>(n) * (n - 1) / 2;
  constexpr std::int64_t kMaxPairs = 10000;

  std::vector<double> dists;
  if (total_pairs <= kMaxPairs) {
    dists.reserve(static_cast<std::size_t>(total_pairs));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const auto diff = x.row(i) - x.row(j);
        dists.push_back(l1 ? diff.cwiseAbs().sum() : diff.norm());
      }
    }
  } else {
    RngState pair_rng(0x6d656469616eULL);  // fixed: estimate is deterministic
    dists.reserve(kMaxPairs);
    for (std::int64_t t = 0; t < kMaxPairs; ++t) {
      const auto i = static_cast<Eigen::Index>(pair_rng.next_u64() % n);
      auto j = static_cast<Eigen::Index>(pair_rng.next_u64() % (n - 1));
      if (j >= i) ++j;
      const auto diff = x.row(i) - x.row(j);
      dists.push_back(l1 ? diff.cwiseAbs().sum() : diff.norm());
    }
  }

  const auto mid = dists.begin() + dists.size() / 2;
  std::nth_element(dists.begin(), mid, dists.end());
  double med = *mid;
  if (dists.size() % 2 == 0) {
    const double lower = *std::max_element(dists.begin(), mid);
    med = 0.5 * (med + lower);
  }
  if (med <= 0.0) return {1.0, true};
  return {med, false};
}

}  // namespace srf
