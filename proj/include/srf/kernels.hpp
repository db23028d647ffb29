#ifndef SRF_KERNELS_HPP
#define SRF_KERNELS_HPP

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "srf/rng.hpp"

namespace srf {

enum class KernelFamily { linear, rbf, laplacian };

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

struct KernelKind {
  KernelFamily family = KernelFamily::rbf;
  double bandwidth = 1.0;  // ignored for linear
};

/// Closed-form kernel value: linear x'y, rbf exp(-|x-y|^2/(2s^2)),
/// laplacian exp(-|x-y|_1/s).
double kappa_exact(const KernelKind& kind, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y);

/// Fitted randomized feature map. rbf/laplacian use the cosine form
/// sqrt(2/D) cos(w'x + b); linear is a Gaussian JLT with Var = 1/D so
/// E[(Rx)'(Ry)] = x'y. Immutable after fitting.
struct FeatureMap {
  KernelKind kind;
  int input_dim = 0;          // F
  int output_dim = 0;         // D
  Eigen::MatrixXd frequencies;  // D x F, rbf/laplacian
  Eigen::VectorXd offsets;      // D, in [0, 2*pi)
  Eigen::MatrixXd projection;   // D x F, linear
  std::uint64_t seed = 0;       // provenance
  std::uint64_t stream = 0;
};

FeatureMap fit_feature_map(RngState& rng, const KernelKind& kind,
                           int input_dim, int output_dim);

/// Row i of the result is phi(x_i); rows are embedded independently.
Eigen::MatrixXd embed(const FeatureMap& map, const Eigen::MatrixXd& x);

struct BandwidthEstimate {
  double value = 1.0;
  bool degenerate = false;  // all sampled pairwise distances were zero
};

/// Median pairwise distance (L2 for rbf, L1 for laplacian), subsampled to
/// at most 10^4 pairs for large inputs. Returns 1.0 with the degenerate
/// flag when every sampled distance is zero.
BandwidthEstimate median_bandwidth(const Eigen::MatrixXd& x,
                                   KernelFamily family);

}  // namespace srf

#endif  // SRF_KERNELS_HPP
