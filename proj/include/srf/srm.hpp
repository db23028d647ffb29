#ifndef SRF_SRM_HPP
#define SRF_SRM_HPP

#include <vector>

#include <Eigen/Dense>

#include "srf/rng.hpp"

namespace srf {

/// In-place Walsh-Hadamard butterfly, unnormalized. Size must be a power
/// of two.
void fwht_inplace(double* data, int n);

/// SD-product structured random matrix: `blocks` rounds of H * diag(s)
/// with H the normalized Hadamard transform of the padded (power-of-two)
/// size and s a Rademacher sign vector per block. Inputs of general size
/// are zero-padded, outputs truncated back and rescaled by
/// sqrt(padded/n) so E[|Mv|^2] = |v|^2; for power-of-two n the map is
/// exactly orthogonal.
class StructuredRandomMatrix {
 public:
  static StructuredRandomMatrix sample(RngState& rng, int n, int blocks = 3);

  int size() const { return n_; }
  int padded_size() const { return padded_; }
  int block_count() const { return static_cast<int>(signs_.size()); }

  /// Fast apply, O(padded * log(padded) * blocks).
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

  /// Applies the transform to every column of a.
  Eigen::MatrixXd apply_columns(const Eigen::MatrixXd& a) const;

  /// Dense n x n realization, for oracles and small-size checks.
  Eigen::MatrixXd materialize() const;

 private:
  StructuredRandomMatrix(int n, int padded) : n_(n), padded_(padded) {}

  int n_ = 0;
  int padded_ = 0;
  double scale_ = 1.0;  // folded block normalization and pad compensation
  std::vector<Eigen::VectorXd> signs_;
};

}  // namespace srf

#endif  // SRF_SRM_HPP
