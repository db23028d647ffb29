#include "srf/srm.hpp"

#include <cmath>
#include <stdexcept>

namespace srf {

namespace {

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

void fwht_inplace(double* data, int n) {
  for (int h = 1; h < n; h <<= 1) {
    for (int i = 0; i < n; i += h << 1) {
      for (int j = i; j < i + h; ++j) {
        const double x = data[j];
        const double y = data[j + h];
        data[j] = x + y;
        data[j + h] = x - y;
      }
    }
  }
}

StructuredRandomMatrix StructuredRandomMatrix::sample(RngState& rng, int n,
                                                      int blocks) {
  if (n < 1) throw std::invalid_argument("srm: size must be positive");
  if (blocks < 1) throw std::invalid_argument("srm: need at least one block");
  StructuredRandomMatrix srm(n, next_pow2(n));
  srm.signs_.reserve(blocks);
  for (int b = 0; b < blocks; ++b) {
    Eigen::VectorXd s(srm.padded_);
    for (int i = 0; i < srm.padded_; ++i) {
      s[i] = rng.next_u64() & 1 ? 1.0 : -1.0;
    }
    srm.signs_.push_back(std::move(s));
  }
  // Per-block 1/sqrt(n') normalization plus sqrt(n'/n) so truncation keeps
  // E[|Mv|^2] = |v|^2.
  srm.scale_ = std::pow(static_cast<double>(srm.padded_), -0.5 * blocks) *
               std::sqrt(static_cast<double>(srm.padded_) / n);
  return srm;
}

Eigen::VectorXd StructuredRandomMatrix::apply(const Eigen::VectorXd& v) const {
  if (v.size() != n_) throw std::invalid_argument("srm: size mismatch");
  Eigen::VectorXd buf = Eigen::VectorXd::Zero(padded_);
  buf.head(n_) = v;
  for (const auto& s : signs_) {
    buf.array() *= s.array();
    fwht_inplace(buf.data(), padded_);
  }
  return scale_ * buf.head(n_);
}

Eigen::MatrixXd StructuredRandomMatrix::apply_columns(
    const Eigen::MatrixXd& a) const {
  if (a.rows() != n_) throw std::invalid_argument("srm: size mismatch");
  Eigen::MatrixXd out(n_, a.cols());
  Eigen::VectorXd buf(padded_);
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    buf.setZero();
    buf.head(n_) = a.col(c);
    for (const auto& s : signs_) {
      buf.array() *= s.array();
      fwht_inplace(buf.data(), padded_);
    }
    out.col(c) = scale_ * buf.head(n_);
  }
  return out;
}

Eigen::MatrixXd StructuredRandomMatrix::materialize() const {
  Eigen::MatrixXd dense(n_, n_);
  for (int j = 0; j < n_; ++j) {
    dense.col(j) = apply(Eigen::VectorXd::Unit(n_, j));
  }
  return dense;
}

}  // namespace srf
