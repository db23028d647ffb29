#include "srf/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace srf {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z += kGamma;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngState::RngState(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
  key_ = mix64(mix64(seed) ^ mix64(stream * 0x632be59bd9b4e019ULL + 1));
}

RngState RngState::split(std::uint64_t child) const {
  return RngState(seed_, mix64(stream_ ^ mix64(child + 0x417149deed3ae1ULL)));
}

std::uint64_t RngState::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double RngState::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngState::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * next_unit() - 1.0;
    v = 2.0 * next_unit() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

double RngState::next_cauchy() {
  return std::tan(std::numbers::pi * (next_unit() - 0.5));
}

double RngState::next_angle() {
  return 2.0 * std::numbers::pi * next_unit();
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  return mix64(mix64(base + 0x5851f42d4c957f2dULL) ^ mix64(salt));
}

Eigen::MatrixXd sample_matrix(RngState& rng, int rows, int cols, Dist dist) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("sample_matrix: dimensions must be positive");
  }
  Eigen::MatrixXd out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      switch (dist) {
        case Dist::gaussian:
          out(i, j) = rng.next_gaussian();
          break;
        case Dist::cauchy:
          out(i, j) = rng.next_cauchy();
          break;
        case Dist::uniform_0_2pi:
          out(i, j) = rng.next_angle();
          break;
      }
    }
  }
  return out;
}

}  // namespace srf
