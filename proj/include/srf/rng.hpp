#ifndef SRF_RNG_HPP
#define SRF_RNG_HPP

#include <cstdint>

#include <Eigen/Dense>

namespace srf {

/// Counter-based splittable generator. The sample sequence is a pure
/// function of (seed, stream); advancing never mutates shared state, so
/// states can be copied freely and split into independent child streams
/// for order-independent parallel draws.
class RngState {
 public:
  RngState() : RngState(0) {}
  explicit RngState(std::uint64_t seed, std::uint64_t stream = 0);

  /// Derives an independent child stream. Distinct `child` values give
  /// distinct streams; the parent is left untouched.
  RngState split(std::uint64_t child) const;

  std::uint64_t next_u64();
  double next_unit();      // uniform on [0, 1), 53-bit resolution
  double next_gaussian();  // standard normal, Marsaglia polar
  double next_cauchy();    // standard Cauchy, inverse CDF
  double next_angle();     // uniform on [0, 2*pi)

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

enum class Dist { gaussian, cauchy, uniform_0_2pi };

/// rows x cols matrix of i.i.d. draws, filled row by row.
/// Throws std::invalid_argument for non-positive dimensions.
Eigen::MatrixXd sample_matrix(RngState& rng, int rows, int cols, Dist dist);

/// Stable 64-bit seed derivation for keyed sub-streams (per-graph sketch
/// seeds, per-cell experiment seeds).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt);

/// Named stream offsets so every artifact derives from one top-level seed.
namespace streams {
inline constexpr std::uint64_t dataset = 1;
inline constexpr std::uint64_t feature_map = 2;
inline constexpr std::uint64_t sketch = 3;
inline constexpr std::uint64_t init = 4;
inline constexpr std::uint64_t shuffle = 5;
}  // namespace streams

}  // namespace srf

#endif  // SRF_RNG_HPP
