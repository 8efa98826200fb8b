#ifndef LEVYATM_RNG_HPP
#define LEVYATM_RNG_HPP

#include <cmath>
#include <cstdint>

namespace levyatm {

/// Splittable 64-bit generator (SplitMix64).  Sub-streams are derived from a
/// master seed and a stream index, so parallel Monte Carlo workers draw from
/// statistically independent streams and results are bit-reproducible.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(mix(seed ^ 0x5851f42d4c957f2dULL)) {}

  static RngStream substream(std::uint64_t master_seed, std::uint64_t index) {
    return RngStream(mix(master_seed + 0x9e3779b97f4a7c15ULL * (index + 1)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform on the open interval (0, 1).
  double uniform01() {
    const double u = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    return u;
  }

  double exponential() { return -std::log(uniform01()); }

  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * M_PI * u2);
    have_cached_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace levyatm

#endif  // LEVYATM_RNG_HPP
