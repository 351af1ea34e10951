#pragma once

#include <cstdint>

#include "qmink/common.hpp"

namespace qmink {

// Counter-based generator: value k of a stream is the SplitMix64 output at
// state seed + k * golden, i.e. splitmix64 skipped ahead k steps. Streams are
// decorrelated by hashing the stream id into the seed. Pure 64-bit integer
// arithmetic, so the raw stream is identical on every platform.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(mix(seed ^ mix(stream + kGolden))), pos_(0) {}

  std::uint64_t next_u64() { return mix(seed_ + (++pos_) * kGolden); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (pairs cached).
  double next_normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = std::max(next_unit(), 0x1.0p-53);
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * pi<double> * u2);
    have_cached_ = true;
    return r * std::cos(2.0 * pi<double> * u2);
  }

  Vector3d unit_vector3() {
    for (;;) {
      const Vector3d v(next_normal(), next_normal(), next_normal());
      const double n = v.norm();
      if (n > 1e-12) return v / n;
    }
  }

  Vector4d unit_vector4() {
    for (;;) {
      const Vector4d v(next_normal(), next_normal(), next_normal(), next_normal());
      const double n = v.norm();
      if (n > 1e-12) return v / n;
    }
  }

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  std::uint64_t seed_;
  std::uint64_t pos_;
  double cached_ = 0;
  bool have_cached_ = false;
};

}  // namespace qmink
