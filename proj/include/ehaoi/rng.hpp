#pragma once

#include <cstdint>

namespace ehaoi {

/// Counter-based generator: draw k of stream s under seed is a pure function
/// hash(seed, s, k), so substreams never interact.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  int bernoulli(double prob) { return uniform() < prob ? 1 : 0; }

  std::uint64_t counter() const { return counter_; }

 private:
  // splitmix64 finaliser
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

namespace streams {
inline constexpr std::uint64_t kEnergy = 1;
inline constexpr std::uint64_t kRequest = 2;
inline constexpr std::uint64_t kInitialBattery = 3;
}  // namespace streams

}  // namespace ehaoi
