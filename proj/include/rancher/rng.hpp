#pragma once

#include <cstdint>
#include <random>

namespace rancher {

/// splitmix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream derivation rule: run_seed = mix64(mix64(master) ^ run_index).
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t run_index) {
  return mix64(mix64(master_seed) ^ run_index);
}

/// Seeded 64-bit engine with a platform-independent uniform draw.
/// std::uniform_real_distribution is implementation-defined, so it is not used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    ++draws_;
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t draws() const { return draws_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_{0};
};

}  // namespace rancher
