#pragma once

#include <cstdint>
#include <random>

namespace wmc {

// splitmix64 finalizer: maps a 64-bit value to a well-mixed one.
inline std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seeded random stream with splittable child derivation.
//
// derive(k) is a pure function of (seed, k) and never of how much of the
// parent stream has been consumed, so per-(trial, stage) streams stay
// independent of execution order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  std::uint64_t seed() const noexcept { return seed_; }

  Rng derive(std::uint64_t stream) const {
    return Rng(mix64(seed_ + (stream + 1) * 0x9e3779b97f4a7c15ULL));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double normal() { return normal_(engine_); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace wmc
