#pragma once

#include <cstdint>

namespace sleepgraph {

// splitmix64. All randomness in the library flows through this generator so
// that sequences reproduce bit-exactly across platforms and implementations.
// Reference: Steele, Lea & Flood, "Fast splittable pseudorandom number
// generators" (the standard splitmix64 finalizer constants).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) with 53 significant bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound). Modulo reduction; the bias is negligible for the
  // bounds used here (< 2^20) and the mapping is part of the fixed contract.
  std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

 private:
  std::uint64_t state_;
};

// Deterministic per-task seed derivation: tasks (recordings, trees, folds)
// draw from independent streams regardless of execution order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
  return g.next_u64();
}

}  // namespace sleepgraph
