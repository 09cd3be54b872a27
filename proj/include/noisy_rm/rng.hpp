#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace noisy_rm {

// Seeded generator with platform-independent output. The engine is the
// standard 64-bit Mersenne Twister (its sequence is fixed by the standard);
// the distribution layer is done here because the standard distributions are
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on {0, ..., n-1}; n must be positive. Rejection sampling keeps it unbiased.
  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

// Inverse-CDF draw from an unnormalised-safe categorical: returns the first
// index whose running sum exceeds u * total. Zero-mass entries are never chosen.
std::size_t sample_categorical(std::span<const double> probs, double u);

}  // namespace noisy_rm
