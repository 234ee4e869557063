#pragma once

#include <algorithm>
#include <cstdint>

namespace preattack {

// SplitMix64 (Steele, Lea & Flood 2014). The artifact-wide generator: one
// 64-bit word of state and a fixed integer output permutation, so streams are
// bit-identical across platforms and compilers. std::random distributions are
// avoided on purpose -- their algorithms are implementation-defined.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform index in [0, n), n > 0. Scaling keeps the draw platform-stable;
  // the clamp catches the rare round-up at the top of the range.
  std::uint64_t next_below(std::uint64_t n) {
    auto v = static_cast<std::uint64_t>(next_unit() * static_cast<double>(n));
    return std::min(v, n - 1);
  }

 private:
  std::uint64_t state_;
};

// Independent stream seed from (master seed, stream index); documented so any
// run is reproducible from the master seed alone.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 g(master ^ (0xD1B54A32D192ED03ULL * (index + 1)));
  return g.next_u64();
}

}  // namespace preattack
