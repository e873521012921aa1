#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace simax {

// Reproducible generator. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; real-valued draws are derived from
// the raw 64-bit words here rather than through <random> distributions,
// whose algorithms are implementation-defined.
class SeededRng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64";

  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t draws() const noexcept { return draws_; }

  std::uint64_t next_u64() {
    ++draws_;
    return engine_();
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound); bound > 0. Rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % bound;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t draws_ = 0;
  std::mt19937_64 engine_;
};

// Child seed for an independent stream (trial t, point i, ...). SplitMix64
// finalizer over the parent seed and the stream id.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept {
  std::uint64_t z = parent + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace simax
