#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace emotikon {

// Seeded 64-bit generator with distribution helpers that do not depend on
// the standard library's (implementation-defined) distribution algorithms,
// so streams are identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // Standard normal via Box-Muller.
  double normal();

  template <typename It>
  void shuffle(It first, It last) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      const auto j = below(i);
      std::swap(first[i - 1], first[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Stable child seed from (master, stage, key): FNV-1a over the strings mixed
// with the master seed through splitmix64.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stage, std::string_view key = {});

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace emotikon
