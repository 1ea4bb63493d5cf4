#pragma once

#include <cstdint>

namespace ngl {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so sample i gets the same numbers no matter which
// thread evaluates it or in what order.
class KeyedRng {
 public:
  constexpr KeyedRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const { return mix(key_ + mix(counter)); }

  // Uniform in [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
};

// Sequential convenience wrapper over KeyedRng for test-family generators.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}
  double uniform() { return rng_.uniform(counter_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }

 private:
  KeyedRng rng_;
  std::uint64_t counter_ = 0;
};

}  // namespace ngl
