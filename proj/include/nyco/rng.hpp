#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace nyco {

// splitmix64 step (Vigna). Used both as the generator core and for seed mixing.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic, platform-independent PRNG. std::uniform_* distributions are
// implementation-defined, so all draws are hand-rolled here to keep seeded
// results bit-identical everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // warm up so that small seeds do not produce correlated first draws
    splitmix64(state_);
    splitmix64(state_);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  // uniform in [0, 1)
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform index in [0, n), unbiased via rejection
  std::size_t index(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  // standard normal, Box-Muller
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    u2 = uniform01();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double two_pi = 6.283185307179586476925286766559;
    spare_ = mag * std::sin(two_pi * u2);
    have_spare_ = true;
    return mag * std::cos(two_pi * u2);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// 64-bit FNV-1a over a byte string, folded into an accumulator with splitmix.
// Cell seeds for experiments are derived by chaining these, so any single
// (experiment, params, trial) cell can be reproduced in isolation.
inline std::uint64_t hash64(std::uint64_t acc, std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t s = acc ^ h;
  return splitmix64(s);
}

inline std::uint64_t hash64(std::uint64_t acc, std::uint64_t v) {
  std::uint64_t s = acc ^ (v + 0x9e3779b97f4a7c15ULL);
  return splitmix64(s);
}

}  // namespace nyco
