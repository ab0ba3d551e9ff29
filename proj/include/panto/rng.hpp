#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace panto {

// Splittable pseudo-random streams for reproducible parallel Monte Carlo.
//
// A stream is addressed by (master_seed, path_index). The initial state is
// produced by running splitmix64 from the mixed seed
//
//     z0 = master_seed + 0x9E3779B97F4A7C15 * (path_index + 1),
//
// and the generator itself is xoshiro256++. The whole construction is pure
// 64-bit integer arithmetic, so identical (master_seed, path_index) pairs
// reproduce identical draw sequences on any platform, and distinct path
// indices give statistically independent streams.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t path_index)
      : master_seed_(master_seed), path_index_(path_index) {
    std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (path_index + 1);
    for (auto& word : state_) word = splitmix64(z);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t path_index() const { return path_index_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on the open interval (0, 1); safe to feed into logarithms.
  double uniform_open() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  // Exp(rate) waiting time, strictly positive.
  double exponential(double rate) {
    return -std::log(uniform_open()) / rate;
  }

  // Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal() {
    const double u1 = uniform_open();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& z) {
    z += 0x9E3779B97F4A7C15ULL;
    std::uint64_t x = z;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t master_seed_;
  std::uint64_t path_index_;
  std::array<std::uint64_t, 4> state_;
};

}  // namespace panto
