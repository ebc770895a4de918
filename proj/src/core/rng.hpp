// Counter-based per-trial random streams: SplitMix64 expands
// (master_seed, trial_index) into a xoshiro256** state, so any trial can be
// generated on any worker in any order with identical output.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "core/common.hpp"

namespace rpz {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  static Rng for_trial(uint64_t master_seed, uint64_t trial_index) {
    uint64_t sm = master_seed;
    // Decorrelate the two inputs before expansion; +1 keeps trial 0 active.
    sm ^= splitmix64(sm) + (trial_index + 1) * 0xD1B54A32D192ED03ULL;
    return Rng(sm);
  }

  uint64_t next() {  // xoshiro256**
    auto rotl = [](uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
    uint64_t result = rotl(s_[1] * 5, 7) * 9;
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  double uniform01() {  // [0, 1)
    return double(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double normal() {  // Box-Muller, single branch: 2 words per variate
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  double sign() { return (next() >> 63) ? 1.0 : -1.0; }

 private:
  std::array<uint64_t, 4> s_{};
};

}  // namespace rpz
