// Copyright 2026 The dpblogs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seedable, platform-stable random source.
//
// The standard library engines are portable but the distributions and
// std::shuffle are implementation-defined, so the bounded-integer draw and
// the Fisher-Yates shuffle live here. Every consumer that needs identical
// output across compilers goes through this header.

#ifndef DPBLOGS_RANDOM_H_
#define DPBLOGS_RANDOM_H_

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace dpblogs {

// One SplitMix64 step; advances `state`.
constexpr uint64_t SplitMix64Next(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent child seed from a parent seed and two stream
// coordinates (e.g. group index and step index).
constexpr uint64_t DeriveSeed(uint64_t seed, uint64_t a, uint64_t b) {
  uint64_t state = seed;
  uint64_t h = SplitMix64Next(state);
  state = h ^ (a * 0xd1b54a32d192ed03ULL);
  h = SplitMix64Next(state);
  state = h ^ (b * 0xaef17502108ef2d9ULL);
  return SplitMix64Next(state);
}

// xoshiro256** seeded through SplitMix64. Satisfies
// std::uniform_random_bit_generator.
class Rng {
 public:
  using result_type = uint64_t;

  explicit Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& word : s_) word = SplitMix64Next(sm);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    const uint64_t result = Rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = Rotl(s_[3], 45);
    return result;
  }

  // Uniform integer in [0, bound). Lemire's multiply-shift with rejection,
  // so the result is exactly unbiased. bound must be positive.
  uint64_t UniformBelow(uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<uint64_t>(m);
    if (low < bound) {
      const uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double UniformUnit() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

 private:
  static constexpr uint64_t Rotl(uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<uint64_t, 4> s_{};
};

// Unbiased in-place Fisher-Yates shuffle.
template <typename T>
void FisherYatesShuffle(std::span<T> items, Rng& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(rng.UniformBelow(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace dpblogs

#endif  // DPBLOGS_RANDOM_H_
