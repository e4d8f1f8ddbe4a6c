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

#ifndef DPBLOGS_SHUFFLE_H_
#define DPBLOGS_SHUFFLE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "dpblogs/gradient.h"
#include "dpblogs/random.h"

namespace dpblogs {

struct ShuffleParams {
  size_t block_size = 1;
  uint64_t seed = 0;
};

// Number of blocks ceil(d / block_size).
size_t NumBlocks(size_t dim, size_t block_size);

// Draws a uniformly random permutation of `num_blocks` block indices.
// Entry k of the result is the source block placed at position k.
std::vector<size_t> DrawBlockPermutation(size_t num_blocks, Rng& rng);

// Zero-pads g to a multiple of block_size, reorders the blocks by
// `permutation`, then trims back to d components and restores the shape.
// When block_size does not divide d, the trim can drop original components
// and keep padding zeros instead.
GradientVector ApplyBlockPermutation(const GradientVector& g,
                                     size_t block_size,
                                     std::span<const size_t> permutation);

// Block-wise shuffle: a uniformly random block permutation drawn from `rng`.
GradientVector BlockShuffle(const GradientVector& g, size_t block_size,
                            Rng& rng);

// Same, with a fresh random source seeded from params.seed. Two calls with
// the same seed and block count apply the same permutation.
GradientVector BlockShuffle(const GradientVector& g,
                            const ShuffleParams& params);

// Exact output law of BlockShuffle: outcome -> probability.
struct ShuffleDistribution {
  std::map<std::vector<double>, double> outcomes;

  double TotalProbability() const;
};

inline constexpr size_t kMaxEnumeratedBlocks = 8;

// Enumerates all m! block permutations (m <= 8). Outcomes produced by
// several permutations accumulate their multiplicity.
ShuffleDistribution EnumerateBlockShuffles(const GradientVector& g,
                                           size_t block_size);

// E[shuffle(g)[i]]: mean over blocks of the components sharing i's offset
// within its block. Requires block_size | d.
GradientVector PerOffsetExpectation(const GradientVector& g,
                                    size_t block_size);

// Var[shuffle(g)[i]] in closed form. Requires block_size | d.
std::vector<double> ExactShuffleVariance(const GradientVector& g,
                                         size_t block_size);

}  // namespace dpblogs

#endif  // DPBLOGS_SHUFFLE_H_
