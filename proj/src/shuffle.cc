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

#include "dpblogs/shuffle.h"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "dpblogs/errors.h"

namespace dpblogs {
namespace {

void ValidateBlockSize(size_t dim, size_t block_size) {
  if (block_size < 1 || block_size > dim) {
    throw ValidationError("block size " + std::to_string(block_size) +
                          " must satisfy 1 <= block size <= d = " +
                          std::to_string(dim));
  }
}

void RequireDivides(size_t dim, size_t block_size, const char* what) {
  ValidateBlockSize(dim, block_size);
  if (dim % block_size != 0) {
    throw ValidationError(std::string(what) + " requires the block size (" +
                          std::to_string(block_size) + ") to divide d (" +
                          std::to_string(dim) +
                          "); padding invalidates the closed form");
  }
}

}  // namespace

size_t NumBlocks(size_t dim, size_t block_size) {
  return (dim + block_size - 1) / block_size;
}

std::vector<size_t> DrawBlockPermutation(size_t num_blocks, Rng& rng) {
  std::vector<size_t> permutation(num_blocks);
  std::iota(permutation.begin(), permutation.end(), size_t{0});
  FisherYatesShuffle(std::span<size_t>(permutation), rng);
  return permutation;
}

GradientVector ApplyBlockPermutation(const GradientVector& g,
                                     size_t block_size,
                                     std::span<const size_t> permutation) {
  const size_t dim = g.size();
  ValidateBlockSize(dim, block_size);
  const size_t num_blocks = NumBlocks(dim, block_size);
  if (permutation.size() != num_blocks) {
    throw ValidationError("permutation length must equal the block count");
  }
  std::vector<double> padded(num_blocks * block_size, 0.0);
  std::copy(g.components().begin(), g.components().end(), padded.begin());

  std::vector<double> out(dim);
  for (size_t pos = 0; pos < num_blocks; ++pos) {
    const size_t src = permutation[pos];
    for (size_t k = 0; k < block_size; ++k) {
      const size_t dst = pos * block_size + k;
      if (dst >= dim) break;
      out[dst] = padded[src * block_size + k];
    }
  }
  return g.WithComponents(std::move(out));
}

GradientVector BlockShuffle(const GradientVector& g, size_t block_size,
                            Rng& rng) {
  ValidateBlockSize(g.size(), block_size);
  const auto permutation =
      DrawBlockPermutation(NumBlocks(g.size(), block_size), rng);
  return ApplyBlockPermutation(g, block_size, permutation);
}

GradientVector BlockShuffle(const GradientVector& g,
                            const ShuffleParams& params) {
  Rng rng(params.seed);
  return BlockShuffle(g, params.block_size, rng);
}

double ShuffleDistribution::TotalProbability() const {
  double total = 0.0;
  for (const auto& [outcome, p] : outcomes) total += p;
  return total;
}

ShuffleDistribution EnumerateBlockShuffles(const GradientVector& g,
                                           size_t block_size) {
  ValidateBlockSize(g.size(), block_size);
  const size_t num_blocks = NumBlocks(g.size(), block_size);
  if (num_blocks > kMaxEnumeratedBlocks) {
    throw ValidationError(
        "enumeration needs m = ceil(d/block size) <= 8 blocks, got " +
        std::to_string(num_blocks) +
        "; use sampled BlockShuffle draws for larger instances");
  }
  std::vector<size_t> permutation(num_blocks);
  std::iota(permutation.begin(), permutation.end(), size_t{0});

  std::map<std::vector<double>, size_t> counts;
  size_t total = 0;
  do {
    auto out = ApplyBlockPermutation(g, block_size, permutation);
    ++counts[{out.components().begin(), out.components().end()}];
    ++total;
  } while (std::next_permutation(permutation.begin(), permutation.end()));

  ShuffleDistribution dist;
  for (auto& [outcome, count] : counts) {
    dist.outcomes.emplace(outcome, static_cast<double>(count) /
                                       static_cast<double>(total));
  }
  return dist;
}

GradientVector PerOffsetExpectation(const GradientVector& g,
                                    size_t block_size) {
  RequireDivides(g.size(), block_size, "per-offset expectation");
  const size_t num_blocks = g.size() / block_size;
  std::vector<double> offset_mean(block_size, 0.0);
  for (size_t r = 0; r < block_size; ++r) {
    double sum = 0.0;
    for (size_t j = 0; j < num_blocks; ++j) sum += g[j * block_size + r];
    offset_mean[r] = sum / static_cast<double>(num_blocks);
  }
  std::vector<double> out(g.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = offset_mean[i % block_size];
  return g.WithComponents(std::move(out));
}

std::vector<double> ExactShuffleVariance(const GradientVector& g,
                                         size_t block_size) {
  const GradientVector mean = PerOffsetExpectation(g, block_size);
  const size_t num_blocks = g.size() / block_size;
  std::vector<double> offset_var(block_size, 0.0);
  for (size_t r = 0; r < block_size; ++r) {
    double sq = 0.0;
    for (size_t j = 0; j < num_blocks; ++j) {
      const double dev = g[j * block_size + r] - mean[r];
      sq += dev * dev;
    }
    offset_var[r] = sq / static_cast<double>(num_blocks);
  }
  std::vector<double> out(g.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = offset_var[i % block_size];
  return out;
}

}  // namespace dpblogs
