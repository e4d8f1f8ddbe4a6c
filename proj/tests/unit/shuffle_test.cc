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

#include <algorithm>
#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "dpblogs/errors.h"
#include "dpblogs/gradient.h"
#include "dpblogs/random.h"
#include "dpblogs/shuffle.h"

namespace dpblogs {
namespace {

using V = std::vector<double>;

V Values(const GradientVector& g) {
  return V(g.components().begin(), g.components().end());
}

GradientVector RandomGradient(size_t d, Rng& rng) {
  V v(d);
  for (double& x : v) x = 4.0 * rng.UniformUnit() - 2.0;
  return GradientVector(std::move(v));
}

TEST(BlockShuffleTest, SingleBlockIsIdentity) {
  const GradientVector g({1, 2, 3, 4});
  for (uint64_t seed : {0ull, 1ull, 99ull, 0xFFFFFFFFFFFFFFFFull}) {
    EXPECT_EQ(BlockShuffle(g, {4, seed}), g);
  }
}

TEST(BlockShuffleTest, TwoBlocksHitBothOutcomesEvenly) {
  const GradientVector g({1, 2, 3, 4});
  size_t identity = 0;
  const size_t n = 100000;
  for (uint64_t seed = 0; seed < n; ++seed) {
    const V out = Values(BlockShuffle(g, {2, seed}));
    if (out == V{1, 2, 3, 4}) {
      ++identity;
    } else {
      ASSERT_EQ(out, (V{3, 4, 1, 2}));
    }
  }
  EXPECT_NEAR(static_cast<double>(identity) / n, 0.5, 0.01);
}

TEST(BlockShuffleTest, PadThenTrimDropsTail) {
  const GradientVector g({1, 2, 3});
  bool saw_swap = false;
  for (uint64_t seed = 0; seed < 64; ++seed) {
    const V out = Values(BlockShuffle(g, {2, seed}));
    if (out == V{3, 0, 1}) {
      saw_swap = true;
    } else {
      ASSERT_EQ(out, (V{1, 2, 3}));
    }
  }
  EXPECT_TRUE(saw_swap);
  const auto dist = EnumerateBlockShuffles(g, 2);
  ASSERT_EQ(dist.outcomes.size(), 2u);
  EXPECT_DOUBLE_EQ(dist.outcomes.at(V{3, 0, 1}), 0.5);
  // The swapped outcome loses the 2, so the norm is not preserved.
  EXPECT_NE(L2Norm(V{3, 0, 1}), L2Norm(V{1, 2, 3}));
}

TEST(BlockShuffleTest, RejectsBadBlockSize) {
  const GradientVector g({1, 2, 3});
  EXPECT_THROW(BlockShuffle(g, {0, 1}), ValidationError);
  EXPECT_THROW(BlockShuffle(g, {4, 1}), ValidationError);
}

TEST(BlockShuffleTest, RestoresShape) {
  const GradientVector g(V{1, 2, 3, 4, 5, 6}, {2, 3});
  EXPECT_EQ(BlockShuffle(g, {3, 5}).shape(), (std::vector<size_t>{2, 3}));
}

TEST(BlockShuffleTest, DeterministicPerSeed) {
  Rng rng(7);
  const GradientVector g = RandomGradient(12, rng);
  EXPECT_EQ(BlockShuffle(g, {2, 42}), BlockShuffle(g, {2, 42}));
}

TEST(BlockShuffleTest, PreservesMultisetAndStats) {
  Rng rng(11);
  for (size_t d : {2, 4, 6, 8, 12}) {
    for (size_t b = 1; b <= d; ++b) {
      if (d % b) continue;
      for (uint64_t seed = 0; seed < 20; ++seed) {
        const GradientVector g = RandomGradient(d, rng);
        const GradientVector s = BlockShuffle(g, {b, seed});
        V a = Values(g), c = Values(s);
        std::sort(a.begin(), a.end());
        std::sort(c.begin(), c.end());
        ASSERT_EQ(a, c);
        const GradientStats sg = Stats(g), ss = Stats(s);
        EXPECT_NEAR(sg.l2_norm, ss.l2_norm, 1e-12);
        EXPECT_NEAR(sg.mean, ss.mean, 1e-12);
        EXPECT_NEAR(sg.variance, ss.variance, 1e-12);
      }
    }
  }
}

TEST(BlockShuffleTest, ClipCommutesExactly) {
  Rng rng(12);
  for (size_t d : {4, 6, 12}) {
    for (size_t b : {1, 2}) {
      for (double c : {0.1, 1.0, 100.0}) {
        for (uint64_t seed = 0; seed < 10; ++seed) {
          const GradientVector g = RandomGradient(d, rng);
          EXPECT_EQ(Clip(BlockShuffle(g, {b, seed}), c),
                    BlockShuffle(Clip(g, c), {b, seed}));
        }
      }
    }
  }
}

TEST(BlockShuffleTest, SharedSeedPreservesDistances) {
  Rng rng(13);
  for (size_t d : {4, 6, 8}) {
    for (size_t b : {1, 2}) {
      for (uint64_t seed = 0; seed < 20; ++seed) {
        const GradientVector u = RandomGradient(d, rng);
        const GradientVector v = RandomGradient(d, rng);
        const V su = Values(BlockShuffle(u, {b, seed}));
        const V sv = Values(BlockShuffle(v, {b, seed}));
        EXPECT_NEAR(L1Distance(su, sv), L1Distance(Values(u), Values(v)),
                    1e-12);
        EXPECT_NEAR(L2Distance(su, sv), L2Distance(Values(u), Values(v)),
                    1e-12);
        const double c = 0.5;
        const V cu = Values(BlockShuffle(Clip(u, c), {b, seed}));
        const V cv = Values(BlockShuffle(Clip(v, c), {b, seed}));
        EXPECT_LE(L2Distance(cu, cv), 2 * c + 1e-12);
      }
    }
  }
}

TEST(EnumerateTest, Examples) {
  const auto two = EnumerateBlockShuffles(GradientVector({1, 2, 3, 4}), 2);
  ASSERT_EQ(two.outcomes.size(), 2u);
  EXPECT_DOUBLE_EQ(two.outcomes.at(V{1, 2, 3, 4}), 0.5);
  EXPECT_DOUBLE_EQ(two.outcomes.at(V{3, 4, 1, 2}), 0.5);

  const auto one = EnumerateBlockShuffles(GradientVector({5}), 1);
  ASSERT_EQ(one.outcomes.size(), 1u);
  EXPECT_DOUBLE_EQ(one.outcomes.at(V{5}), 1.0);

  const auto fixed = EnumerateBlockShuffles(GradientVector({7, 7, 7, 7}), 2);
  ASSERT_EQ(fixed.outcomes.size(), 1u);
  EXPECT_DOUBLE_EQ(fixed.outcomes.at(V{7, 7, 7, 7}), 1.0);
}

TEST(EnumerateTest, InvariantsAndGuard) {
  Rng rng(3);
  const GradientVector g = RandomGradient(8, rng);
  const auto dist = EnumerateBlockShuffles(g, 1);
  EXPECT_NEAR(dist.TotalProbability(), 1.0, 1e-12);
  EXPECT_EQ(dist.outcomes.size(), 40320u);
  for (const auto& [out, p] : dist.outcomes) ASSERT_EQ(out.size(), 8u);
  EXPECT_THROW(EnumerateBlockShuffles(RandomGradient(9, rng), 1),
               ValidationError);
}

TEST(PerOffsetExpectationTest, Examples) {
  EXPECT_EQ(Values(PerOffsetExpectation(GradientVector({1, 2, 3, 4}), 2)),
            (V{2, 3, 2, 3}));
  EXPECT_EQ(Values(PerOffsetExpectation(GradientVector({-2, -2, -2, -2}), 2)),
            (V{-2, -2, -2, -2}));
  EXPECT_EQ(Values(PerOffsetExpectation(GradientVector({1, 2, 3, 4}), 4)),
            (V{1, 2, 3, 4}));
  EXPECT_THROW(PerOffsetExpectation(GradientVector({1, 2, 3}), 2),
               ValidationError);
}

TEST(ExactShuffleVarianceTest, Examples) {
  EXPECT_EQ(ExactShuffleVariance(GradientVector({1, 2, 3, 4}), 2),
            (V{1, 1, 1, 1}));
  EXPECT_EQ(ExactShuffleVariance(GradientVector({1, 2, 3, 4}), 4),
            (V{0, 0, 0, 0}));
  EXPECT_EQ(ExactShuffleVariance(GradientVector({.5, .5, .5, .5}), 1),
            (V{0, 0, 0, 0}));
  EXPECT_THROW(ExactShuffleVariance(GradientVector({1, 2, 3}), 2),
               ValidationError);
}

TEST(OracleEquivalenceTest, MomentsMatchEnumeration) {
  Rng rng(5);
  for (size_t d = 1; d <= 12; ++d) {
    for (size_t b = 1; b <= d; ++b) {
      if (d % b || d / b > 6) continue;
      const GradientVector g = RandomGradient(d, rng);
      const auto dist = EnumerateBlockShuffles(g, b);
      V mean(d, 0.0), second(d, 0.0);
      for (const auto& [out, p] : dist.outcomes) {
        for (size_t i = 0; i < d; ++i) mean[i] += p * out[i];
      }
      for (const auto& [out, p] : dist.outcomes) {
        for (size_t i = 0; i < d; ++i) {
          second[i] += p * (out[i] - mean[i]) * (out[i] - mean[i]);
        }
      }
      const V expect = Values(PerOffsetExpectation(g, b));
      const V var = ExactShuffleVariance(g, b);
      for (size_t i = 0; i < d; ++i) {
        EXPECT_NEAR(mean[i], expect[i], 1e-12) << d << "/" << b;
        EXPECT_NEAR(second[i], var[i], 1e-12) << d << "/" << b;
      }
    }
  }
}

TEST(RngTest, UniformBelowIsInRangeAndSeeded) {
  Rng a(1), b(1);
  for (int i = 0; i < 1000; ++i) {
    const uint64_t x = a.UniformBelow(7);
    EXPECT_LT(x, 7u);
    EXPECT_EQ(x, b.UniformBelow(7));
  }
  EXPECT_NE(DeriveSeed(1, 2, 3), DeriveSeed(1, 3, 2));
}

TEST(FisherYatesTest, ProducesPermutation) {
  Rng rng(9);
  for (size_t n : {1, 2, 5, 8}) {
    const auto perm = DrawBlockPermutation(n, rng);
    std::vector<size_t> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < n; ++i) EXPECT_EQ(sorted[i], i);
  }
}

}  // namespace
}  // namespace dpblogs
