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

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "dpblogs/bounds.h"
#include "dpblogs/errors.h"
#include "high_precision.h"

namespace dpblogs {
namespace {

using oracle::RelClose;
using S = std::vector<size_t>;

TEST(VarianceBoundTest, Examples) {
  EXPECT_EQ(VarianceBound(1, 1.0), 0.0);
  EXPECT_EQ(VarianceBound(2, 1.0), 0.5);
  EXPECT_EQ(VarianceBound(2, 0.0), 0.0);
  EXPECT_THROW(VarianceBound(0, 1.0), ValidationError);
}

TEST(UtilityBoundTest, Examples) {
  EXPECT_DOUBLE_EQ(UtilityBound(S{4}, S{2}, 1.0), 4.0);
  EXPECT_EQ(UtilityBound(S{9}, S{9}, 3.0), 0.0);
  EXPECT_DOUBLE_EQ(UtilityBound(S{4, 8}, S{2, 4}, 0.5), 2.0);
  EXPECT_THROW(UtilityBound(S{4}, S{2, 2}, 1.0), ValidationError);
}

TEST(MiBoundTest, Examples) {
  EXPECT_NEAR(MiBound(S{8}, S{2}), 1.3862943611198906, 1e-15);
  EXPECT_EQ(MiBound(S{5}, S{5}), 0.0);
  EXPECT_NEAR(MiBound(S{8, 8}, S{2, 4}), 2.0794415416798359, 1e-15);
  EXPECT_TRUE(RelClose(MiBound(S{8, 8}, S{2, 4}), oracle::Mi({8, 8}, {2, 4}),
                       1e-9));
  EXPECT_THROW(MiBound(S{8}, S{}), ValidationError);
}

TEST(ReconstructionBoundsTest, Examples) {
  ReconstructionBounds r = EvaluateReconstructionBounds(3, 1, 0.0, 1.0, 0.0);
  EXPECT_NEAR(r.guess_prob, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(r.expected_error_lb_gap, 5.0 / 6.0, 1e-15);

  r = EvaluateReconstructionBounds(4, 2, 1.0, 0.0, std::log(2.0));
  EXPECT_NEAR(r.expected_error_lb_rd, 1.4142135623730950, 1e-14);
  EXPECT_TRUE(RelClose(r.expected_error_lb_rd,
                       oracle::RdBound(4, 2, std::log(2.0), 1.0), 1e-9));

  r = EvaluateReconstructionBounds(1, 1, 5.0, 5.0, 0.0);
  EXPECT_EQ(r.guess_prob, 1.0);
  EXPECT_EQ(r.expected_error_lb_gap, 0.0);
  EXPECT_EQ(r.expected_error_lb_rd, 0.0);
}

TEST(ReconstructionBoundsTest, LogSpaceBeyond170) {
  const ReconstructionBounds r =
      EvaluateReconstructionBounds(200, 10, 1.0, 1.0, 0.0);
  EXPECT_TRUE(r.log_space);
  EXPECT_NEAR(r.log_guess_prob, -std::lgamma(201.0), 1e-9);
  EXPECT_EQ(r.expected_error_lb_gap, 1.0);
}

TEST(OptimalEpsilonForUtilityTest, Examples) {
  EXPECT_NEAR(OptimalEpsilonForUtility(10, 1, 5), 6.9314718055994531, 1e-14);
  EXPECT_NEAR(OptimalEpsilonForUtility(10, 1, 20), 0.0, 1e-15);
  EXPECT_NEAR(OptimalEpsilonForUtility(10, 1, 40), -3.4657359027997265, 1e-14);
  EXPECT_TRUE(RelClose(OptimalEpsilonForUtility(10, 1, 5),
                       oracle::OptimalEpsilon(10, 1, 5), 1e-9));
  EXPECT_THROW(OptimalEpsilonForUtility(10, 1, 0), ValidationError);
}

TEST(OptimalBlockSizeTest, Examples) {
  EXPECT_EQ(OptimalBlockSize(100, 1, 100, 1e-5), 99u);
  EXPECT_EQ(OptimalBlockSize(100, 1e9, 1, 1e-5), 1u);
  EXPECT_EQ(OptimalBlockSize(1, 1, 100, 1e-5), 1u);
}

TEST(OptimalAdaptiveParamsTest, Examples) {
  AdaptiveParams p = OptimalAdaptiveParams(10, 5, 20);
  EXPECT_EQ(p.block_size, 3u);
  EXPECT_DOUBLE_EQ(p.clip_value, 1.0);
  EXPECT_EQ(OptimalAdaptiveParams(10, 0, 20).block_size, 10u);
  EXPECT_EQ(OptimalAdaptiveParams(1, 3, 20).block_size, 1u);
}

TEST(OptimalLearningRateTest, Examples) {
  EXPECT_DOUBLE_EQ(OptimalLearningRate(2, 1, 400), 0.1);
  EXPECT_DOUBLE_EQ(OptimalLearningRate(1.5, 1.5, 1), 1.0);
  EXPECT_LT(OptimalLearningRate(1, 1, 1000000000), 1e-4);
}

TEST(ConvergenceBoundTest, Examples) {
  ConvergenceInputs in{2.0, 1.0, 0.0, 1.0, 0.1, 400, 0.1};
  EXPECT_NEAR(ConvergenceBound(in), 0.22238734153404083, 1e-14);
  EXPECT_TRUE(RelClose(ConvergenceBound(in),
                       oracle::ConvergenceBound(2, 1, 0, 1, 0.1, 400, 0.1),
                       1e-9));
  // Vanishes as T grows with the optimal rate.
  double prev = std::numeric_limits<double>::infinity();
  for (uint64_t t = 100; t <= 100000000; t *= 100) {
    in.steps = t;
    in.learning_rate = OptimalLearningRate(2.0, 1.0, t);
    const double b = ConvergenceBound(in);
    EXPECT_LT(b, prev);
    prev = b;
  }
  EXPECT_LT(prev, 1e-3);
  ConvergenceInputs degenerate{2.0, 0.0, 0.0, 1.0, 0.1, 400, 0.1};
  EXPECT_NEAR(ConvergenceBound(degenerate), 4.0 / 80.0, 1e-15);
}

TEST(ShuffleNoiseSigmaTest, SumsGroups) {
  const std::vector<double> g{1.0, 2.0};
  EXPECT_NEAR(ShuffleNoiseSigma(S{2, 4}, g),
              std::sqrt(0.5 * 1.0 + 0.75 * 4.0), 1e-15);
}

TEST(CheckBlockRatioTest, Examples) {
  EXPECT_TRUE(CheckBlockRatio(S{25, 100}, S{100, 400}, 0.1));
  EXPECT_TRUE(CheckBlockRatio(S{1, 1}, S{64, 64}, 0.1));
  EXPECT_FALSE(CheckBlockRatio(S{50, 10}, S{100, 400}, 0.1));
  EXPECT_THROW(CheckBlockRatio(S{1}, S{1, 2}, 0.1), ValidationError);
}

TEST(DiagnosticsTest, ReportsAreStructured) {
  const auto corpus = SmallInstanceCorpus(12, 2, 1);
  EXPECT_FALSE(corpus.empty());
  for (const auto& inst : corpus) {
    ASSERT_EQ(inst.gradient.size() % inst.block_size, 0u);
  }
  const BoundReport v = VarianceBoundDiagnostic(corpus);
  EXPECT_EQ(v.name, "variance_bound_diagnostic");
  EXPECT_TRUE(v.diagnostic.has_value());
  // The printed bound is 0 at b = 1 while a full shuffle has variance Var(g).
  EXPECT_GT(v.value, 0.0);

  const BoundReport u = UtilityBoundDiagnostic(corpus);
  EXPECT_TRUE(u.diagnostic.has_value());
  EXPECT_EQ(u.value, 0.0);
}

TEST(DiagnosticsTest, MutualInformation) {
  // Two inputs that every shuffle keeps apart: MI is the prior entropy.
  const std::vector<GradientVector> inputs{GradientVector({1, 2}),
                                           GradientVector({5, 6})};
  const std::vector<double> prior{0.5, 0.5};
  EXPECT_NEAR(ShuffleMutualInformation(inputs, prior, 1), std::log(2.0),
              1e-12);
  // Two inputs that are block permutations of each other: MI is 0.
  const std::vector<GradientVector> mixed{GradientVector({1, 2}),
                                          GradientVector({2, 1})};
  EXPECT_NEAR(ShuffleMutualInformation(mixed, prior, 1), 0.0, 1e-12);
}

TEST(DiagnosticsTest, MiReportFlagsSingleBlockInstances) {
  const auto corpus = SmallInstanceCorpus(6, 1, 4);
  const BoundReport r = MiBoundDiagnostic(corpus);
  ASSERT_EQ(r.details.size(), corpus.size());
  size_t single_block = 0;
  for (const auto& row : r.details) {
    const bool holds = row["within_ln_m_factorial"].get<bool>();
    if (row["num_blocks"].get<size_t>() == 1) {
      ++single_block;
      EXPECT_FALSE(holds);
    } else {
      EXPECT_TRUE(holds);
    }
  }
  EXPECT_EQ(r.value, static_cast<double>(single_block));
}

}  // namespace
}  // namespace dpblogs
