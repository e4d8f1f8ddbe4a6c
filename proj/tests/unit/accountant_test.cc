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

#include "dpblogs/accountant.h"
#include "dpblogs/errors.h"
#include "high_precision.h"

namespace dpblogs {
namespace {

AccountantConfig Config(double target, double delta, uint64_t steps,
                        double clip) {
  AccountantConfig c;
  c.target_epsilon = target;
  c.delta = delta;
  c.steps = steps;
  c.clip_value = clip;
  return c;
}

ModelSpec Model(std::vector<size_t> dims) {
  std::vector<ParameterGroup> groups;
  for (size_t i = 0; i < dims.size(); ++i) {
    groups.push_back({"g" + std::to_string(i), dims[i]});
  }
  return ModelSpec(std::move(groups));
}

TEST(EpsilonGroupTest, Examples) {
  const GroupEpsilon a = EpsilonGroup(4, 1, 1.0);
  EXPECT_NEAR(a.eps1, 4.1269107100296570, 1e-12);
  EXPECT_NEAR(a.eps2, 0.71474803901757707, 1e-12);
  EXPECT_EQ(a.eps, a.eps2);
  EXPECT_FALSE(a.saturated);

  const GroupEpsilon b = EpsilonGroup(4, 2, 1.0);
  EXPECT_NEAR(b.eps2, 1.8773762067897869, 1e-12);
  EXPECT_EQ(b.eps, b.eps2);

  const GroupEpsilon c = EpsilonGroup(1, 1, 1.0);
  EXPECT_NEAR(c.eps1, 4.0, 1e-14);
  EXPECT_NEAR(c.eps2, 4.0, 1e-14);
}

TEST(EpsilonGroupTest, RejectsBadInputs) {
  EXPECT_THROW(EpsilonGroup(4, 0, 1.0), ValidationError);
  EXPECT_THROW(EpsilonGroup(4, 5, 1.0), ValidationError);
  EXPECT_THROW(EpsilonGroup(4, 1, 0.0), ValidationError);
  EXPECT_THROW(EpsilonGroup(0, 1, 1.0), ValidationError);
}

TEST(EpsilonGroupTest, SaturatesLargeExponents) {
  const GroupEpsilon g = EpsilonGroup(1, 1, 400.0);
  EXPECT_TRUE(g.saturated);
  EXPECT_TRUE(std::isinf(g.eps));
  const BlockPlan plan = EvaluateBlockSizes(Model({1}), Config(1, 1e-5, 1, 400),
                                            {1});
  EXPECT_FALSE(plan.warnings.empty());
}

TEST(EpsilonGroupTest, MatchesHighPrecisionGrid) {
  int points = 0;
  for (size_t d : {1, 2, 3, 7, 16, 100, 1000, 65536}) {
    for (double c : {0.01, 0.3, 1.0, 4.0, 25.0}) {
      for (size_t b : {size_t{1}, (d + 1) / 2, d}) {
        const GroupEpsilon e = EpsilonGroup(d, b, c);
        EXPECT_TRUE(oracle::RelClose(e.eps1, oracle::Eps1(d, c), 1e-9))
            << d << " " << c;
        EXPECT_TRUE(oracle::RelClose(e.eps2, oracle::Eps2(d, b, c), 1e-9))
            << d << " " << b << " " << c;
        ++points;
      }
    }
  }
  EXPECT_GE(points, 120);
}

TEST(TotalPrivacyTest, Examples) {
  EXPECT_EQ(TotalPrivacy(0.0, 100, 1e-5), 0.0);
  EXPECT_NEAR(TotalPrivacy(0.01, 100, 1e-5), 0.48990275830297618, 1e-12);
  EXPECT_NEAR(TotalPrivacy(0.1, 1, 1e-5), 0.49036968302637288, 1e-12);
  EXPECT_THROW(TotalPrivacy(0.1, 1, 0.0), ValidationError);
  EXPECT_THROW(TotalPrivacy(0.1, 1, 1.0), ValidationError);
  EXPECT_THROW(TotalPrivacy(-0.1, 1, 0.5), ValidationError);
}

TEST(TotalPrivacyTest, MatchesHighPrecisionGrid) {
  for (int i = 0; i < 200; ++i) {
    const double e = 1e-4 * std::pow(1.06, i);  // up to ~12
    const uint64_t t = 1 + (i * 37) % 1000;
    const double delta = std::pow(10.0, -1.0 - (i % 9));
    EXPECT_TRUE(oracle::RelClose(TotalPrivacy(e, t, delta),
                                 oracle::TotalPrivacy(e, t, delta), 1e-9))
        << e << " " << t << " " << delta;
  }
}

TEST(TotalPrivacyTest, StrictlyIncreasing) {
  for (double e = 0.01; e < 5; e *= 1.5) {
    EXPECT_LT(TotalPrivacy(e, 10, 1e-5), TotalPrivacy(e * 1.01, 10, 1e-5));
    EXPECT_LT(TotalPrivacy(e, 10, 1e-5), TotalPrivacy(e, 11, 1e-5));
  }
}

TEST(LargestBlockTest, Examples) {
  EXPECT_EQ(LargestBlockForTarget(4, 1.0, 1.0), 1u);
  EXPECT_EQ(LargestBlockForTarget(4, 1.0, 0.1), 1u);
  EXPECT_EQ(LargestBlockForTarget(2, 1.0, 100.0), 1u);
  EXPECT_EQ(LargestBlockForTarget(1, 1.0, 100.0), 1u);
  EXPECT_EQ(LargestBlockForTarget(4, 1.0, 2.0), 2u);
}

TEST(LargestBlockTest, MonotoneAndAgreesWithLinearScan) {
  for (double c : {0.1, 1.0, 10.0}) {
    for (size_t d = 1; d <= 2000; ++d) {
      double prev = 0.0;
      std::vector<double> eps(d + 1);
      for (size_t b = 1; b <= d; ++b) {
        eps[b] = EpsilonGroup(d, b, c).eps2;
        ASSERT_GE(eps[b], prev) << d << " " << b << " " << c;
        prev = eps[b];
      }
      for (double target : {0.05, 0.5, 2.0}) {
        size_t scan = 1;
        for (size_t b = 1; b + 1 <= d; ++b) {
          if (std::min(EpsilonGroup(d, b, c).eps1, eps[b]) <= target) scan = b;
        }
        ASSERT_EQ(LargestBlockForTarget(d, c, target), scan)
            << d << " " << c << " " << target;
      }
    }
  }
}

TEST(OptimizeTest, SingleSmallGroup) {
  const BlockPlan plan = OptimizeBlockSizes(Model({4}), Config(0.75, 1e-5, 1, 1));
  EXPECT_EQ(plan.block_sizes, std::vector<size_t>{1});
  EXPECT_NEAR(plan.epsilon_per_step, 0.71474803901757707, 1e-12);
  EXPECT_NEAR(plan.epsilon_total, 4.1756992810431994, 1e-12);
  EXPECT_TRUE(plan.ExceedsTarget(0.75));
  EXPECT_NEAR(plan.target_gap, std::abs(plan.epsilon_total - 0.75), 1e-15);
}

TEST(OptimizeTest, ScalarGroupWarns) {
  for (double target : {0.1, 10.0}) {
    const BlockPlan plan =
        OptimizeBlockSizes(Model({1}), Config(target, 1e-3, 3, 0.5));
    EXPECT_EQ(plan.block_sizes, std::vector<size_t>{1});
    EXPECT_FALSE(plan.warnings.empty());
  }
}

TEST(OptimizeTest, PlanInvariants) {
  const std::vector<size_t> dims{3, 50, 400, 1};
  const BlockPlan plan =
      OptimizeBlockSizes(Model(dims), Config(5.0, 1e-5, 10, 1.0));
  double sum = 0.0;
  for (size_t i = 0; i < dims.size(); ++i) {
    EXPECT_GE(plan.block_sizes[i], 1u);
    EXPECT_LE(plan.block_sizes[i], std::max<size_t>(1, dims[i] - 1));
    sum += plan.per_group_epsilon[i];
  }
  EXPECT_NEAR(plan.epsilon_per_step, sum, 1e-12);
}

TEST(OptimizeTest, RatioTracksDimensions) {
  const BlockPlan plan =
      OptimizeBlockSizes(Model({100, 400}), Config(1.0, 1e-5, 1, 1.0));
  ASSERT_EQ(plan.block_sizes.size(), 2u);
  const double ratio = static_cast<double>(plan.block_sizes[1]) /
                       static_cast<double>(plan.block_sizes[0]);
  EXPECT_NEAR(ratio, 4.0, 4.0 * 0.1 + 1.0 / plan.block_sizes[0]);
}

// No per-group target on a 100-point grid beats the optimizer's gap.
TEST(OptimizeTest, DominatesGridSearch) {
  const std::vector<std::vector<size_t>> models{
      {4}, {100, 400}, {10, 20, 30}, {1000}, {7, 1, 64}};
  for (const auto& dims : models) {
    for (double target : {0.5, 2.0, 8.0}) {
      for (uint64_t steps : {1, 10}) {
        const ModelSpec model = Model(dims);
        const AccountantConfig cfg = Config(target, 1e-5, steps, 1.0);
        const BlockPlan best = OptimizeBlockSizes(model, cfg);
        for (int k = 0; k < 100; ++k) {
          const double per_group = target / steps * k / 99.0;
          std::vector<size_t> blocks;
          for (size_t d : dims) {
            blocks.push_back(LargestBlockForTarget(d, 1.0, per_group));
          }
          const BlockPlan probe = EvaluateBlockSizes(model, cfg, blocks);
          EXPECT_GE(probe.target_gap, best.target_gap - 1e-6)
              << "target " << target << " steps " << steps << " k " << k;
        }
      }
    }
  }
}

TEST(OptimizeTest, Deterministic) {
  const ModelSpec model = Model({30, 70});
  const AccountantConfig cfg = Config(3.0, 1e-5, 5, 0.7);
  const BlockPlan a = OptimizeBlockSizes(model, cfg);
  const BlockPlan b = OptimizeBlockSizes(model, cfg);
  EXPECT_EQ(a.block_sizes, b.block_sizes);
  EXPECT_EQ(a.epsilon_total, b.epsilon_total);
}

TEST(ModelSpecTest, Validation) {
  EXPECT_THROW(ModelSpec({}), ValidationError);
  EXPECT_THROW(ModelSpec({{"a", 1}, {"a", 2}}), ValidationError);
  EXPECT_THROW(ModelSpec({{"a", 0}}), ValidationError);
  EXPECT_EQ(ModelSpec({{"a", 3}, {"b", 5}}).total_parameters(), 8u);
}

TEST(AccountantConfigTest, Validation) {
  EXPECT_NO_THROW(Config(1, 1e-5, 1, 1).Validate());
  EXPECT_THROW(Config(0, 1e-5, 1, 1).Validate(), ValidationError);
  EXPECT_THROW(Config(1, 1.0, 1, 1).Validate(), ValidationError);
  EXPECT_THROW(Config(1, 1e-5, 0, 1).Validate(), ValidationError);
  EXPECT_THROW(Config(1, 1e-5, 1, -1).Validate(), ValidationError);
  AccountantConfig c = Config(1, 1e-5, 1, 1);
  c.batch_size = 0;
  EXPECT_THROW(c.Validate(), ValidationError);
}

}  // namespace
}  // namespace dpblogs
