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

// Per-step gradient privatization: clip each group to C, then block-shuffle
// it with the accountant's block size for that group.

#ifndef DPBLOGS_MECHANISM_H_
#define DPBLOGS_MECHANISM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "dpblogs/accountant.h"
#include "dpblogs/gradient.h"

namespace dpblogs {

struct PrivatizedGradients {
  std::vector<GradientVector> grads;
  double epsilon_spent = 0.0;
  double delta = 0.0;
};

struct PrivacySpent {
  double epsilon = 0.0;
  double delta = 0.0;
  double fraction_elapsed = 0.0;
};

// Random seed for group `group` at step `step` of a run seeded with `seed`.
uint64_t GroupStepSeed(uint64_t seed, uint64_t group, uint64_t step);

class Generator {
 public:
  // Runs OptimizeBlockSizes and stores the plan.
  static Generator Create(ModelSpec model, AccountantConfig config);

  // Uses caller-chosen block sizes, accounted with EvaluateBlockSizes.
  static Generator WithBlockSizes(ModelSpec model, AccountantConfig config,
                                  const std::vector<size_t>& block_sizes);

  // Privatizes one step's gradients, one per model group in order.
  // epsilon_spent becomes the plan's whole-run total on the first call and
  // stays there. Throws once config().steps calls have been made.
  PrivatizedGradients Generate(std::span<const GradientVector> grads,
                               uint64_t seed);

  PrivacySpent privacy_spent() const;

  const BlockPlan& plan() const { return plan_; }
  const ModelSpec& model() const { return model_; }
  const AccountantConfig& config() const { return config_; }
  double epsilon_spent() const { return epsilon_spent_; }
  uint64_t steps_taken() const { return steps_taken_; }

 private:
  Generator(ModelSpec model, AccountantConfig config, BlockPlan plan);

  ModelSpec model_;
  AccountantConfig config_;
  BlockPlan plan_;
  double epsilon_spent_ = 0.0;
  uint64_t steps_taken_ = 0;
};

}  // namespace dpblogs

#endif  // DPBLOGS_MECHANISM_H_
