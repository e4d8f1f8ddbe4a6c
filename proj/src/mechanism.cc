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

#include "dpblogs/mechanism.h"

#include <string>
#include <utility>

#include "dpblogs/errors.h"
#include "dpblogs/random.h"
#include "dpblogs/shuffle.h"

namespace dpblogs {

uint64_t GroupStepSeed(uint64_t seed, uint64_t group, uint64_t step) {
  return DeriveSeed(seed, group, step);
}

Generator::Generator(ModelSpec model, AccountantConfig config, BlockPlan plan)
    : model_(std::move(model)), config_(config), plan_(std::move(plan)) {}

Generator Generator::Create(ModelSpec model, AccountantConfig config) {
  BlockPlan plan = OptimizeBlockSizes(model, config);
  return Generator(std::move(model), config, std::move(plan));
}

Generator Generator::WithBlockSizes(ModelSpec model, AccountantConfig config,
                                    const std::vector<size_t>& block_sizes) {
  BlockPlan plan = EvaluateBlockSizes(model, config, block_sizes);
  return Generator(std::move(model), config, std::move(plan));
}

PrivatizedGradients Generator::Generate(std::span<const GradientVector> grads,
                                        uint64_t seed) {
  if (steps_taken_ >= config_.steps) {
    throw ValidationError("budget horizon exhausted: all " +
                          std::to_string(config_.steps) +
                          " accounted steps have been used");
  }
  const auto& groups = model_.groups();
  if (grads.size() != groups.size()) {
    throw ValidationError("expected " + std::to_string(groups.size()) +
                          " gradients (one per group), got " +
                          std::to_string(grads.size()));
  }
  for (size_t i = 0; i < grads.size(); ++i) {
    if (grads[i].size() != groups[i].dim) {
      throw ValidationError("gradient for group '" + groups[i].name +
                            "' has " + std::to_string(grads[i].size()) +
                            " components, expected " +
                            std::to_string(groups[i].dim));
    }
  }

  PrivatizedGradients out;
  out.grads.reserve(grads.size());
  for (size_t i = 0; i < grads.size(); ++i) {
    const GradientVector clipped = Clip(grads[i], config_.clip_value);
    out.grads.push_back(BlockShuffle(
        clipped, {plan_.block_sizes[i], GroupStepSeed(seed, i, steps_taken_)}));
  }
  epsilon_spent_ = plan_.epsilon_total;
  ++steps_taken_;
  out.epsilon_spent = epsilon_spent_;
  out.delta = config_.delta;
  return out;
}

PrivacySpent Generator::privacy_spent() const {
  return {epsilon_spent_, config_.delta,
          static_cast<double>(steps_taken_) /
              static_cast<double>(config_.steps)};
}

}  // namespace dpblogs
