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

// Privacy accountant: per-group epsilon for a block size, the whole-run
// total, and the nested binary search that picks block sizes for a target.

#ifndef DPBLOGS_ACCOUNTANT_H_
#define DPBLOGS_ACCOUNTANT_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dpblogs {

struct ParameterGroup {
  std::string name;
  size_t dim = 1;
};

// Ordered, nonempty list of uniquely named parameter groups.
class ModelSpec {
 public:
  explicit ModelSpec(std::vector<ParameterGroup> groups);

  const std::vector<ParameterGroup>& groups() const { return groups_; }
  size_t num_groups() const { return groups_.size(); }
  size_t total_parameters() const;
  std::vector<size_t> dims() const;

 private:
  std::vector<ParameterGroup> groups_;
};

struct AccountantConfig {
  double target_epsilon = 1.0;
  double delta = 1e-5;
  uint64_t steps = 1;
  double clip_value = 1.0;
  // Accepted for parity with the training setup; the per-group epsilon
  // formulas do not use it.
  uint64_t batch_size = 1;

  // Throws ValidationError naming the first violated bound.
  void Validate() const;
};

struct GroupEpsilon {
  // Whole gradient treated as d singleton blocks.
  double eps1 = 0.0;
  // Block-size dependent bound.
  double eps2 = 0.0;
  double eps = 0.0;
  // An exponent exceeded kMaxExponent and the value was set to +inf.
  bool saturated = false;
};

inline constexpr double kMaxExponent = 700.0;

// eps1 = 2 ln(1 + d (e^{2C/sqrt d} - 1)),
// eps2 = 2 ln(1 + (b/d)(e^{2C sqrt(b/d)} - 1)), eps = min(eps1, eps2).
GroupEpsilon EpsilonGroup(size_t dim, size_t block_size, double clip_value);

// Advanced-composition style whole-run total for a per-step epsilon:
// sqrt(2 T ln(1/delta)) e + T e (e^e - 1).
double TotalPrivacy(double epsilon_per_step, uint64_t steps, double delta);

// Largest block size in [1, d-1] whose group epsilon is <= target, by
// binary search. Falls back to 1 when nothing qualifies; d = 1 gives 1.
size_t LargestBlockForTarget(size_t dim, double clip_value, double target);

struct BlockPlan {
  std::vector<size_t> block_sizes;
  std::vector<double> per_group_epsilon;
  double epsilon_per_step = 0.0;
  double epsilon_total = 0.0;
  double target_gap = 0.0;
  std::vector<std::string> warnings;

  bool ExceedsTarget(double target_epsilon) const {
    return epsilon_total > target_epsilon;
  }
};

// Accounts a given block-size assignment (one per group).
BlockPlan EvaluateBlockSizes(const ModelSpec& model,
                             const AccountantConfig& config,
                             const std::vector<size_t>& block_sizes);

inline constexpr double kOuterSearchTolerance = 1e-6;

// Outer bisection on the shared per-group target over
// [0, target_epsilon / steps]; each probe picks per-group block sizes with
// LargestBlockForTarget and is scored by |epsilon_total - target_epsilon|.
// The best probe seen wins; ties keep the earliest.
BlockPlan OptimizeBlockSizes(const ModelSpec& model,
                             const AccountantConfig& config);

}  // namespace dpblogs

#endif  // DPBLOGS_ACCOUNTANT_H_
