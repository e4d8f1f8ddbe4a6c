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

#include "dpblogs/accountant.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <utility>

#include "dpblogs/errors.h"

namespace dpblogs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 2 ln(1 + scale (e^{exponent} - 1)), saturating to +inf.
double TwoLogOnePlusScaledExpm1(double scale, double exponent,
                                bool& saturated) {
  if (exponent > kMaxExponent) {
    saturated = true;
    return kInf;
  }
  return 2.0 * std::log1p(scale * std::expm1(exponent));
}

}  // namespace

ModelSpec::ModelSpec(std::vector<ParameterGroup> groups)
    : groups_(std::move(groups)) {
  if (groups_.empty()) {
    throw ValidationError("model spec needs at least one parameter group");
  }
  std::set<std::string> seen;
  for (const auto& group : groups_) {
    if (group.dim < 1) {
      throw ValidationError("parameter group '" + group.name +
                            "' must have dim >= 1");
    }
    if (!seen.insert(group.name).second) {
      throw ValidationError("parameter group name '" + group.name +
                            "' is not unique");
    }
  }
}

size_t ModelSpec::total_parameters() const {
  size_t total = 0;
  for (const auto& group : groups_) total += group.dim;
  return total;
}

std::vector<size_t> ModelSpec::dims() const {
  std::vector<size_t> out;
  out.reserve(groups_.size());
  for (const auto& group : groups_) out.push_back(group.dim);
  return out;
}

void AccountantConfig::Validate() const {
  if (!(target_epsilon > 0.0) || !std::isfinite(target_epsilon)) {
    throw ValidationError("target epsilon must be a finite value > 0");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ValidationError("delta must lie in (0, 1)");
  }
  if (steps < 1) throw ValidationError("steps must be >= 1");
  if (!(clip_value > 0.0) || !std::isfinite(clip_value)) {
    throw ValidationError("clip value must be a finite value > 0");
  }
  if (batch_size < 1) throw ValidationError("batch size must be >= 1");
}

GroupEpsilon EpsilonGroup(size_t dim, size_t block_size, double clip_value) {
  if (dim < 1) throw ValidationError("group dimension d must be >= 1");
  if (block_size < 1 || block_size > dim) {
    throw ValidationError("block size must satisfy 1 <= block size <= d");
  }
  if (!(clip_value > 0.0) || !std::isfinite(clip_value)) {
    throw ValidationError("clip value must be a finite value > 0");
  }
  const double d = static_cast<double>(dim);
  const double ratio = static_cast<double>(block_size) / d;
  GroupEpsilon out;
  out.eps1 = TwoLogOnePlusScaledExpm1(d, 2.0 * clip_value / std::sqrt(d),
                                      out.saturated);
  out.eps2 = TwoLogOnePlusScaledExpm1(
      ratio, 2.0 * clip_value * std::sqrt(ratio), out.saturated);
  out.eps = std::min(out.eps1, out.eps2);
  return out;
}

double TotalPrivacy(double epsilon_per_step, uint64_t steps, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ValidationError("delta must lie in (0, 1)");
  }
  if (!(epsilon_per_step >= 0.0)) {
    throw ValidationError("per-step epsilon must be >= 0");
  }
  if (steps < 1) throw ValidationError("steps must be >= 1");
  if (epsilon_per_step > kMaxExponent) return kInf;
  const double t = static_cast<double>(steps);
  return std::sqrt(2.0 * t * -std::log(delta)) * epsilon_per_step +
         t * epsilon_per_step * std::expm1(epsilon_per_step);
}

size_t LargestBlockForTarget(size_t dim, double clip_value, double target) {
  if (dim < 1) throw ValidationError("group dimension d must be >= 1");
  if (std::isnan(target)) throw ValidationError("target must not be NaN");
  size_t low = 1;
  size_t high = dim - 1;
  size_t best = low;
  while (low <= high) {
    const size_t mid = low + (high - low) / 2;
    if (EpsilonGroup(dim, mid, clip_value).eps <= target) {
      best = mid;
      low = mid + 1;
    } else {
      high = mid - 1;
    }
  }
  return best;
}

BlockPlan EvaluateBlockSizes(const ModelSpec& model,
                             const AccountantConfig& config,
                             const std::vector<size_t>& block_sizes) {
  config.Validate();
  if (block_sizes.size() != model.num_groups()) {
    throw ValidationError("need exactly one block size per parameter group");
  }
  BlockPlan plan;
  plan.block_sizes = block_sizes;
  bool saturated = false;
  for (size_t i = 0; i < block_sizes.size(); ++i) {
    const auto& group = model.groups()[i];
    const GroupEpsilon e =
        EpsilonGroup(group.dim, block_sizes[i], config.clip_value);
    saturated = saturated || e.saturated;
    plan.per_group_epsilon.push_back(e.eps);
    if (group.dim == 1) {
      plan.warnings.push_back(
          "group '" + group.name +
          "' has d = 1: shuffling a scalar is the identity, yet it still "
          "contributes its full epsilon");
    }
  }
  plan.epsilon_per_step = std::accumulate(plan.per_group_epsilon.begin(),
                                          plan.per_group_epsilon.end(), 0.0);
  plan.epsilon_total =
      TotalPrivacy(plan.epsilon_per_step, config.steps, config.delta);
  if (saturated || !std::isfinite(plan.epsilon_total)) {
    plan.warnings.push_back(
        "epsilon saturated to +inf: an exponent argument exceeded 700");
  }
  plan.target_gap = std::abs(plan.epsilon_total - config.target_epsilon);
  return plan;
}

BlockPlan OptimizeBlockSizes(const ModelSpec& model,
                             const AccountantConfig& config) {
  config.Validate();
  const std::vector<size_t> dims = model.dims();
  const auto probe = [&](double per_group_target) {
    std::vector<size_t> sizes;
    sizes.reserve(dims.size());
    for (size_t d : dims) {
      sizes.push_back(
          LargestBlockForTarget(d, config.clip_value, per_group_target));
    }
    return sizes;
  };

  double low = 0.0;
  double high = config.target_epsilon / static_cast<double>(config.steps);
  std::vector<size_t> best_sizes;
  double best_gap = kInf;
  while (high - low > kOuterSearchTolerance) {
    const double mid = (low + high) / 2.0;
    std::vector<size_t> sizes = probe(mid);
    const BlockPlan candidate = EvaluateBlockSizes(model, config, sizes);
    if (candidate.target_gap < best_gap) {
      best_gap = candidate.target_gap;
      best_sizes = std::move(sizes);
    }
    if (candidate.epsilon_total > config.target_epsilon) {
      high = mid;
    } else {
      low = mid;
    }
  }
  // A search interval narrower than the tolerance admits no probe; take its
  // midpoint so a plan always exists.
  if (best_sizes.empty()) best_sizes = probe((low + high) / 2.0);
  return EvaluateBlockSizes(model, config, best_sizes);
}

}  // namespace dpblogs
