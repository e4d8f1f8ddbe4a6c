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

#include "dpblogs/gradient.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "dpblogs/errors.h"

namespace dpblogs {
namespace {

void ValidateComponents(std::span<const double> components) {
  for (size_t i = 0; i < components.size(); ++i) {
    if (!std::isfinite(components[i])) {
      throw ValidationError("gradient component " + std::to_string(i) +
                            " is not finite; all components must be finite");
    }
  }
}

void ValidateShape(const std::vector<size_t>& shape, size_t count) {
  size_t product = 1;
  for (size_t extent : shape) {
    if (extent == 0) {
      throw ValidationError("gradient shape extents must be positive");
    }
    product *= extent;
  }
  if (product != count) {
    throw ValidationError("gradient shape product " + std::to_string(product) +
                          " does not match component count " +
                          std::to_string(count));
  }
}

// Sums in ascending order so that any permutation of the same multiset
// yields the same bits. Clip relies on this to commute exactly with
// permutations.
double OrderInvariantSum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum;
}

}  // namespace

GradientVector::GradientVector(std::vector<double> components)
    : components_(std::move(components)), shape_{components_.size()} {
  ValidateComponents(components_);
  if (components_.empty()) shape_.clear();
}

GradientVector::GradientVector(std::vector<double> components,
                               std::vector<size_t> shape)
    : components_(std::move(components)), shape_(std::move(shape)) {
  ValidateComponents(components_);
  if (!(components_.empty() && shape_.empty())) {
    ValidateShape(shape_, components_.size());
  }
}

GradientVector GradientVector::WithComponents(
    std::vector<double> components) const {
  return GradientVector(std::move(components), shape_);
}

double L2Norm(std::span<const double> values) {
  std::vector<double> squares(values.size());
  std::transform(values.begin(), values.end(), squares.begin(),
                 [](double v) { return v * v; });
  return std::sqrt(OrderInvariantSum(std::move(squares)));
}

double L1Distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ValidationError("L1 distance needs equal-length vectors");
  }
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum;
}

double L2Distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ValidationError("L2 distance needs equal-length vectors");
  }
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

GradientVector Clip(const GradientVector& g, double clip_value) {
  if (!(clip_value > 0.0) || std::isnan(clip_value)) {
    throw ValidationError("clip value must be > 0");
  }
  const double norm = L2Norm(g.components());
  if (norm <= clip_value) return g;
  const double factor = clip_value / norm;
  std::vector<double> scaled(g.components().begin(), g.components().end());
  for (double& v : scaled) v *= factor;
  return g.WithComponents(std::move(scaled));
}

GradientStats Stats(const GradientVector& g) {
  if (g.size() == 0) {
    throw ValidationError("stats require a gradient with d >= 1");
  }
  const auto values = g.components();
  const double d = static_cast<double>(values.size());
  GradientStats out;
  out.l2_norm = L2Norm(values);
  out.mean = OrderInvariantSum({values.begin(), values.end()}) / d;
  std::vector<double> deviations(values.size());
  std::transform(values.begin(), values.end(), deviations.begin(),
                 [&](double v) { return (v - out.mean) * (v - out.mean); });
  out.variance = OrderInvariantSum(std::move(deviations)) / d;
  return out;
}

}  // namespace dpblogs
