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

#ifndef DPBLOGS_GRADIENT_H_
#define DPBLOGS_GRADIENT_H_

#include <cstddef>
#include <span>
#include <vector>

namespace dpblogs {

// A flat, finite gradient with the shape it was flattened from.
//
// Construction validates that every component is finite and that the shape
// product equals the component count, so any GradientVector in hand is
// well-formed.
class GradientVector {
 public:
  // A rank-1 gradient with shape {components.size()}.
  explicit GradientVector(std::vector<double> components);
  GradientVector(std::vector<double> components, std::vector<size_t> shape);

  std::span<const double> components() const { return components_; }
  const std::vector<size_t>& shape() const { return shape_; }
  size_t size() const { return components_.size(); }
  double operator[](size_t i) const { return components_[i]; }

  // Same shape, new components. Validates like the constructor.
  GradientVector WithComponents(std::vector<double> components) const;

  friend bool operator==(const GradientVector&,
                         const GradientVector&) = default;

 private:
  std::vector<double> components_;
  std::vector<size_t> shape_;
};

struct GradientStats {
  double l2_norm = 0.0;
  double mean = 0.0;
  // Population variance (divisor d).
  double variance = 0.0;
};

double L2Norm(std::span<const double> values);
double L1Distance(std::span<const double> a, std::span<const double> b);
double L2Distance(std::span<const double> a, std::span<const double> b);

// Scales g by min(1, clip_value / ||g||_2). Gradients already inside the
// ball are returned unchanged, bit for bit.
GradientVector Clip(const GradientVector& g, double clip_value);

// Norm, mean and population variance. Rejects empty gradients.
GradientStats Stats(const GradientVector& g);

}  // namespace dpblogs

#endif  // DPBLOGS_GRADIENT_H_
