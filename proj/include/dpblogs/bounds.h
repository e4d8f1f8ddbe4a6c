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

// Closed-form utility, variance, information and optimal-parameter bounds,
// plus small-instance diagnostics that hold them against exact enumeration.

#ifndef DPBLOGS_BOUNDS_H_
#define DPBLOGS_BOUNDS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpblogs/accountant.h"
#include "dpblogs/gradient.h"
#include "json.hpp"

namespace dpblogs {

using Json = nlohmann::ordered_json;

// Uniform envelope for every evaluated bound and diagnostic.
struct BoundReport {
  std::string name;
  double value = 0.0;
  Json inputs = Json::object();
  std::optional<std::string> diagnostic;
  // Structured detail rows (diagnostics only).
  Json details = Json::array();
  std::vector<std::string> warnings;
};

struct ConvergenceInputs {
  double r0 = 0.0;
  double grad_bound = 1.0;
  double sigma = 0.0;
  double smoothness = 1.0;
  double learning_rate = 0.1;
  uint64_t steps = 1;
  double delta = 0.1;
};

// ((b - 1) / b) var_g.
double VarianceBound(size_t block_size, double var_g);

// sum_i (d_i - b_i) (2C)^2 / b_i.
double UtilityBound(std::span<const size_t> dims,
                    std::span<const size_t> block_sizes, double clip_value);

// sum_i ln(d_i / b_i), in nats.
double MiBound(std::span<const size_t> dims,
               std::span<const size_t> block_sizes);

struct ReconstructionBounds {
  // 1/d!, or 0 when only the log value is representable.
  double guess_prob = 1.0;
  double log_guess_prob = 0.0;
  // True when d > 170 and guess_prob underflows; read log_guess_prob.
  bool log_space = false;
  // (1 - 1/d!) min_gap_sq.
  double expected_error_lb_gap = 0.0;
  // (d - b) e^{-2 mi / d} var_g.
  double expected_error_lb_rd = 0.0;
};

ReconstructionBounds EvaluateReconstructionBounds(size_t dim,
                                                  size_t block_size,
                                                  double var_g,
                                                  double min_gap_sq,
                                                  double mi);

// (d/2) ln(2 delta2g^2 d / U). May be negative, meaning the utility target
// exceeds the worst case.
double OptimalEpsilonForUtility(size_t dim, double sensitivity, double utility);

// min{d, max{1, floor(d e^{-2 eps / (sqrt(2T ln(1/delta)) d)})}}.
size_t OptimalBlockSize(size_t dim, double epsilon, uint64_t steps,
                        double delta);

struct AdaptiveParams {
  size_t block_size = 1;
  double clip_value = 0.0;
};

// beta* = min{d, max{1, floor(d e^{-2 eps_t / d})}}, C* = sqrt(U / (2d)).
AdaptiveParams OptimalAdaptiveParams(size_t dim, double epsilon_t,
                                     double utility);

// sqrt(R0^2 / (G^2 T)).
double OptimalLearningRate(double r0, double grad_bound, uint64_t steps);

// R0^2/(2 eta T) + eta L (G^2 + sigma^2)/2 + (G + sigma) sqrt(2 ln(2/delta)/T).
double ConvergenceBound(const ConvergenceInputs& in);

// sigma for the convergence bound: sqrt(sum_i (b_i - 1) G_i^2 / b_i).
double ShuffleNoiseSigma(std::span<const size_t> block_sizes,
                         std::span<const double> grad_bounds);

// True iff every pair (i, j) with b_j >= 2 has
// |b_i/b_j - d_i/d_j| <= rel_tol (d_i/d_j) + 1/b_j.
bool CheckBlockRatio(std::span<const size_t> block_sizes,
                     std::span<const size_t> dims, double rel_tol);
bool CheckBlockRatio(const BlockPlan& plan, std::span<const size_t> dims,
                     double rel_tol);

// One (gradient, block size) pair of the small-instance corpus.
struct ShuffleInstance {
  GradientVector gradient;
  size_t block_size = 1;
};

// Deterministic corpus: for every d in [1, max_dim] and every divisor b of
// d, `per_shape` gradients with components drawn uniformly from [-1, 1].
std::vector<ShuffleInstance> SmallInstanceCorpus(size_t max_dim,
                                                 size_t per_shape,
                                                 uint64_t seed);

// Compares ExactShuffleVariance with VarianceBound per component and lists
// every component whose exact variance exceeds the bound. value = number of
// violating instances.
BoundReport VarianceBoundDiagnostic(std::span<const ShuffleInstance> corpus);

// Sum of exact per-component variances against UtilityBound([d], [b], C)
// with C = ||g||_2 so clipping is inactive. value = number of instances
// where the bound fails.
BoundReport UtilityBoundDiagnostic(std::span<const ShuffleInstance> corpus);

// Exact mutual information I(X; shuffle(X)) for X uniform over the two
// gradient vectors {g, g'} of each instance, with g' = g except its first
// component is shifted by one. Reports ln(d/b) and ln(m!) alongside and
// checks I <= ln(m!) + 1e-9. value = number of instances failing that check.
BoundReport MiBoundDiagnostic(std::span<const ShuffleInstance> corpus);

// Plug-in mutual information in nats between a prior over inputs and the
// exact shuffle channel. Inputs must share a dimension; prior sums to one.
double ShuffleMutualInformation(std::span<const GradientVector> inputs,
                                std::span<const double> prior,
                                size_t block_size);

}  // namespace dpblogs

#endif  // DPBLOGS_BOUNDS_H_
