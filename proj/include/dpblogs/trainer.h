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

// Deterministic toy SGD on synthetic convex problems, with the gradient
// optionally privatized by the block-shuffle generator or by Gaussian noise.

#ifndef DPBLOGS_TRAINER_H_
#define DPBLOGS_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "dpblogs/bounds.h"
#include "dpblogs/random.h"

namespace dpblogs {

enum class ProblemKind { kQuadratic, kLogistic };

class Problem {
 public:
  // f(theta) = 1/2 ||theta - theta*||^2 with theta* uniform in [-2, 2]^dim.
  static Problem Quadratic(size_t dim, double noise_std, uint64_t seed);
  // Quadratic with theta* = value * 1, so every gradient from theta0 = 0 is
  // a constant vector.
  static Problem SymmetricQuadratic(size_t dim, double value,
                                    double noise_std, uint64_t seed);
  // L2-regularized logistic regression on 200 unit-norm samples. theta* is
  // found by full-batch gradient descent at construction.
  static Problem Logistic(size_t dim, double noise_std, uint64_t seed);

  ProblemKind kind() const { return kind_; }
  size_t dim() const { return dim_; }
  bool symmetric() const { return symmetric_; }
  double noise_std() const { return noise_std_; }
  uint64_t seed() const { return seed_; }
  const std::vector<double>& theta_star() const { return theta_star_; }
  double optimal_loss() const { return optimal_loss_; }
  // Gradient Lipschitz constant.
  double smoothness() const { return smoothness_; }

  double Loss(std::span<const double> theta) const;
  std::vector<double> Gradient(std::span<const double> theta) const;
  // True gradient plus zero-mean uniform noise with per-coordinate standard
  // deviation noise_std.
  std::vector<double> StochasticGradient(std::span<const double> theta,
                                         Rng& rng) const;

 private:
  Problem() = default;

  ProblemKind kind_ = ProblemKind::kQuadratic;
  size_t dim_ = 0;
  bool symmetric_ = false;
  double noise_std_ = 0.0;
  uint64_t seed_ = 0;
  std::vector<double> theta_star_;
  double optimal_loss_ = 0.0;
  double smoothness_ = 1.0;
  // Logistic data; rows are unit-norm features.
  std::vector<std::vector<double>> features_;
  std::vector<double> labels_;
  double l2_reg_ = 0.0;
};

// Factory keyed by kind.
Problem MakeProblem(ProblemKind kind, size_t dim, double noise_std,
                    uint64_t seed);

enum class PrivacyMechanism { kNone, kBlogs, kGaussian };

struct TrainingConfig {
  PrivacyMechanism mechanism = PrivacyMechanism::kNone;
  uint64_t steps = 100;
  // nullopt selects the optimal constant rate sqrt(R0^2 / (G^2 T)).
  std::optional<double> learning_rate = 0.1;
  // Infinite disables clipping for kNone; kBlogs and kGaussian need a
  // finite value.
  double clip_value = std::numeric_limits<double>::infinity();
  // One per group for kBlogs; empty runs the accountant's optimizer.
  std::vector<size_t> block_sizes;
  // The parameter vector is split into this many contiguous groups.
  size_t num_groups = 1;
  double noise_multiplier = 0.0;
  double grad_bound = 1.0;
  uint64_t seed = 0;
  // Accountant inputs for kBlogs.
  double target_epsilon = 1.0;
  double delta = 1e-5;
  // Confidence parameter of the convergence bound.
  double bound_delta = 0.1;
};

inline constexpr double kDivergenceLoss = 1e12;

struct TrajectoryRecord {
  uint64_t step = 0;
  double loss = 0.0;
  double distance = 0.0;
  double epsilon_spent = 0.0;
};

struct Trajectory {
  // T + 1 records, step 0 is the initialization.
  std::vector<TrajectoryRecord> records;
  // theta_0 .. theta_T.
  std::vector<std::vector<double>> iterates;
  // (1/T) sum_{t=1..T} theta_t; theta_0 when T = 0.
  std::vector<double> averaged_iterate;
  double averaged_loss = 0.0;
  double optimal_loss = 0.0;
  double learning_rate = 0.0;
  std::vector<size_t> block_sizes;
  std::vector<size_t> group_dims;
  bool symmetric_problem = false;
};

// Contiguous near-equal split of `dim` into `num_groups` group sizes.
std::vector<size_t> SplitGroups(size_t dim, size_t num_groups);

// Runs T steps from theta_0 = 0. Throws NumericDomainError if the loss
// exceeds kDivergenceLoss or turns non-finite.
Trajectory Run(const Problem& problem, const TrainingConfig& cfg);

// Convergence-bound inputs matching a finished run: R0 = ||theta_0 -
// theta*||, sigma from the block sizes (kBlogs), from the Gaussian noise
// norm (kGaussian), or 0.
ConvergenceInputs ConvergenceInputsFor(const Problem& problem,
                                       const TrainingConfig& cfg,
                                       const Trajectory& traj);

// Observed f(theta_bar_T) - f(theta*) against ConvergenceBound(inputs).
// details carry both numbers, the comparison, and whether the comparison is
// an assertion (symmetric problems) or only a measurement.
BoundReport CompareToBound(const Trajectory& traj,
                           const ConvergenceInputs& inputs);

}  // namespace dpblogs

#endif  // DPBLOGS_TRAINER_H_
