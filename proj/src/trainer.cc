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

#include "dpblogs/trainer.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "dpblogs/errors.h"
#include "dpblogs/gradient.h"
#include "dpblogs/mechanism.h"

namespace dpblogs {
namespace {

constexpr size_t kLogisticSamples = 200;
constexpr double kLogisticReg = 0.1;
constexpr double kStarTolerance = 1e-13;
constexpr int kStarMaxIterations = 200000;

// Stream tags for DeriveSeed.
constexpr uint64_t kProblemStream = 1;
constexpr uint64_t kGradientNoiseStream = 2;
constexpr uint64_t kGaussianStream = 3;
constexpr uint64_t kShuffleStream = 4;

double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

// log(1 + e^z) without overflow.
double Softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double StandardNormal(Rng& rng) {
  const double u1 = 1.0 - rng.UniformUnit();
  const double u2 = rng.UniformUnit();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double Distance(std::span<const double> a, std::span<const double> b) {
  return L2Distance(a, b);
}

}  // namespace

Problem Problem::Quadratic(size_t dim, double noise_std, uint64_t seed) {
  if (dim < 1) throw ValidationError("problem dimension must be >= 1");
  if (!(noise_std >= 0.0)) throw ValidationError("noise std must be >= 0");
  Problem p;
  p.kind_ = ProblemKind::kQuadratic;
  p.dim_ = dim;
  p.noise_std_ = noise_std;
  p.seed_ = seed;
  Rng rng(DeriveSeed(seed, kProblemStream, 0));
  p.theta_star_.resize(dim);
  for (double& v : p.theta_star_) v = 4.0 * rng.UniformUnit() - 2.0;
  p.optimal_loss_ = 0.0;
  p.smoothness_ = 1.0;
  return p;
}

Problem Problem::SymmetricQuadratic(size_t dim, double value,
                                    double noise_std, uint64_t seed) {
  Problem p = Quadratic(dim, noise_std, seed);
  std::fill(p.theta_star_.begin(), p.theta_star_.end(), value);
  p.symmetric_ = true;
  return p;
}

Problem Problem::Logistic(size_t dim, double noise_std, uint64_t seed) {
  if (dim < 1) throw ValidationError("problem dimension must be >= 1");
  if (!(noise_std >= 0.0)) throw ValidationError("noise std must be >= 0");
  Problem p;
  p.kind_ = ProblemKind::kLogistic;
  p.dim_ = dim;
  p.noise_std_ = noise_std;
  p.seed_ = seed;
  p.l2_reg_ = kLogisticReg;
  p.smoothness_ = 0.25 + kLogisticReg;

  Rng rng(DeriveSeed(seed, kProblemStream, 0));
  std::vector<double> w_true(dim);
  for (double& v : w_true) v = 4.0 * rng.UniformUnit() - 2.0;
  p.features_.reserve(kLogisticSamples);
  while (p.features_.size() < kLogisticSamples) {
    std::vector<double> x(dim);
    for (double& v : x) v = 2.0 * rng.UniformUnit() - 1.0;
    const double norm = L2Norm(x);
    if (norm < 1e-6) continue;
    for (double& v : x) v /= norm;
    const double label =
        rng.UniformUnit() < Sigmoid(Dot(x, w_true)) ? 1.0 : -1.0;
    p.features_.push_back(std::move(x));
    p.labels_.push_back(label);
  }

  // Strongly convex, so plain gradient descent at 1/L converges linearly.
  std::vector<double> theta(dim, 0.0);
  const double step = 1.0 / p.smoothness_;
  for (int it = 0; it < kStarMaxIterations; ++it) {
    const std::vector<double> g = p.Gradient(theta);
    if (L2Norm(g) < kStarTolerance) break;
    for (size_t i = 0; i < dim; ++i) theta[i] -= step * g[i];
  }
  p.theta_star_ = std::move(theta);
  p.optimal_loss_ = p.Loss(p.theta_star_);
  return p;
}

Problem MakeProblem(ProblemKind kind, size_t dim, double noise_std,
                    uint64_t seed) {
  return kind == ProblemKind::kQuadratic
             ? Problem::Quadratic(dim, noise_std, seed)
             : Problem::Logistic(dim, noise_std, seed);
}

double Problem::Loss(std::span<const double> theta) const {
  if (kind_ == ProblemKind::kQuadratic) {
    const double dist = Distance(theta, theta_star_);
    return 0.5 * dist * dist;
  }
  double total = 0.0;
  for (size_t n = 0; n < features_.size(); ++n) {
    total += Softplus(-labels_[n] * Dot(features_[n], theta));
  }
  return total / static_cast<double>(features_.size()) +
         0.5 * l2_reg_ * Dot(theta, theta);
}

std::vector<double> Problem::Gradient(std::span<const double> theta) const {
  std::vector<double> g(dim_, 0.0);
  if (kind_ == ProblemKind::kQuadratic) {
    for (size_t i = 0; i < dim_; ++i) g[i] = theta[i] - theta_star_[i];
    return g;
  }
  const double inv_n = 1.0 / static_cast<double>(features_.size());
  for (size_t n = 0; n < features_.size(); ++n) {
    const double margin = labels_[n] * Dot(features_[n], theta);
    const double weight = -labels_[n] * Sigmoid(-margin) * inv_n;
    for (size_t i = 0; i < dim_; ++i) g[i] += weight * features_[n][i];
  }
  for (size_t i = 0; i < dim_; ++i) g[i] += l2_reg_ * theta[i];
  return g;
}

std::vector<double> Problem::StochasticGradient(std::span<const double> theta,
                                                Rng& rng) const {
  std::vector<double> g = Gradient(theta);
  if (noise_std_ == 0.0) return g;
  const double half_width = noise_std_ * std::sqrt(3.0);
  for (double& v : g) v += half_width * (2.0 * rng.UniformUnit() - 1.0);
  return g;
}

std::vector<size_t> SplitGroups(size_t dim, size_t num_groups) {
  if (num_groups < 1 || num_groups > dim) {
    throw ValidationError("number of groups must lie in [1, dim]");
  }
  std::vector<size_t> sizes(num_groups, dim / num_groups);
  for (size_t i = 0; i < dim % num_groups; ++i) ++sizes[i];
  return sizes;
}

Trajectory Run(const Problem& problem, const TrainingConfig& cfg) {
  const size_t dim = problem.dim();
  const bool finite_clip = std::isfinite(cfg.clip_value);
  if (!(cfg.clip_value > 0.0)) {
    throw ValidationError("clip value must be > 0");
  }
  if (cfg.mechanism != PrivacyMechanism::kNone && !finite_clip) {
    throw ValidationError(
        "blogs and gaussian mechanisms need a finite clip value");
  }
  if (!(cfg.noise_multiplier >= 0.0)) {
    throw ValidationError("noise multiplier must be >= 0");
  }

  Trajectory traj;
  traj.symmetric_problem = problem.symmetric();
  traj.optimal_loss = problem.optimal_loss();
  traj.group_dims = SplitGroups(dim, cfg.num_groups);

  std::vector<double> theta(dim, 0.0);
  const auto& star = problem.theta_star();
  if (cfg.learning_rate.has_value()) {
    if (!(*cfg.learning_rate > 0.0)) {
      throw ValidationError("learning rate must be > 0");
    }
    traj.learning_rate = *cfg.learning_rate;
  } else {
    traj.learning_rate = OptimalLearningRate(
        Distance(theta, star), cfg.grad_bound, std::max<uint64_t>(cfg.steps, 1));
  }

  std::optional<Generator> generator;
  if (cfg.mechanism == PrivacyMechanism::kBlogs && cfg.steps > 0) {
    std::vector<ParameterGroup> groups;
    for (size_t i = 0; i < traj.group_dims.size(); ++i) {
      groups.push_back({"g" + std::to_string(i), traj.group_dims[i]});
    }
    const AccountantConfig acct{cfg.target_epsilon, cfg.delta, cfg.steps,
                                cfg.clip_value, 1};
    generator = cfg.block_sizes.empty()
                    ? Generator::Create(ModelSpec(std::move(groups)), acct)
                    : Generator::WithBlockSizes(ModelSpec(std::move(groups)),
                                                acct, cfg.block_sizes);
    traj.block_sizes = generator->plan().block_sizes;
  }

  Rng noise_rng(DeriveSeed(cfg.seed, kGradientNoiseStream, 0));
  Rng gaussian_rng(DeriveSeed(cfg.seed, kGaussianStream, 0));
  const uint64_t shuffle_seed = DeriveSeed(cfg.seed, kShuffleStream, 0);

  const auto record = [&](uint64_t step, double eps) {
    const double loss = problem.Loss(theta);
    if (!std::isfinite(loss) || loss > kDivergenceLoss) {
      throw NumericDomainError("training diverged at step " +
                               std::to_string(step) + ": loss exceeds 1e12");
    }
    traj.records.push_back({step, loss, Distance(theta, star), eps});
    traj.iterates.push_back(theta);
  };
  record(0, 0.0);

  for (uint64_t t = 0; t < cfg.steps; ++t) {
    std::vector<double> g = problem.StochasticGradient(theta, noise_rng);
    double eps = 0.0;
    switch (cfg.mechanism) {
      case PrivacyMechanism::kNone:
        if (finite_clip) {
          const GradientVector clipped = Clip(GradientVector(g), cfg.clip_value);
          g.assign(clipped.components().begin(), clipped.components().end());
        }
        break;
      case PrivacyMechanism::kGaussian: {
        const GradientVector clipped = Clip(GradientVector(g), cfg.clip_value);
        g.assign(clipped.components().begin(), clipped.components().end());
        const double scale = cfg.noise_multiplier * cfg.clip_value;
        for (double& v : g) v += scale * StandardNormal(gaussian_rng);
        break;
      }
      case PrivacyMechanism::kBlogs: {
        std::vector<GradientVector> parts;
        size_t offset = 0;
        for (size_t d : traj.group_dims) {
          parts.emplace_back(std::vector<double>(g.begin() + offset,
                                                 g.begin() + offset + d));
          offset += d;
        }
        const PrivatizedGradients out = generator->Generate(parts, shuffle_seed);
        offset = 0;
        for (const auto& part : out.grads) {
          std::copy(part.components().begin(), part.components().end(),
                    g.begin() + offset);
          offset += part.size();
        }
        eps = out.epsilon_spent;
        break;
      }
    }
    for (size_t i = 0; i < dim; ++i) theta[i] -= traj.learning_rate * g[i];
    record(t + 1, eps);
  }

  traj.averaged_iterate.assign(dim, 0.0);
  if (cfg.steps == 0) {
    traj.averaged_iterate = traj.iterates.front();
  } else {
    for (size_t t = 1; t < traj.iterates.size(); ++t) {
      for (size_t i = 0; i < dim; ++i) {
        traj.averaged_iterate[i] += traj.iterates[t][i];
      }
    }
    for (double& v : traj.averaged_iterate) {
      v /= static_cast<double>(cfg.steps);
    }
  }
  traj.averaged_loss = problem.Loss(traj.averaged_iterate);
  return traj;
}

ConvergenceInputs ConvergenceInputsFor(const Problem& problem,
                                       const TrainingConfig& cfg,
                                       const Trajectory& traj) {
  ConvergenceInputs in;
  in.r0 = traj.records.front().distance;
  in.grad_bound = cfg.grad_bound;
  switch (cfg.mechanism) {
    case PrivacyMechanism::kNone:
      in.sigma = 0.0;
      break;
    case PrivacyMechanism::kBlogs: {
      const std::vector<double> group_bounds(traj.block_sizes.size(),
                                             cfg.grad_bound);
      in.sigma = ShuffleNoiseSigma(traj.block_sizes, group_bounds);
      break;
    }
    case PrivacyMechanism::kGaussian:
      in.sigma = cfg.noise_multiplier * cfg.clip_value *
                 std::sqrt(static_cast<double>(problem.dim()));
      break;
  }
  in.smoothness = problem.smoothness();
  in.learning_rate = traj.learning_rate;
  in.steps = cfg.steps;
  in.delta = cfg.bound_delta;
  return in;
}

BoundReport CompareToBound(const Trajectory& traj,
                           const ConvergenceInputs& inputs) {
  const double bound = ConvergenceBound(inputs);
  const double observed = traj.averaged_loss - traj.optimal_loss;
  const bool within = observed <= bound;
  BoundReport report;
  report.name = "convergence_bound";
  report.value = bound;
  report.inputs = {{"R0", inputs.r0},
                   {"G", inputs.grad_bound},
                   {"sigma", inputs.sigma},
                   {"L", inputs.smoothness},
                   {"eta", inputs.learning_rate},
                   {"T", inputs.steps},
                   {"delta", inputs.delta}};
  report.details.push_back({{"observed_suboptimality", observed},
                            {"bound", bound},
                            {"within_bound", within},
                            {"asserted", traj.symmetric_problem}});
  report.diagnostic = std::string("observed f(theta_bar) - f(theta*) ") +
                      (within ? "<=" : ">") + " bound" +
                      (traj.symmetric_problem ? " (asserted)" : " (measured)");
  if (traj.symmetric_problem && !within) {
    report.warnings.push_back(
        "asserted bound violated on a symmetric problem");
  }
  return report;
}

}  // namespace dpblogs
