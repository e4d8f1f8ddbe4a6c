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

#include "dpblogs/bounds.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "dpblogs/errors.h"
#include "dpblogs/random.h"
#include "dpblogs/shuffle.h"

namespace dpblogs {
namespace {

constexpr double kExactFactorialLimit = 170;

void RequireAligned(std::span<const size_t> dims,
                    std::span<const size_t> block_sizes) {
  if (dims.size() != block_sizes.size()) {
    throw ValidationError("dims and block sizes must be aligned (" +
                          std::to_string(dims.size()) + " vs " +
                          std::to_string(block_sizes.size()) + ")");
  }
  for (size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 1 || block_sizes[i] < 1 || block_sizes[i] > dims[i]) {
      throw ValidationError("group " + std::to_string(i) +
                            " needs 1 <= block size <= d");
    }
  }
}

void RequirePositive(double value, const char* name) {
  if (!(value > 0.0)) {
    throw ValidationError(std::string(name) + " must be > 0");
  }
}

size_t ClampedFloor(size_t dim, double raw) {
  if (!(raw >= 1.0)) return 1;
  const double floored = std::floor(raw);
  if (floored >= static_cast<double>(dim)) return dim;
  return static_cast<size_t>(floored);
}

Json ComponentsJson(const GradientVector& g) {
  return Json(std::vector<double>(g.components().begin(),
                                  g.components().end()));
}

}  // namespace

double VarianceBound(size_t block_size, double var_g) {
  if (block_size < 1) throw ValidationError("block size must be >= 1");
  if (!(var_g >= 0.0)) throw ValidationError("variance must be >= 0");
  const double b = static_cast<double>(block_size);
  return (b - 1.0) / b * var_g;
}

double UtilityBound(std::span<const size_t> dims,
                    std::span<const size_t> block_sizes, double clip_value) {
  RequireAligned(dims, block_sizes);
  RequirePositive(clip_value, "clip value");
  const double spread = (2.0 * clip_value) * (2.0 * clip_value);
  double total = 0.0;
  for (size_t i = 0; i < dims.size(); ++i) {
    total += static_cast<double>(dims[i] - block_sizes[i]) * spread /
             static_cast<double>(block_sizes[i]);
  }
  return total;
}

double MiBound(std::span<const size_t> dims,
               std::span<const size_t> block_sizes) {
  RequireAligned(dims, block_sizes);
  double total = 0.0;
  for (size_t i = 0; i < dims.size(); ++i) {
    total += std::log(static_cast<double>(dims[i]) /
                      static_cast<double>(block_sizes[i]));
  }
  return total;
}

ReconstructionBounds EvaluateReconstructionBounds(size_t dim,
                                                  size_t block_size,
                                                  double var_g,
                                                  double min_gap_sq,
                                                  double mi) {
  if (dim < 1 || block_size < 1 || block_size > dim) {
    throw ValidationError("reconstruction bounds need 1 <= block size <= d");
  }
  if (!(var_g >= 0.0) || !(min_gap_sq >= 0.0) || !(mi >= 0.0)) {
    throw ValidationError(
        "variance, squared gap and mutual information must be >= 0");
  }
  const double d = static_cast<double>(dim);
  ReconstructionBounds out;
  out.log_guess_prob = -std::lgamma(d + 1.0);
  if (d <= kExactFactorialLimit) {
    out.guess_prob = 1.0 / std::tgamma(d + 1.0);
    out.expected_error_lb_gap = (1.0 - out.guess_prob) * min_gap_sq;
  } else {
    out.log_space = true;
    out.guess_prob = 0.0;
    out.expected_error_lb_gap =
        -std::expm1(out.log_guess_prob) * min_gap_sq;
  }
  out.expected_error_lb_rd = static_cast<double>(dim - block_size) *
                             std::exp(-2.0 * mi / d) * var_g;
  return out;
}

double OptimalEpsilonForUtility(size_t dim, double sensitivity,
                                double utility) {
  if (dim < 1) throw ValidationError("d must be >= 1");
  RequirePositive(sensitivity, "sensitivity");
  RequirePositive(utility, "utility target U");
  const double d = static_cast<double>(dim);
  return d / 2.0 * std::log(2.0 * sensitivity * sensitivity * d / utility);
}

size_t OptimalBlockSize(size_t dim, double epsilon, uint64_t steps,
                        double delta) {
  if (dim < 1) throw ValidationError("d must be >= 1");
  if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be >= 0");
  if (steps < 1) throw ValidationError("steps must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ValidationError("delta must lie in (0, 1)");
  }
  const double d = static_cast<double>(dim);
  const double scale =
      std::sqrt(2.0 * static_cast<double>(steps) * -std::log(delta)) * d;
  return ClampedFloor(dim, d * std::exp(-2.0 * epsilon / scale));
}

AdaptiveParams OptimalAdaptiveParams(size_t dim, double epsilon_t,
                                     double utility) {
  if (dim < 1) throw ValidationError("d must be >= 1");
  if (!(epsilon_t >= 0.0)) throw ValidationError("epsilon_t must be >= 0");
  RequirePositive(utility, "utility target U");
  const double d = static_cast<double>(dim);
  return {ClampedFloor(dim, d * std::exp(-2.0 * epsilon_t / d)),
          std::sqrt(utility / (2.0 * d))};
}

double OptimalLearningRate(double r0, double grad_bound, uint64_t steps) {
  RequirePositive(r0, "R0");
  RequirePositive(grad_bound, "G");
  if (steps < 1) throw ValidationError("steps must be >= 1");
  return std::sqrt(r0 * r0 /
                   (grad_bound * grad_bound * static_cast<double>(steps)));
}

double ConvergenceBound(const ConvergenceInputs& in) {
  if (!(in.r0 >= 0.0)) throw ValidationError("R0 must be >= 0");
  if (!(in.grad_bound >= 0.0)) throw ValidationError("G must be >= 0");
  if (!(in.sigma >= 0.0)) throw ValidationError("sigma must be >= 0");
  RequirePositive(in.smoothness, "L");
  RequirePositive(in.learning_rate, "learning rate");
  if (in.steps < 1) throw ValidationError("steps must be >= 1");
  if (!(in.delta > 0.0 && in.delta < 1.0)) {
    throw ValidationError("delta must lie in (0, 1)");
  }
  const double t = static_cast<double>(in.steps);
  const double g2 = in.grad_bound * in.grad_bound;
  const double s2 = in.sigma * in.sigma;
  return in.r0 * in.r0 / (2.0 * in.learning_rate * t) +
         in.learning_rate * in.smoothness * (g2 + s2) / 2.0 +
         (in.grad_bound + in.sigma) * std::sqrt(2.0 * std::log(2.0 / in.delta) / t);
}

double ShuffleNoiseSigma(std::span<const size_t> block_sizes,
                         std::span<const double> grad_bounds) {
  if (block_sizes.size() != grad_bounds.size()) {
    throw ValidationError("block sizes and gradient bounds must be aligned");
  }
  double total = 0.0;
  for (size_t i = 0; i < block_sizes.size(); ++i) {
    if (block_sizes[i] < 1) throw ValidationError("block size must be >= 1");
    const double b = static_cast<double>(block_sizes[i]);
    total += (b - 1.0) * grad_bounds[i] * grad_bounds[i] / b;
  }
  return std::sqrt(total);
}

bool CheckBlockRatio(std::span<const size_t> block_sizes,
                     std::span<const size_t> dims, double rel_tol) {
  RequireAligned(dims, block_sizes);
  RequirePositive(rel_tol, "relative tolerance");
  for (size_t i = 0; i < dims.size(); ++i) {
    for (size_t j = 0; j < dims.size(); ++j) {
      if (i == j || block_sizes[j] < 2) continue;
      const double bj = static_cast<double>(block_sizes[j]);
      const double block_ratio = static_cast<double>(block_sizes[i]) / bj;
      const double dim_ratio =
          static_cast<double>(dims[i]) / static_cast<double>(dims[j]);
      if (std::abs(block_ratio - dim_ratio) > rel_tol * dim_ratio + 1.0 / bj) {
        return false;
      }
    }
  }
  return true;
}

bool CheckBlockRatio(const BlockPlan& plan, std::span<const size_t> dims,
                     double rel_tol) {
  return CheckBlockRatio(plan.block_sizes, dims, rel_tol);
}

std::vector<ShuffleInstance> SmallInstanceCorpus(size_t max_dim,
                                                 size_t per_shape,
                                                 uint64_t seed) {
  std::vector<ShuffleInstance> corpus;
  for (size_t d = 1; d <= max_dim; ++d) {
    for (size_t b = 1; b <= d; ++b) {
      if (d % b != 0) continue;
      for (size_t k = 0; k < per_shape; ++k) {
        Rng rng(DeriveSeed(seed, d * 64 + b, k));
        std::vector<double> values(d);
        for (double& v : values) v = 2.0 * rng.UniformUnit() - 1.0;
        corpus.push_back({GradientVector(std::move(values)), b});
      }
    }
  }
  return corpus;
}

BoundReport VarianceBoundDiagnostic(std::span<const ShuffleInstance> corpus) {
  BoundReport report;
  report.name = "variance_bound_diagnostic";
  report.inputs = {{"instances", corpus.size()}};
  size_t violating = 0;
  double worst_excess = 0.0;
  for (const auto& inst : corpus) {
    const auto exact = ExactShuffleVariance(inst.gradient, inst.block_size);
    const double bound =
        VarianceBound(inst.block_size, Stats(inst.gradient).variance);
    Json components = Json::array();
    for (size_t i = 0; i < exact.size(); ++i) {
      if (exact[i] > bound + 1e-12) {
        components.push_back(i);
        worst_excess = std::max(worst_excess, exact[i] - bound);
      }
    }
    if (components.empty()) continue;
    ++violating;
    report.details.push_back({{"gradient", ComponentsJson(inst.gradient)},
                              {"block_size", inst.block_size},
                              {"bound", bound},
                              {"exact_variance", exact},
                              {"violating_components", components}});
  }
  report.value = static_cast<double>(violating);
  report.diagnostic = std::to_string(violating) + " of " +
                      std::to_string(corpus.size()) +
                      " instances have a component whose exact shuffle "
                      "variance exceeds ((b-1)/b) Var(g); worst excess " +
                      std::to_string(worst_excess);
  return report;
}

BoundReport UtilityBoundDiagnostic(std::span<const ShuffleInstance> corpus) {
  BoundReport report;
  report.name = "utility_bound_diagnostic";
  report.inputs = {{"instances", corpus.size()},
                   {"clip_value", "||g||_2 per instance"}};
  size_t failing = 0;
  for (const auto& inst : corpus) {
    const double norm = L2Norm(inst.gradient.components());
    if (!(norm > 0.0)) continue;
    const auto exact = ExactShuffleVariance(inst.gradient, inst.block_size);
    double total = 0.0;
    for (double v : exact) total += v;
    const size_t d = inst.gradient.size();
    const double bound = UtilityBound(std::span<const size_t>(&d, 1),
                                      std::span<const size_t>(&inst.block_size, 1),
                                      norm);
    const bool holds = total <= bound + 1e-12;
    if (!holds) ++failing;
    report.details.push_back({{"dim", d},
                              {"block_size", inst.block_size},
                              {"clip_value", norm},
                              {"total_exact_variance", total},
                              {"utility_bound", bound},
                              {"holds", holds}});
  }
  report.value = static_cast<double>(failing);
  report.diagnostic = std::to_string(failing) + " of " +
                      std::to_string(report.details.size()) +
                      " instances violate sum_i Var <= (d-b)(2C)^2/b";
  return report;
}

double ShuffleMutualInformation(std::span<const GradientVector> inputs,
                                std::span<const double> prior,
                                size_t block_size) {
  if (inputs.empty() || inputs.size() != prior.size()) {
    throw ValidationError("need one prior weight per input gradient");
  }
  std::vector<ShuffleDistribution> channels;
  channels.reserve(inputs.size());
  std::map<std::vector<double>, double> marginal;
  for (size_t x = 0; x < inputs.size(); ++x) {
    if (inputs[x].size() != inputs.front().size()) {
      throw ValidationError("all inputs must share a dimension");
    }
    channels.push_back(EnumerateBlockShuffles(inputs[x], block_size));
    for (const auto& [y, p] : channels.back().outcomes) {
      marginal[y] += prior[x] * p;
    }
  }
  double mi = 0.0;
  for (size_t x = 0; x < inputs.size(); ++x) {
    if (prior[x] == 0.0) continue;
    for (const auto& [y, p] : channels[x].outcomes) {
      mi += prior[x] * p * std::log(p / marginal.at(y));
    }
  }
  return std::max(mi, 0.0);
}

BoundReport MiBoundDiagnostic(std::span<const ShuffleInstance> corpus) {
  BoundReport report;
  report.name = "mi_bound_diagnostic";
  report.inputs = {{"instances", corpus.size()},
                   {"prior", "uniform over {g, g + e_0}"}};
  size_t failing = 0;
  for (const auto& inst : corpus) {
    const GradientVector& g = inst.gradient;
    std::vector<double> shifted(g.components().begin(), g.components().end());
    shifted[0] += 1.0;
    const std::vector<GradientVector> inputs{g, g.WithComponents(shifted)};
    const std::vector<double> prior{0.5, 0.5};
    const double mi = ShuffleMutualInformation(inputs, prior, inst.block_size);
    const size_t m = NumBlocks(g.size(), inst.block_size);
    const double log_perms = std::lgamma(static_cast<double>(m) + 1.0);
    const double headline = std::log(static_cast<double>(g.size()) /
                                     static_cast<double>(inst.block_size));
    const bool holds = mi <= log_perms + 1e-9;
    if (!holds) ++failing;
    report.details.push_back({{"dim", g.size()},
                              {"block_size", inst.block_size},
                              {"num_blocks", m},
                              {"mutual_information", mi},
                              {"ln_d_over_b", headline},
                              {"ln_m_factorial", log_perms},
                              {"within_ln_m_factorial", holds},
                              {"within_ln_d_over_b", mi <= headline + 1e-9}});
  }
  report.value = static_cast<double>(failing);
  report.diagnostic = std::to_string(failing) + " of " +
                      std::to_string(corpus.size()) +
                      " instances exceed ln(m!) + 1e-9";
  return report;
}

}  // namespace dpblogs
