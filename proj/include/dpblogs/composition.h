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

// Closed-form composition and subsampling-amplification calculators.

#ifndef DPBLOGS_COMPOSITION_H_
#define DPBLOGS_COMPOSITION_H_

#include <cstdint>
#include <span>
#include <variant>

namespace dpblogs {

struct PrivacyParams {
  double epsilon = 0.0;
  double delta = 0.0;

  // epsilon >= 0, 0 <= delta < 1.
  void Validate() const;
};

// Sampling ratio q = m / n in (0, 1].
struct SubsampleParams {
  double q = 1.0;

  void Validate() const;
};

// (T eps, T delta). Throws NumericDomainError when T delta >= 1.
PrivacyParams ComposeBasic(const PrivacyParams& p, uint64_t steps);

// (sum eps_t, sum delta_t) for per-step parameters that may differ.
PrivacyParams ComposeHeterogeneous(std::span<const double> epsilons,
                                   std::span<const double> deltas);

// eps' = sqrt(2T ln(1/delta')) eps + T eps (e^eps - 1),
// delta'' = T delta + delta'.
PrivacyParams ComposeAdvanced(const PrivacyParams& p, uint64_t steps,
                              double delta_prime);

// Per-step epsilon that spends `epsilon_total` over `steps` under advanced
// composition: eps_total / (sqrt(2T ln(1/delta')) + T (e^{eps_total/T} - 1)).
double PerStepBudget(double epsilon_total, uint64_t steps,
                     double delta_prime);

// eps' = ln(1 + q (e^eps - 1)), delta' = q delta.
PrivacyParams SubsampleAmplify(const PrivacyParams& p,
                               const SubsampleParams& s);

struct PoissonAmplification {
  // Root of q (1 - e^{-eps0}) = delta.
  double epsilon0 = 0.0;
  // ln((1 - q) + q e^{eps0}).
  double epsilon = 0.0;
};

inline constexpr double kPoissonBracketHigh = 1400.0;
inline constexpr double kPoissonTolerance = 1e-12;

// Solves for eps0 by bisection on [0, 1400]. Throws NumericDomainError
// ("no finite ε₀ exists") when delta >= q.
PoissonAmplification PoissonAmplify(const PrivacyParams& p,
                                    const SubsampleParams& s);

// q* = min(1, (e^{eps/T} - 1) / (e^eps - 1)).
double OptimalSamplingRatio(double epsilon, uint64_t steps);

// q* = (e^{eps'} - 1) / (e^eps - 1); requires eps' <= eps.
double OptimalSamplingProb(double epsilon_prime, double epsilon);

// Parameter-wise composition over K groups for T steps:
// eps = sqrt(2T ln(1/delta)) S + T S (e^{max eps_i} - 1), S = sum eps_i;
// delta_total = 1 - (1 - delta)(1 - sum delta_i)^T.
PrivacyParams ComposeParamwise(std::span<const double> epsilons,
                               std::span<const double> deltas, uint64_t steps,
                               double delta);

// Budget for step t given what was already spent; at t = 0 with nothing
// spent this equals PerStepBudget.
double AdaptiveAllocate(double epsilon_total, double epsilon_spent,
                        uint64_t step, uint64_t steps, double delta_star);

struct AdaptiveMaxParams {
  double max_epsilon = 0.0;
  double max_delta = 0.0;
  uint64_t steps = 1;
  double delta_star = 1e-5;
};

struct AdaptiveTwoSidedParams {
  double clip_max = 1.0;
  uint64_t block_max = 1;
  uint64_t dim = 1;
  uint64_t steps = 1;
  double delta = 1e-5;
};

struct SampledAdaptiveParams {
  double max_epsilon = 0.0;
  double max_delta = 0.0;
  double q = 1.0;
  uint64_t steps = 1;
  double delta_star = 1e-5;
};

using AdaptiveBoundParams =
    std::variant<AdaptiveMaxParams, AdaptiveTwoSidedParams,
                 SampledAdaptiveParams>;

// Whole-run guarantee of the adaptive variant. The mode is the active
// alternative:
//  - AdaptiveMaxParams: advanced composition at the worst per-step (eps,
//    delta), plus delta_star.
//  - AdaptiveTwoSidedParams: min(eps1, eps2) where each is
//    sqrt(2T ln(1/delta)) e_k + T e_k^2 with e_k the two group epsilons at
//    (C_max, beta_max, d). Note the squared per-step term.
//  - SampledAdaptiveParams: AdaptiveMax with eps_max replaced by
//    ln(1 + q (e^{eps_max} - 1)) and delta by T q delta_max + delta_star.
PrivacyParams AdaptiveEpsilonBound(const AdaptiveBoundParams& params);

}  // namespace dpblogs

#endif  // DPBLOGS_COMPOSITION_H_
