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

#include "dpblogs/composition.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dpblogs/accountant.h"
#include "dpblogs/errors.h"

namespace dpblogs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void RequireSteps(uint64_t steps) {
  if (steps < 1) throw ValidationError("number of steps T must be >= 1");
}

void RequireOpenUnit(double value, const char* name) {
  if (!(value > 0.0 && value < 1.0)) {
    throw ValidationError(std::string(name) + " must lie in (0, 1)");
  }
}

void RequireNonnegative(double value, const char* name) {
  if (!(value >= 0.0)) {
    throw ValidationError(std::string(name) + " must be >= 0");
  }
}

double CheckedDelta(double delta, const char* what) {
  if (!(delta < 1.0)) {
    throw NumericDomainError(std::string(what) +
                             ": composed delta must stay below 1");
  }
  return delta;
}

// ln(e^x - 1) for x > 0 without overflow.
double LogExpm1(double x) {
  if (x > 30.0) return x + std::log1p(-std::exp(-x));
  return std::log(std::expm1(x));
}

// sqrt(2T ln(1/delta)) sum + T sum (e^{max} - 1).
double AdvancedEpsilon(double sum, double max, uint64_t steps, double delta) {
  if (max > kMaxExponent) return sum > 0.0 ? kInf : 0.0;
  const double t = static_cast<double>(steps);
  return std::sqrt(2.0 * t * -std::log(delta)) * sum +
         t * sum * std::expm1(max);
}

// remaining / (sqrt(2n ln(1/delta)) + n (e^{remaining/n} - 1)).
double SpreadBudget(double remaining, uint64_t n, double delta) {
  if (remaining == 0.0) return 0.0;
  const double nn = static_cast<double>(n);
  const double per = remaining / nn;
  if (per > kMaxExponent) return 0.0;
  return remaining /
         (std::sqrt(2.0 * nn * -std::log(delta)) + nn * std::expm1(per));
}

double AmplifiedEpsilon(double epsilon, double q) {
  if (q == 1.0 || epsilon == 0.0) return epsilon;
  if (epsilon > 30.0) {
    return epsilon + std::log(q + (1.0 - q) * std::exp(-epsilon));
  }
  return std::log1p(q * std::expm1(epsilon));
}

}  // namespace

void PrivacyParams::Validate() const {
  if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be >= 0");
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw ValidationError("delta must lie in [0, 1)");
  }
}

void SubsampleParams::Validate() const {
  if (!(q > 0.0 && q <= 1.0)) {
    throw ValidationError("sampling ratio q must lie in (0, 1]");
  }
}

PrivacyParams ComposeBasic(const PrivacyParams& p, uint64_t steps) {
  p.Validate();
  RequireSteps(steps);
  const double t = static_cast<double>(steps);
  return {t * p.epsilon, CheckedDelta(t * p.delta, "basic composition")};
}

PrivacyParams ComposeHeterogeneous(std::span<const double> epsilons,
                                   std::span<const double> deltas) {
  if (epsilons.size() != deltas.size()) {
    throw ValidationError("epsilon and delta lists must have equal length");
  }
  PrivacyParams out;
  for (size_t i = 0; i < epsilons.size(); ++i) {
    PrivacyParams{epsilons[i], deltas[i]}.Validate();
    out.epsilon += epsilons[i];
    out.delta += deltas[i];
  }
  CheckedDelta(out.delta, "heterogeneous composition");
  return out;
}

PrivacyParams ComposeAdvanced(const PrivacyParams& p, uint64_t steps,
                              double delta_prime) {
  p.Validate();
  RequireSteps(steps);
  RequireOpenUnit(delta_prime, "delta'");
  const double t = static_cast<double>(steps);
  return {AdvancedEpsilon(p.epsilon, p.epsilon, steps, delta_prime),
          CheckedDelta(t * p.delta + delta_prime, "advanced composition")};
}

double PerStepBudget(double epsilon_total, uint64_t steps,
                     double delta_prime) {
  RequireNonnegative(epsilon_total, "total epsilon");
  RequireSteps(steps);
  RequireOpenUnit(delta_prime, "delta'");
  return SpreadBudget(epsilon_total, steps, delta_prime);
}

PrivacyParams SubsampleAmplify(const PrivacyParams& p,
                               const SubsampleParams& s) {
  p.Validate();
  s.Validate();
  return {AmplifiedEpsilon(p.epsilon, s.q), s.q * p.delta};
}

PoissonAmplification PoissonAmplify(const PrivacyParams& p,
                                    const SubsampleParams& s) {
  p.Validate();
  s.Validate();
  if (p.delta >= s.q) {
    throw NumericDomainError(
        "no finite ε₀ exists: Poisson amplification needs delta < q");
  }
  // q (1 - e^{-x}) is strictly increasing in x with supremum q.
  const auto residual = [&](double x) {
    return -s.q * std::expm1(-x) - p.delta;
  };
  double low = 0.0;
  double high = kPoissonBracketHigh;
  while (high - low > kPoissonTolerance) {
    const double mid = low + (high - low) / 2.0;
    if (mid <= low || mid >= high) break;
    if (residual(mid) < 0.0) {
      low = mid;
    } else {
      high = mid;
    }
  }
  PoissonAmplification out;
  out.epsilon0 = low + (high - low) / 2.0;
  out.epsilon = AmplifiedEpsilon(out.epsilon0, s.q);
  return out;
}

double OptimalSamplingRatio(double epsilon, uint64_t steps) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ValidationError("epsilon must be a finite value > 0");
  }
  RequireSteps(steps);
  if (steps == 1) return 1.0;
  const double ratio = std::exp(
      LogExpm1(epsilon / static_cast<double>(steps)) - LogExpm1(epsilon));
  return std::min(1.0, ratio);
}

double OptimalSamplingProb(double epsilon_prime, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ValidationError("epsilon must be a finite value > 0");
  }
  RequireNonnegative(epsilon_prime, "epsilon'");
  if (epsilon_prime > epsilon) {
    throw ValidationError("epsilon' must not exceed epsilon");
  }
  if (epsilon_prime == epsilon) return 1.0;
  if (epsilon_prime == 0.0) return 0.0;
  return std::exp(LogExpm1(epsilon_prime) - LogExpm1(epsilon));
}

PrivacyParams ComposeParamwise(std::span<const double> epsilons,
                               std::span<const double> deltas, uint64_t steps,
                               double delta) {
  if (epsilons.size() != deltas.size()) {
    throw ValidationError("epsilon and delta lists must have equal length");
  }
  if (epsilons.empty()) {
    throw ValidationError("parameter-wise composition needs K >= 1 groups");
  }
  RequireSteps(steps);
  RequireOpenUnit(delta, "delta");
  double sum_eps = 0.0;
  double max_eps = 0.0;
  double sum_delta = 0.0;
  for (size_t i = 0; i < epsilons.size(); ++i) {
    PrivacyParams{epsilons[i], deltas[i]}.Validate();
    sum_eps += epsilons[i];
    max_eps = std::max(max_eps, epsilons[i]);
    sum_delta += deltas[i];
  }
  if (!(sum_delta < 1.0)) {
    throw NumericDomainError(
        "parameter-wise composition: sum of group deltas must stay below 1");
  }
  // 1 - (1 - delta)(1 - S)^T written so that S = 0 returns delta exactly.
  const double miss = -std::expm1(static_cast<double>(steps) *
                                  std::log1p(-sum_delta));
  const double delta_total = delta + (1.0 - delta) * miss;
  return {AdvancedEpsilon(sum_eps, max_eps, steps, delta),
          CheckedDelta(delta_total, "parameter-wise composition")};
}

double AdaptiveAllocate(double epsilon_total, double epsilon_spent,
                        uint64_t step, uint64_t steps, double delta_star) {
  RequireNonnegative(epsilon_total, "total epsilon");
  RequireNonnegative(epsilon_spent, "spent epsilon");
  RequireSteps(steps);
  RequireOpenUnit(delta_star, "delta*");
  if (step >= steps) {
    throw ValidationError("step t must be < T for adaptive allocation");
  }
  if (epsilon_spent > epsilon_total) {
    throw ValidationError("spent epsilon must not exceed the total budget");
  }
  return SpreadBudget(epsilon_total - epsilon_spent, steps - step,
                      delta_star);
}

PrivacyParams AdaptiveEpsilonBound(const AdaptiveBoundParams& params) {
  struct Visitor {
    PrivacyParams operator()(const AdaptiveMaxParams& p) const {
      return ComposeAdvanced({p.max_epsilon, p.max_delta}, p.steps,
                             p.delta_star);
    }
    PrivacyParams operator()(const AdaptiveTwoSidedParams& p) const {
      RequireSteps(p.steps);
      RequireOpenUnit(p.delta, "delta");
      if (p.dim < 1 || p.block_max < 1 || p.block_max > p.dim) {
        throw ValidationError(
            "two-sided adaptive bound needs 1 <= beta_max <= d");
      }
      const GroupEpsilon g = EpsilonGroup(p.dim, p.block_max, p.clip_max);
      const double t = static_cast<double>(p.steps);
      const double lead = std::sqrt(2.0 * t * -std::log(p.delta));
      const auto compose = [&](double e) { return lead * e + t * e * e; };
      return {std::min(compose(g.eps1), compose(g.eps2)), p.delta};
    }
    PrivacyParams operator()(const SampledAdaptiveParams& p) const {
      const PrivacyParams per_step{p.max_epsilon, p.max_delta};
      per_step.Validate();
      const SubsampleParams sampling{p.q};
      sampling.Validate();
      RequireSteps(p.steps);
      RequireOpenUnit(p.delta_star, "delta*");
      const double amplified = AmplifiedEpsilon(p.max_epsilon, p.q);
      const double t = static_cast<double>(p.steps);
      return {AdvancedEpsilon(amplified, amplified, p.steps, p.delta_star),
              CheckedDelta(t * p.q * p.max_delta + p.delta_star,
                           "sampled adaptive composition")};
    }
  };
  return std::visit(Visitor{}, params);
}

}  // namespace dpblogs
