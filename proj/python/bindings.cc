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

#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dpblogs/accountant.h"
#include "dpblogs/cli.h"
#include "dpblogs/composition.h"
#include "dpblogs/errors.h"
#include "dpblogs/gradient.h"
#include "dpblogs/mechanism.h"
#include "dpblogs/shuffle.h"

namespace py = pybind11;

namespace dpblogs {
namespace {

using V = std::vector<double>;

V Values(const GradientVector& g) {
  return V(g.components().begin(), g.components().end());
}

ModelSpec ModelFromPairs(
    const std::vector<std::pair<std::string, size_t>>& groups) {
  std::vector<ParameterGroup> out;
  for (const auto& [name, dim] : groups) out.push_back({name, dim});
  return ModelSpec(std::move(out));
}

AccountantConfig MakeConfig(double target_epsilon, double delta,
                            uint64_t steps, double clip_value,
                            uint64_t batch_size) {
  AccountantConfig c{target_epsilon, delta, steps, clip_value, batch_size};
  c.Validate();
  return c;
}

py::dict PlanDict(const BlockPlan& plan) {
  py::dict d;
  d["block_sizes"] = plan.block_sizes;
  d["per_group_epsilon"] = plan.per_group_epsilon;
  d["epsilon_per_step"] = plan.epsilon_per_step;
  d["epsilon_total"] = plan.epsilon_total;
  d["target_gap"] = plan.target_gap;
  d["warnings"] = plan.warnings;
  return d;
}

py::tuple Pair(const PrivacyParams& p) {
  return py::make_tuple(p.epsilon, p.delta);
}

}  // namespace
}  // namespace dpblogs

PYBIND11_MODULE(_dpblogs, m) {
  using namespace dpblogs;
  m.doc() = "Block-wise gradient shuffling with a block-size privacy accountant";

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<NumericDomainError>(m, "NumericDomainError",
                                             PyExc_ArithmeticError);

  m.def("clip", [](const V& g, double c) { return Values(Clip(GradientVector(g), c)); },
        py::arg("gradient"), py::arg("clip_value"));
  m.def(
      "block_shuffle",
      [](const V& g, size_t block_size, uint64_t seed) {
        return Values(BlockShuffle(GradientVector(g), {block_size, seed}));
      },
      py::arg("gradient"), py::arg("block_size"), py::arg("seed"));
  m.def(
      "enumerate_block_shuffles",
      [](const V& g, size_t block_size) {
        py::dict out;
        for (const auto& [k, p] :
             EnumerateBlockShuffles(GradientVector(g), block_size).outcomes) {
          out[py::tuple(py::cast(k))] = p;
        }
        return out;
      },
      py::arg("gradient"), py::arg("block_size"));
  m.def(
      "stats",
      [](const V& g) {
        const GradientStats s = Stats(GradientVector(g));
        return py::make_tuple(s.l2_norm, s.mean, s.variance);
      },
      py::arg("gradient"));

  m.def(
      "epsilon_group",
      [](size_t d, size_t b, double c) {
        const GroupEpsilon e = EpsilonGroup(d, b, c);
        py::dict out;
        out["eps1"] = e.eps1;
        out["eps2"] = e.eps2;
        out["eps"] = e.eps;
        out["saturated"] = e.saturated;
        return out;
      },
      py::arg("dim"), py::arg("block_size"), py::arg("clip_value"));
  m.def("total_privacy", &TotalPrivacy, py::arg("epsilon_per_step"),
        py::arg("steps"), py::arg("delta"));
  m.def("largest_block_for_target", &LargestBlockForTarget, py::arg("dim"),
        py::arg("clip_value"), py::arg("target"));
  m.def(
      "optimize_block_sizes",
      [](const std::vector<std::pair<std::string, size_t>>& groups,
         double target_epsilon, double delta, uint64_t steps, double clip_value,
         uint64_t batch_size) {
        return PlanDict(OptimizeBlockSizes(
            ModelFromPairs(groups),
            MakeConfig(target_epsilon, delta, steps, clip_value, batch_size)));
      },
      py::arg("groups"), py::arg("target_epsilon"), py::arg("delta"),
      py::arg("steps"), py::arg("clip_value"), py::arg("batch_size") = 1);

  m.def(
      "compose_basic",
      [](double e, double d, uint64_t t) { return Pair(ComposeBasic({e, d}, t)); },
      py::arg("epsilon"), py::arg("delta"), py::arg("steps"));
  m.def(
      "compose_advanced",
      [](double e, double d, uint64_t t, double dp) {
        return Pair(ComposeAdvanced({e, d}, t, dp));
      },
      py::arg("epsilon"), py::arg("delta"), py::arg("steps"),
      py::arg("delta_prime"));
  m.def("per_step_budget", &PerStepBudget, py::arg("epsilon_total"),
        py::arg("steps"), py::arg("delta_prime"));
  m.def(
      "subsample_amplify",
      [](double e, double d, double q) {
        return Pair(SubsampleAmplify({e, d}, {q}));
      },
      py::arg("epsilon"), py::arg("delta"), py::arg("q"));
  m.def(
      "poisson_amplify",
      [](double d, double q) {
        const PoissonAmplification a = PoissonAmplify({0.0, d}, {q});
        return py::make_tuple(a.epsilon0, a.epsilon);
      },
      py::arg("delta"), py::arg("q"));

  py::class_<Generator>(m, "Generator")
      .def(py::init([](const std::vector<std::pair<std::string, size_t>>& groups,
                       double target_epsilon, double delta, uint64_t steps,
                       double clip_value, uint64_t batch_size) {
             return Generator::Create(
                 ModelFromPairs(groups),
                 MakeConfig(target_epsilon, delta, steps, clip_value,
                            batch_size));
           }),
           py::arg("groups"), py::arg("target_epsilon"), py::arg("delta"),
           py::arg("steps"), py::arg("clip_value"), py::arg("batch_size") = 1)
      .def(
          "generate",
          [](Generator& gen, const std::vector<V>& grads, uint64_t seed) {
            std::vector<GradientVector> in(grads.begin(), grads.end());
            const PrivatizedGradients out = gen.Generate(in, seed);
            std::vector<V> rows;
            for (const auto& g : out.grads) rows.push_back(Values(g));
            return py::make_tuple(rows, out.epsilon_spent, out.delta);
          },
          py::arg("gradients"), py::arg("seed"))
      .def("privacy_spent",
           [](const Generator& gen) {
             const PrivacySpent s = gen.privacy_spent();
             return py::make_tuple(s.epsilon, s.delta, s.fraction_elapsed);
           })
      .def_property_readonly(
          "plan", [](const Generator& gen) { return PlanDict(gen.plan()); })
      .def_property_readonly("steps_taken", &Generator::steps_taken);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> argv{"dpblogs"};
        argv.insert(argv.end(), args.begin(), args.end());
        std::ostringstream out, err;
        const int code = RunCli(argv, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
