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

#include "dpblogs/cli.h"

#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "dpblogs/accountant.h"
#include "dpblogs/bounds.h"
#include "dpblogs/composition.h"
#include "dpblogs/errors.h"
#include "dpblogs/io.h"
#include "dpblogs/mechanism.h"
#include "dpblogs/shuffle.h"
#include "dpblogs/trainer.h"

namespace dpblogs {
namespace {

// Typed flag storage for one subcommand. Every value read through a getter
// is echoed, in read order, into `inputs`.
class Flags {
 public:
  Flags(CLI::App* app, std::string context)
      : app_(app), context_(std::move(context)) {}

  void Double(const std::string& name, const std::string& help) {
    opts_[name] = app_->add_option("--" + name, doubles_[name], help);
  }
  void Uint(const std::string& name, const std::string& help) {
    opts_[name] = app_->add_option("--" + name, uints_[name], help);
  }
  void String(const std::string& name, const std::string& help) {
    opts_[name] = app_->add_option("--" + name, strings_[name], help);
  }
  void DoubleList(const std::string& name, const std::string& help) {
    opts_[name] =
        app_->add_option("--" + name, double_lists_[name], help)
            ->delimiter(',');
  }
  void UintList(const std::string& name, const std::string& help) {
    opts_[name] =
        app_->add_option("--" + name, uint_lists_[name], help)->delimiter(',');
  }

  bool Has(const std::string& name) const {
    return opts_.at(name)->count() > 0;
  }

  double GetDouble(const std::string& name) {
    Require(name);
    const double v = doubles_.at(name);
    inputs[name] = v;
    return v;
  }
  double GetDouble(const std::string& name, double fallback) {
    return Has(name) ? GetDouble(name) : Echo(name, fallback);
  }
  uint64_t GetUint(const std::string& name) {
    Require(name);
    const uint64_t v = uints_.at(name);
    inputs[name] = v;
    return v;
  }
  uint64_t GetUint(const std::string& name, uint64_t fallback) {
    if (Has(name)) return GetUint(name);
    inputs[name] = fallback;
    return fallback;
  }
  std::string GetString(const std::string& name) {
    Require(name);
    const std::string v = strings_.at(name);
    inputs[name] = v;
    return v;
  }
  std::string GetString(const std::string& name, const std::string& fallback) {
    if (Has(name)) return GetString(name);
    inputs[name] = fallback;
    return fallback;
  }
  std::vector<double> GetDoubleList(const std::string& name) {
    Require(name);
    const auto v = double_lists_.at(name);
    inputs[name] = v;
    return v;
  }
  std::vector<size_t> GetSizeList(const std::string& name) {
    Require(name);
    const auto& raw = uint_lists_.at(name);
    std::vector<size_t> v(raw.begin(), raw.end());
    inputs[name] = v;
    return v;
  }
  // Paths are needed but not echoed.
  std::string GetPath(const std::string& name) {
    Require(name);
    return strings_.at(name);
  }

  void set_context(std::string context) { context_ = std::move(context); }

  Json inputs = Json::object();

 private:
  double Echo(const std::string& name, double v) {
    inputs[name] = v;
    return v;
  }

  void Require(const std::string& name) const {
    if (!Has(name)) {
      throw ValidationError(context_ + " requires --" + name);
    }
  }

  CLI::App* app_;
  std::string context_;
  std::map<std::string, CLI::Option*> opts_;
  std::map<std::string, double> doubles_;
  std::map<std::string, uint64_t> uints_;
  std::map<std::string, std::string> strings_;
  std::map<std::string, std::vector<double>> double_lists_;
  std::map<std::string, std::vector<uint64_t>> uint_lists_;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes `text` to `path`, or to `fallback` when path is empty.
void Emit(const std::string& path, const std::string& text,
          std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError("cannot open output file '" + path + "'");
  file << text;
}

AccountantConfig ReadAccountantConfig(Flags& f) {
  AccountantConfig config;
  config.target_epsilon = f.GetDouble("epsilon");
  config.delta = f.GetDouble("delta");
  config.steps = f.GetUint("steps");
  config.clip_value = f.GetDouble("clip");
  config.batch_size = f.GetUint("batch", 1);
  config.Validate();
  return config;
}

void AddAccountantFlags(Flags& f) {
  f.String("model", "ModelSpec JSON file");
  f.Double("epsilon", "target epsilon");
  f.Double("delta", "delta in (0, 1)");
  f.Uint("steps", "number of training steps T");
  f.Double("clip", "clip value C");
  f.Uint("batch", "batch size (accepted, unused by the epsilon formulas)");
  f.String("json-out", "write the JSON result here instead of stdout");
}

// ---- optimize -------------------------------------------------------------

std::string RunOptimize(Flags& f) {
  const std::string model_path = f.GetPath("model");
  const ModelSpec model = ParseModelSpec(ReadFile(model_path));
  f.inputs["model"] = ModelSpecToJson(model);
  const AccountantConfig config = ReadAccountantConfig(f);
  const BlockPlan plan = OptimizeBlockSizes(model, config);
  Json out = BlockPlanToJson(plan);
  out["exceeds_target"] = plan.ExceedsTarget(config.target_epsilon);
  out["inputs"] = f.inputs;
  return DumpJson(out) + "\n";
}

// ---- compose --------------------------------------------------------------

Json PrivacyJson(const PrivacyParams& p) {
  return {{"epsilon", p.epsilon}, {"delta", p.delta}};
}

std::string RunCompose(Flags& f) {
  const std::string mode = f.GetString("mode");
  f.set_context("compose --mode " + mode);
  Json out;
  if (mode == "basic") {
    const PrivacyParams p{f.GetDouble("epsilon"), f.GetDouble("delta")};
    out = PrivacyJson(ComposeBasic(p, f.GetUint("t")));
  } else if (mode == "hetero") {
    const auto eps = f.GetDoubleList("eps-list");
    const auto deltas = f.GetDoubleList("delta-list");
    out = PrivacyJson(ComposeHeterogeneous(eps, deltas));
  } else if (mode == "advanced") {
    const PrivacyParams p{f.GetDouble("epsilon"), f.GetDouble("delta")};
    const uint64_t t = f.GetUint("t");
    out = PrivacyJson(ComposeAdvanced(p, t, f.GetDouble("delta-prime")));
  } else if (mode == "per-step") {
    const double total = f.GetDouble("epsilon-total");
    const uint64_t t = f.GetUint("t");
    const double delta_prime = f.GetDouble("delta-prime");
    out = {{"epsilon", PerStepBudget(total, t, delta_prime)},
           {"delta", delta_prime}};
  } else if (mode == "subsample") {
    const PrivacyParams p{f.GetDouble("epsilon"), f.GetDouble("delta")};
    out = PrivacyJson(SubsampleAmplify(p, {f.GetDouble("q")}));
  } else if (mode == "poisson") {
    const double eps = f.Has("epsilon") ? f.GetDouble("epsilon") : 0.0;
    const PrivacyParams p{eps, f.GetDouble("delta")};
    const PoissonAmplification a = PoissonAmplify(p, {f.GetDouble("q")});
    out = {{"epsilon", a.epsilon}, {"delta", p.delta},
           {"epsilon0", a.epsilon0}};
  } else if (mode == "q-star") {
    const double eps = f.GetDouble("epsilon");
    out = {{"q", OptimalSamplingRatio(eps, f.GetUint("t"))}};
  } else if (mode == "q-prob") {
    const double eps_prime = f.GetDouble("epsilon-prime");
    out = {{"q", OptimalSamplingProb(eps_prime, f.GetDouble("epsilon"))}};
  } else if (mode == "paramwise") {
    const auto eps = f.GetDoubleList("eps-list");
    const auto deltas = f.GetDoubleList("delta-list");
    const uint64_t t = f.GetUint("t");
    out = PrivacyJson(ComposeParamwise(eps, deltas, t, f.GetDouble("delta")));
  } else if (mode == "adaptive") {
    const double total = f.GetDouble("epsilon-total");
    const double spent = f.GetDouble("epsilon-spent");
    const uint64_t step = f.GetUint("step");
    const uint64_t t = f.GetUint("t");
    const double delta_star = f.GetDouble("delta-star");
    out = {{"epsilon", AdaptiveAllocate(total, spent, step, t, delta_star)},
           {"delta", delta_star}};
  } else if (mode == "adaptive-bound") {
    const std::string which = f.GetString("bound-mode");
    f.set_context("compose --mode adaptive-bound --bound-mode " + which);
    AdaptiveBoundParams params;
    if (which == "max") {
      AdaptiveMaxParams p;
      p.max_epsilon = f.GetDouble("epsilon");
      p.max_delta = f.GetDouble("delta");
      p.steps = f.GetUint("t");
      p.delta_star = f.GetDouble("delta-star");
      params = p;
    } else if (which == "two-sided") {
      AdaptiveTwoSidedParams p;
      p.clip_max = f.GetDouble("c-max");
      p.block_max = f.GetUint("beta-max");
      p.dim = f.GetUint("d");
      p.steps = f.GetUint("t");
      p.delta = f.GetDouble("delta");
      params = p;
    } else if (which == "sampled") {
      SampledAdaptiveParams p;
      p.max_epsilon = f.GetDouble("epsilon");
      p.max_delta = f.GetDouble("delta");
      p.q = f.GetDouble("q");
      p.steps = f.GetUint("t");
      p.delta_star = f.GetDouble("delta-star");
      params = p;
    } else {
      throw ValidationError(
          "--bound-mode must be one of max, two-sided, sampled");
    }
    out = PrivacyJson(AdaptiveEpsilonBound(params));
  } else {
    throw ValidationError(
        "--mode must be one of basic, hetero, advanced, per-step, subsample, "
        "poisson, q-star, q-prob, paramwise, adaptive, adaptive-bound");
  }
  out["mode"] = mode;
  out["inputs"] = f.inputs;
  return DumpJson(out) + "\n";
}

// ---- shuffle --------------------------------------------------------------

void RunShuffle(Flags& f, std::ostream& out) {
  const ModelSpec model = ParseModelSpec(ReadFile(f.GetPath("model")));
  f.inputs["model"] = ModelSpecToJson(model);
  const AccountantConfig config = ReadAccountantConfig(f);
  const uint64_t seed = f.GetUint("seed");

  std::ifstream csv(f.GetPath("gradients"));
  if (!csv) throw ValidationError("cannot open gradient CSV");
  const auto rows = ParseGradientCsv(csv);
  if (rows.size() != model.num_groups()) {
    throw ValidationError("gradient CSV has " + std::to_string(rows.size()) +
                          " rows but the model has " +
                          std::to_string(model.num_groups()) + " groups");
  }
  std::vector<std::vector<size_t>> shapes;
  if (f.Has("shapes")) {
    const Json doc = Json::parse(f.GetString("shapes"), nullptr, false);
    if (!doc.is_array() || doc.size() != rows.size()) {
      throw ValidationError("--shapes must be a JSON array with one shape "
                            "per gradient row");
    }
    for (const auto& s : doc) shapes.push_back(ParseShape(s.dump()));
  }
  std::vector<GradientVector> grads;
  for (size_t i = 0; i < rows.size(); ++i) {
    grads.push_back(shapes.empty() ? GradientVector(rows[i])
                                   : GradientVector(rows[i], shapes[i]));
  }

  Generator generator = Generator::Create(model, config);
  const PrivatizedGradients result = generator.Generate(grads, seed);

  std::vector<std::vector<double>> out_rows;
  for (const auto& g : result.grads) {
    out_rows.emplace_back(g.components().begin(), g.components().end());
  }
  std::ostringstream csv_out;
  WriteGradientCsv(csv_out, out_rows);
  Emit(f.Has("out") ? f.GetPath("out") : "", csv_out.str(), out);

  const PrivacySpent spent = generator.privacy_spent();
  Json spend = {{"epsilon_spent", result.epsilon_spent},
                {"delta", result.delta},
                {"fraction_elapsed", spent.fraction_elapsed},
                {"block_sizes", generator.plan().block_sizes},
                {"epsilon_total", generator.plan().epsilon_total},
                {"warnings", generator.plan().warnings},
                {"inputs", f.inputs}};
  Emit(f.Has("json-out") ? f.GetPath("json-out") : "", DumpJson(spend) + "\n",
       out);
}

// ---- bounds ---------------------------------------------------------------

BoundReport ScalarReport(std::string name, double value, Json inputs) {
  BoundReport r;
  r.name = std::move(name);
  r.value = value;
  r.inputs = std::move(inputs);
  if (!std::isfinite(value)) r.warnings.push_back("value is not finite");
  return r;
}

std::vector<std::string> SplitCommaList(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::string RunBounds(Flags& f) {
  const std::string which_list = f.GetString("which");
  Json reports = Json::array();
  for (const std::string& which : SplitCommaList(which_list)) {
    f.set_context("bounds --which " + which);
    Flags& g = f;
    g.inputs = Json::object();
    BoundReport r;
    if (which == "variance") {
      const size_t beta = g.GetUint("beta");
      const double var_g = g.GetDouble("var-g");
      r = ScalarReport("variance_bound", VarianceBound(beta, var_g), g.inputs);
    } else if (which == "utility") {
      const auto dims = g.GetSizeList("dims");
      const auto betas = g.GetSizeList("betas");
      const double clip = g.GetDouble("clip");
      r = ScalarReport("utility_bound", UtilityBound(dims, betas, clip),
                       g.inputs);
    } else if (which == "mi") {
      const auto dims = g.GetSizeList("dims");
      const auto betas = g.GetSizeList("betas");
      r = ScalarReport("mi_bound", MiBound(dims, betas), g.inputs);
    } else if (which == "reconstruction") {
      const size_t d = g.GetUint("d");
      const size_t beta = g.GetUint("beta");
      const double var_g = g.GetDouble("var-g", 0.0);
      const double gap = g.GetDouble("min-gap-sq", 0.0);
      const double mi = g.GetDouble("mi", 0.0);
      const ReconstructionBounds b =
          EvaluateReconstructionBounds(d, beta, var_g, gap, mi);
      r = ScalarReport("reconstruction_bounds", b.guess_prob, g.inputs);
      r.details.push_back({{"guess_prob", b.guess_prob},
                           {"log_guess_prob", b.log_guess_prob},
                           {"log_space", b.log_space},
                           {"expected_error_lb_gap", b.expected_error_lb_gap},
                           {"expected_error_lb_rd", b.expected_error_lb_rd}});
    } else if (which == "optimal-epsilon") {
      const size_t d = g.GetUint("d");
      const double sens = g.GetDouble("sensitivity");
      const double u = g.GetDouble("utility");
      r = ScalarReport("optimal_epsilon_for_utility",
                       OptimalEpsilonForUtility(d, sens, u), g.inputs);
      if (r.value < 0.0) {
        r.warnings.push_back(
            "negative epsilon: the utility target exceeds the worst case");
      }
    } else if (which == "optimal-block") {
      const size_t d = g.GetUint("d");
      const double eps = g.GetDouble("epsilon");
      const uint64_t t = g.GetUint("t");
      const double delta = g.GetDouble("delta");
      r = ScalarReport("optimal_block_size",
                       static_cast<double>(OptimalBlockSize(d, eps, t, delta)),
                       g.inputs);
    } else if (which == "optimal-adaptive") {
      const size_t d = g.GetUint("d");
      const double eps_t = g.GetDouble("eps-t");
      const double u = g.GetDouble("utility");
      const AdaptiveParams p = OptimalAdaptiveParams(d, eps_t, u);
      r = ScalarReport("optimal_adaptive_params",
                       static_cast<double>(p.block_size), g.inputs);
      r.details.push_back(
          {{"block_size", p.block_size}, {"clip_value", p.clip_value}});
    } else if (which == "learning-rate") {
      const double r0 = g.GetDouble("r0");
      const double grad = g.GetDouble("g");
      const uint64_t t = g.GetUint("t");
      r = ScalarReport("optimal_learning_rate",
                       OptimalLearningRate(r0, grad, t), g.inputs);
    } else if (which == "convergence") {
      ConvergenceInputs in;
      in.r0 = g.GetDouble("r0");
      in.grad_bound = g.GetDouble("g");
      in.sigma = g.GetDouble("sigma", 0.0);
      in.smoothness = g.GetDouble("l");
      in.learning_rate = g.GetDouble("eta");
      in.steps = g.GetUint("t");
      in.delta = g.GetDouble("delta");
      r = ScalarReport("convergence_bound", ConvergenceBound(in), g.inputs);
    } else if (which == "block-ratio") {
      const auto betas = g.GetSizeList("betas");
      const auto dims = g.GetSizeList("dims");
      const double tol = g.GetDouble("rel-tol");
      const bool ok = CheckBlockRatio(betas, dims, tol);
      r = ScalarReport("block_ratio_check", ok ? 1.0 : 0.0, g.inputs);
      r.diagnostic = ok ? "block ratios track dimension ratios"
                        : "block ratios deviate from dimension ratios";
    } else if (which == "variance-diagnostic" ||
               which == "utility-diagnostic" || which == "mi-diagnostic") {
      const uint64_t seed = g.GetUint("seed");
      const size_t max_dim =
          g.GetUint("max-dim", which == "mi-diagnostic" ? 6 : 12);
      const size_t per_shape = g.GetUint("per-shape", 2);
      const auto corpus = SmallInstanceCorpus(max_dim, per_shape, seed);
      if (which == "variance-diagnostic") {
        r = VarianceBoundDiagnostic(corpus);
      } else if (which == "utility-diagnostic") {
        r = UtilityBoundDiagnostic(corpus);
      } else {
        r = MiBoundDiagnostic(corpus);
      }
      Json merged = g.inputs;
      for (const auto& [k, v] : r.inputs.items()) merged[k] = v;
      r.inputs = merged;
    } else {
      throw ValidationError(
          "--which entries must be among variance, utility, mi, "
          "reconstruction, optimal-epsilon, optimal-block, optimal-adaptive, "
          "learning-rate, convergence, block-ratio, variance-diagnostic, "
          "utility-diagnostic, mi-diagnostic");
    }
    reports.push_back(BoundReportToJson(r));
  }
  return DumpJson(reports) + "\n";
}

// ---- train ----------------------------------------------------------------

void RunTrain(Flags& f, std::ostream& out) {
  const std::string kind = f.GetString("problem", "quadratic");
  const size_t dim = f.GetUint("dim", 4);
  const double noise_std = f.GetDouble("noise-std", 0.0);
  const uint64_t seed = f.GetUint("seed");

  Problem problem = [&] {
    if (kind == "quadratic") return Problem::Quadratic(dim, noise_std, seed);
    if (kind == "symmetric") {
      const double value = f.GetDouble("symmetric-value", 3.0);
      return Problem::SymmetricQuadratic(dim, value, noise_std, seed);
    }
    if (kind == "logistic") return Problem::Logistic(dim, noise_std, seed);
    throw ValidationError(
        "--problem must be one of quadratic, symmetric, logistic");
  }();

  TrainingConfig cfg;
  cfg.seed = seed;
  const std::string mechanism = f.GetString("mechanism", "none");
  if (mechanism == "none") {
    cfg.mechanism = PrivacyMechanism::kNone;
  } else if (mechanism == "blogs") {
    cfg.mechanism = PrivacyMechanism::kBlogs;
  } else if (mechanism == "gaussian") {
    cfg.mechanism = PrivacyMechanism::kGaussian;
  } else {
    throw ValidationError("--mechanism must be one of none, blogs, gaussian");
  }
  cfg.steps = f.GetUint("steps");
  const std::string lr = f.GetString("lr", "0.1");
  if (lr == "optimal") {
    cfg.learning_rate = std::nullopt;
  } else {
    try {
      size_t used = 0;
      cfg.learning_rate = std::stod(lr, &used);
      if (used != lr.size()) throw std::invalid_argument(lr);
    } catch (const std::exception&) {
      throw ValidationError("--lr must be a number or 'optimal'");
    }
  }
  cfg.clip_value =
      f.GetDouble("clip", std::numeric_limits<double>::infinity());
  if (f.Has("blocks")) cfg.block_sizes = f.GetSizeList("blocks");
  cfg.num_groups = f.GetUint("groups", 1);
  cfg.noise_multiplier = f.GetDouble("noise-multiplier", 0.0);
  cfg.grad_bound = f.GetDouble("G", 1.0);
  cfg.target_epsilon = f.GetDouble("epsilon", 1.0);
  cfg.delta = f.GetDouble("delta", 1e-5);
  cfg.bound_delta = f.GetDouble("bound-delta", 0.1);

  const Trajectory traj = Run(problem, cfg);

  std::ostringstream csv;
  csv << "step,loss,dist,eps\n";
  for (const auto& rec : traj.records) {
    csv << rec.step << ',' << FormatDouble(rec.loss) << ','
        << FormatDouble(rec.distance) << ',' << FormatDouble(rec.epsilon_spent)
        << '\n';
  }
  Emit(f.Has("out") ? f.GetPath("out") : "", csv.str(), out);

  Json summary = {{"final_loss", traj.records.back().loss},
                  {"averaged_loss", traj.averaged_loss},
                  {"optimal_loss", traj.optimal_loss},
                  {"learning_rate", traj.learning_rate},
                  {"block_sizes", traj.block_sizes},
                  {"epsilon_spent", traj.records.back().epsilon_spent}};
  if (cfg.steps > 0) {
    summary["report"] = BoundReportToJson(
        CompareToBound(traj, ConvergenceInputsFor(problem, cfg, traj)));
  }
  summary["inputs"] = f.inputs;
  Emit(f.Has("json-out") ? f.GetPath("json-out") : "",
       DumpJson(summary) + "\n", out);
}

// ---- oracle ---------------------------------------------------------------

std::string RunOracle(Flags& f) {
  const auto values = f.GetDoubleList("gradient");
  const size_t beta = f.GetUint("beta");
  const GradientVector g = f.Has("shape")
                               ? GradientVector(values, ParseShape(f.GetString("shape")))
                               : GradientVector(values);
  const ShuffleDistribution dist = EnumerateBlockShuffles(g, beta);
  Json outcomes = Json::array();
  for (const auto& [components, p] : dist.outcomes) {
    outcomes.push_back({{"components", components}, {"probability", p}});
  }
  const size_t m = NumBlocks(g.size(), beta);
  size_t perms = 1;
  for (size_t k = 2; k <= m; ++k) perms *= k;
  const Json out = {{"num_blocks", m},
                    {"num_permutations", perms},
                    {"outcomes", outcomes},
                    {"inputs", f.inputs}};
  return DumpJson(out, 2) + "\n";
}

}  // namespace

int RunCli(std::span<const std::string> args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"DP-BloGS block-wise gradient shuffling toolkit", "dpblogs"};
  app.require_subcommand(1);
  app.allow_extras(false);

  auto* optimize = app.add_subcommand(
      "optimize", "choose per-group block sizes for a target budget");
  Flags optimize_flags(optimize, "optimize");
  AddAccountantFlags(optimize_flags);

  auto* compose =
      app.add_subcommand("compose", "composition and amplification calculators");
  Flags compose_flags(compose, "compose");
  compose_flags.String("mode", "calculator to run");
  compose_flags.String("bound-mode", "max | two-sided | sampled");
  for (const char* name :
       {"epsilon", "delta", "delta-prime", "q", "epsilon-total",
        "epsilon-spent", "epsilon-prime", "delta-star", "c-max"}) {
    compose_flags.Double(name, "");
  }
  for (const char* name : {"t", "step", "beta-max", "d"}) {
    compose_flags.Uint(name, "");
  }
  compose_flags.DoubleList("eps-list", "comma separated epsilons");
  compose_flags.DoubleList("delta-list", "comma separated deltas");
  compose_flags.String("json-out", "write the JSON result here");

  auto* shuffle =
      app.add_subcommand("shuffle", "privatize one step of gradients");
  Flags shuffle_flags(shuffle, "shuffle");
  AddAccountantFlags(shuffle_flags);
  shuffle_flags.String("gradients", "gradient CSV, one row per group");
  shuffle_flags.String("shapes", "JSON array with one shape per row");
  shuffle_flags.String("out", "privatized CSV path (default stdout)");
  shuffle_flags.Uint("seed", "random seed (required)");

  auto* bounds = app.add_subcommand("bounds", "closed-form bound evaluators");
  Flags bounds_flags(bounds, "bounds");
  bounds_flags.String("which", "comma separated evaluator names");
  for (const char* name :
       {"var-g", "clip", "min-gap-sq", "mi", "sensitivity", "utility",
        "epsilon", "delta", "eps-t", "r0", "g", "sigma", "l", "eta",
        "rel-tol"}) {
    bounds_flags.Double(name, "");
  }
  for (const char* name : {"beta", "d", "t", "seed", "max-dim", "per-shape"}) {
    bounds_flags.Uint(name, "");
  }
  bounds_flags.UintList("dims", "comma separated group dimensions");
  bounds_flags.UintList("betas", "comma separated block sizes");
  bounds_flags.String("json-out", "write the JSON result here");

  auto* train = app.add_subcommand("train", "toy SGD with privatized gradients");
  Flags train_flags(train, "train");
  train_flags.String("problem", "quadratic | symmetric | logistic");
  train_flags.String("mechanism", "none | blogs | gaussian");
  train_flags.String("lr", "learning rate, or 'optimal'");
  for (const char* name :
       {"noise-std", "clip", "noise-multiplier", "G", "epsilon", "delta",
        "bound-delta", "symmetric-value"}) {
    train_flags.Double(name, "");
  }
  for (const char* name : {"dim", "steps", "groups", "seed"}) {
    train_flags.Uint(name, "");
  }
  train_flags.UintList("blocks", "comma separated block sizes per group");
  train_flags.String("out", "trajectory CSV path (default stdout)");
  train_flags.String("json-out", "summary JSON path (default stdout)");

  auto* oracle =
      app.add_subcommand("oracle", "exact block-shuffle output distribution");
  Flags oracle_flags(oracle, "oracle");
  oracle_flags.DoubleList("gradient", "comma separated components");
  oracle_flags.Uint("beta", "block size");
  oracle_flags.String("shape", "JSON shape array");
  oracle_flags.String("json-out", "write the JSON result here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (optimize->parsed()) {
      const std::string text = RunOptimize(optimize_flags);
      Emit(optimize_flags.Has("json-out") ? optimize_flags.GetPath("json-out")
                                          : "",
           text, out);
    } else if (compose->parsed()) {
      const std::string text = RunCompose(compose_flags);
      Emit(compose_flags.Has("json-out") ? compose_flags.GetPath("json-out")
                                         : "",
           text, out);
    } else if (shuffle->parsed()) {
      RunShuffle(shuffle_flags, out);
    } else if (bounds->parsed()) {
      const std::string text = RunBounds(bounds_flags);
      Emit(bounds_flags.Has("json-out") ? bounds_flags.GetPath("json-out") : "",
           text, out);
    } else if (train->parsed()) {
      RunTrain(train_flags, out);
    } else if (oracle->parsed()) {
      const std::string text = RunOracle(oracle_flags);
      Emit(oracle_flags.Has("json-out") ? oracle_flags.GetPath("json-out") : "",
           text, out);
    }
  } catch (const NumericDomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumericDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace dpblogs
