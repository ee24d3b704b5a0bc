//
// Copyright 2026 The dpadapt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dpadapt/pipeline.h"

#include <cmath>

#include "dpadapt/error.h"
#include "dpadapt/linalg.h"

namespace dpadapt {
namespace {

void CheckOptions(const LabeledSample& source, const AdaptationOptions& o) {
  source.Validate();
  if (!(o.lambda_bound > 0.0) || !std::isfinite(o.lambda_bound)) {
    throw InvalidParameter("Lambda must be positive and finite");
  }
  if (!(o.radius > 0.0) || !std::isfinite(o.radius)) {
    throw InvalidParameter("radius must be positive and finite");
  }
  if (o.iterations && *o.iterations < 1) {
    throw InvalidParameter("iteration count must be >= 1");
  }
  if (o.mu && (!(*o.mu > 0.0) || !std::isfinite(*o.mu))) {
    throw InvalidParameter("mu must be positive and finite");
  }
  if (o.eta && !(*o.eta > 0.0 && *o.eta <= 1.0)) {
    throw InvalidParameter("eta must lie in (0, 1]");
  }
}

void FinishResult(const DiscrepancyModel& model, const LabeledSample& source,
                  const AdaptationOptions& o, AdaptationResult& result) {
  result.spectral_norm = SpectralNorm(WeightMatrix(model, result.q_hat));
  result.discrepancy_exact =
      4.0 * o.lambda_bound * o.lambda_bound * result.spectral_norm;
  result.bound_terms = BoundReport(result, source, model.n(), o.lambda_bound,
                                   o.radius, o.beta);
}

}  // namespace

std::string MethodName(Method method) {
  switch (method) {
    case Method::kTwoStageFrankWolfe:
      return "two-stage-fw";
    case Method::kTwoStageMirrorDescent:
      return "two-stage-md";
    case Method::kSingleStage:
      return "single-stage";
  }
  return "unknown";
}

Method ParseMethod(const std::string& name) {
  if (name == "two-stage-fw") return Method::kTwoStageFrankWolfe;
  if (name == "two-stage-md") return Method::kTwoStageMirrorDescent;
  if (name == "single-stage") return Method::kSingleStage;
  throw InvalidParameter("unknown method '" + name +
                         "' (expected two-stage-fw, two-stage-md or "
                         "single-stage)");
}

double LabelBound(const LabeledSample& source) {
  double y = 0.0;
  for (double v : source.labels) y = std::max(y, std::abs(v));
  return y;
}

AdaptationResult Adapt(const LabeledSample& source, const PrivateSample& target,
                       const AdaptationOptions& options, RandomStream& rng) {
  return options.method == Method::kSingleStage
             ? SingleStage(source, target, options, rng)
             : TwoStage(source, target, options, rng);
}

AdaptationResult TwoStage(const LabeledSample& source,
                          const PrivateSample& target,
                          const AdaptationOptions& o, RandomStream& rng) {
  CheckOptions(source, o);
  const DiscrepancyModel model = BuildModel(source.points, target, o.radius);
  const ProblemScale s = ProblemScale::Of(model);
  AdaptationResult result;

  if (o.method == Method::kTwoStageFrankWolfe) {
    FWConfig cfg;
    cfg.budget = o.budget;
    cfg.lambda = o.reg;
    cfg.iterations = o.iterations
                         ? *o.iterations
                         : DefaultFrankWolfeParams(model, o.budget, o.beta)
                               .iterations;
    cfg.mu = o.mu ? *o.mu : FrankWolfeMuFormula(s, cfg.iterations);
    FWResult fw = NoisyFrankWolfe(model, cfg, rng);
    result.q_hat = std::move(fw.q);
    result.trace = std::move(fw.trace);
    result.sigma = fw.sigma;
    result.iterations = cfg.iterations;
    result.mu = cfg.mu;
    result.eta = 3.0 / (cfg.iterations + 2.0);
  } else if (o.method == Method::kTwoStageMirrorDescent) {
    MDConfig cfg;
    cfg.budget = o.budget;
    cfg.lambda = o.reg;
    if (o.budget.noiseless()) {
      cfg.iterations = o.iterations.value_or(kNoiselessIterations);
      cfg.mu = o.mu ? *o.mu : FrankWolfeMuFormula(s, cfg.iterations);
    } else {
      cfg.mu = o.mu ? *o.mu : MirrorDescentMuFormula(s, o.budget, o.beta, o.reg);
      cfg.iterations =
          o.iterations ? *o.iterations
                       : RoundIterations(MirrorDescentIterationFormula(
                             s, o.budget, o.beta, o.reg, cfg.mu));
    }
    cfg.eta = o.eta.value_or(0.0);
    MDResult md = NoisyMirrorDescent(model, cfg, rng);
    result.q_hat = std::move(md.q);
    result.trace = std::move(md.trace);
    result.sigma = md.sigma;
    result.iterations = cfg.iterations;
    result.mu = cfg.mu;
    result.eta = md.eta;
  } else {
    throw InvalidParameter("TwoStage called with a single-stage method");
  }

  RidgeOptions ridge = o.ridge;
  ridge.norm_bound = o.lambda_bound;
  result.hypothesis = WeightedRidge(source, result.q_hat, ridge);
  FinishResult(model, source, o, result);
  return result;
}

SmoothnessProfile SingleStageProfile(const DiscrepancyModel& model,
                                     double lambda_bound, double label_bound,
                                     double mu) {
  const double r = model.r();
  const double rh = model.r_hat();
  const double lam2 = lambda_bound * lambda_bound;
  const double reach = lambda_bound * rh + label_bound;
  SmoothnessProfile p;
  p.tau_q = 8.0 * lam2 * mu * r * r * rh * rh / static_cast<double>(model.n());
  p.tau_w = 0.0;
  p.gamma_q = reach * reach + 4.0 * lam2 * rh * rh;
  p.gamma_w = 2.0 * reach * rh;
  p.mu_q = 4.0 * lam2 * mu * rh * rh * rh * rh;
  p.mu_w = rh * rh;
  p.gamma_qw = 2.0 * rh * reach;
  p.diam_q = 2.0;
  p.diam_w = 2.0 * lambda_bound;
  return p;
}

ProductObjective SingleStageObjective(const DiscrepancyModel& model,
                                      const LabeledSample& source,
                                      double lambda_bound, double mu) {
  const double scale = 4.0 * lambda_bound * lambda_bound;
  const std::size_t m = source.size();
  const std::size_t d = source.dim();
  auto residuals = [&source, m](std::span<const double> w) {
    std::vector<double> res(m);
    for (std::size_t i = 0; i < m; ++i) {
      res[i] = Dot(w, source.points.row(i)) - source.labels[i];
    }
    return res;
  };
  ProductObjective obj;
  obj.grad_q = [&model, residuals, scale, mu](std::span<const double> q,
                                              std::span<const double> w) {
    std::vector<double> g = TildeFGradient(model, q, mu, 0.0);
    const std::vector<double> res = residuals(w);
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] = res[i] * res[i] + scale * g[i];
    }
    return g;
  };
  obj.grad_w = [&source, residuals, d](std::span<const double> q,
                                       std::span<const double> w) {
    const std::vector<double> res = residuals(w);
    std::vector<double> g(d, 0.0);
    for (std::size_t i = 0; i < res.size(); ++i) {
      const auto x = source.points.row(i);
      const double c = 2.0 * q[i] * res[i];
      for (std::size_t a = 0; a < d; ++a) g[a] += c * x[a];
    }
    return g;
  };
  obj.value = [&model, residuals, scale, mu](std::span<const double> q,
                                             std::span<const double> w) {
    const std::vector<double> res = residuals(w);
    double loss = 0.0;
    for (std::size_t i = 0; i < res.size(); ++i) loss += q[i] * res[i] * res[i];
    return loss + scale * TildeF(model, q, mu, 0.0);
  };
  obj.vertices = VertexSet::Simplex(m);
  obj.w_dim = d;
  obj.w_radius = lambda_bound;
  return obj;
}

AdaptationResult SingleStage(const LabeledSample& source,
                             const PrivateSample& target,
                             const AdaptationOptions& o, RandomStream& rng) {
  CheckOptions(source, o);
  const DiscrepancyModel model = BuildModel(source.points, target, o.radius);
  const ProblemScale s = ProblemScale::Of(model);
  const double label_bound = LabelBound(source);

  int iterations = 0;
  double mu = 0.0;
  if (o.budget.noiseless()) {
    iterations = o.iterations.value_or(kNoiselessIterations);
    mu = o.mu ? *o.mu : FrankWolfeMuFormula(s, iterations);
  } else {
    mu = o.mu ? *o.mu : SingleStageMuFormula(s, o.budget);
    iterations = o.iterations
                     ? *o.iterations
                     : RoundIterations(SingleStageIterationFormula(
                           s, o.budget, o.beta, o.lambda_bound, label_bound, mu));
  }
  const double eta =
      o.eta ? *o.eta
            : std::min(1.0, SingleStageStepFormula(s, o.lambda_bound,
                                                   label_bound, mu, iterations));

  ProductObjective obj = SingleStageObjective(model, source, o.lambda_bound, mu);
  obj.profile = SingleStageProfile(model, o.lambda_bound, label_bound, mu);
  StationaryResult run =
      PrivateStationaryFrankWolfe(obj, o.budget, iterations, eta, rng);

  AdaptationResult result;
  result.q_hat = WeightVector(run.q);
  result.hypothesis = LinearHypothesis{run.w, o.lambda_bound};
  result.trace = std::move(run.trace);
  result.iterations = iterations;
  result.mu = mu;
  result.eta = eta;
  result.sigma = run.sigma_q;
  result.last_q = std::move(run.last_q);
  result.last_w = std::move(run.last_w);
  result.best_iteration = run.best_iteration;
  FinishResult(model, source, o, result);
  return result;
}

BoundTerms BoundReport(const AdaptationResult& result,
                       const LabeledSample& source, std::size_t target_size,
                       double lambda_bound, double radius, double beta) {
  if (target_size < 1) throw InvalidParameter("bound report needs n >= 1");
  if (!(beta > 0.0 && beta < 1.0)) {
    throw InvalidParameter("beta must lie in (0, 1)");
  }
  const double n = static_cast<double>(target_size);
  const double reach = lambda_bound * radius + LabelBound(source);
  const double loss_cap = reach * reach;
  BoundTerms t;
  t.weighted_empirical_loss =
      WeightedLoss(result.hypothesis, source, result.q_hat);
  t.discrepancy_exact = result.discrepancy_exact;
  t.rademacher_term =
      2.0 * loss_cap * std::sqrt(radius * radius * lambda_bound * lambda_bound / n);
  t.confidence_term = loss_cap * std::sqrt(std::log(1.0 / beta) / (2.0 * n));
  return t;
}

}  // namespace dpadapt
