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

// End-to-end adaptation. The private target sample is touched only while the
// discrepancy model (its second-moment matrix) is built; everything after that
// works from the model and the public source sample.

#ifndef DPADAPT_PIPELINE_H_
#define DPADAPT_PIPELINE_H_

#include <optional>
#include <string>
#include <vector>

#include "dpadapt/calibration.h"
#include "dpadapt/discrepancy.h"
#include "dpadapt/mechanisms.h"
#include "dpadapt/optimizers.h"
#include "dpadapt/points.h"
#include "dpadapt/regression.h"

namespace dpadapt {

enum class Method { kTwoStageFrankWolfe, kTwoStageMirrorDescent, kSingleStage };

// "two-stage-fw", "two-stage-md", "single-stage".
std::string MethodName(Method method);
// Throws InvalidParameter on an unknown name.
Method ParseMethod(const std::string& name);

struct AdaptationOptions {
  Method method = Method::kTwoStageFrankWolfe;
  double lambda_bound = 1.0;  // Lambda, radius of the hypothesis ball
  double radius = 1.0;        // r, bound on every point norm
  PrivacyBudget budget;
  double beta = kDefaultBeta;
  double reg = 0.0;  // l2 weight on q in the two-stage objective
  std::optional<int> iterations;
  std::optional<double> mu;
  std::optional<double> eta;
  RidgeOptions ridge;
};

struct BoundTerms {
  double weighted_empirical_loss = 0.0;
  double discrepancy_exact = 0.0;
  double rademacher_term = 0.0;
  double confidence_term = 0.0;
  std::string eta_h = "unknown";
};

struct AdaptationResult {
  WeightVector q_hat = WeightVector::Uniform(1);
  LinearHypothesis hypothesis;
  double spectral_norm = 0.0;      // ||M(q_hat)||_2
  double discrepancy_exact = 0.0;  // 4 Lambda^2 ||M(q_hat)||_2
  Trace trace;
  BoundTerms bound_terms;
  // The schedule actually run.
  int iterations = 0;
  double mu = 0.0;
  double eta = 0.0;
  double sigma = 0.0;
  // Single stage only: last iterate and the selected iteration index.
  std::vector<double> last_q;
  std::vector<double> last_w;
  int best_iteration = -1;
};

// Runs `options.method` on (source, target).
AdaptationResult Adapt(const LabeledSample& source, const PrivateSample& target,
                       const AdaptationOptions& options, RandomStream& rng);

// Private discrepancy minimization (Frank-Wolfe or mirror descent), then
// weighted ridge regression on the public source.
AdaptationResult TwoStage(const LabeledSample& source,
                          const PrivateSample& target,
                          const AdaptationOptions& options, RandomStream& rng);

// Private stationary-point Frank-Wolfe on
//   L(q, w) = sum_i q_i (<w, x_i> - y_i)^2 + 4 Lambda^2 F~(q)
// over simplex x ball(Lambda).
AdaptationResult SingleStage(const LabeledSample& source,
                             const PrivateSample& target,
                             const AdaptationOptions& options,
                             RandomStream& rng);

// Objective and constants of the single-stage problem. The callbacks keep
// references to model and source.
ProductObjective SingleStageObjective(const DiscrepancyModel& model,
                                      const LabeledSample& source,
                                      double lambda_bound, double mu);
SmoothnessProfile SingleStageProfile(const DiscrepancyModel& model,
                                     double lambda_bound, double label_bound,
                                     double mu);

// max |y_i| over the source labels.
double LabelBound(const LabeledSample& source);

// Computable terms of the generalization bound, with M = (Lambda r + Y)^2:
// rademacher_term = 2 M sqrt(r^2 Lambda^2 / n),
// confidence_term = M sqrt(log(1/beta) / (2 n)).
BoundTerms BoundReport(const AdaptationResult& result,
                       const LabeledSample& source, std::size_t target_size,
                       double lambda_bound, double radius, double beta);

}  // namespace dpadapt

#endif  // DPADAPT_PIPELINE_H_
