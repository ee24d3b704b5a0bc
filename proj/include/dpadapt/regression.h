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

#ifndef DPADAPT_REGRESSION_H_
#define DPADAPT_REGRESSION_H_

#include <span>
#include <vector>

#include "dpadapt/points.h"

namespace dpadapt {

// x -> <w, x>, optionally constrained to ||w||_2 <= norm_bound.
struct LinearHypothesis {
  std::vector<double> w;
  double norm_bound = 1.0;

  double Predict(std::span<const double> x) const;
};

// Sentinel for WeightedRidge: 1e-6 * tr(X^T Q X) / d.
inline constexpr double kAutoRidge = -1.0;

struct RidgeOptions {
  double ridge = kAutoRidge;
  double norm_bound = 1.0;
  bool project_to_ball = false;
};

// Solves (X^T Q X + ridge I) w = X^T Q y through an eigendecomposition.
// ridge == 0 with a singular system throws NumericFailure (rank deficient).
LinearHypothesis WeightedRidge(const LabeledSample& sample,
                               std::span<const double> q,
                               const RidgeOptions& options = {});

// Radial projection onto the ball of radius `radius`.
std::vector<double> ProjectToBall(std::span<const double> w, double radius);

double MeanSquaredError(const LinearHypothesis& h, const LabeledSample& sample);
double WeightedLoss(const LinearHypothesis& h, const LabeledSample& sample,
                    std::span<const double> q);

}  // namespace dpadapt

#endif  // DPADAPT_REGRESSION_H_
