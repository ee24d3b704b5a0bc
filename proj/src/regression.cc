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

#include "dpadapt/regression.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpadapt/error.h"
#include "dpadapt/linalg.h"

namespace dpadapt {
namespace {

// Relative eigenvalue floor below which an unregularized system is singular.
constexpr double kRankTol = 1e-12;

void CheckWeights(const LabeledSample& sample, std::span<const double> q) {
  sample.Validate();
  if (sample.size() == 0) throw InvalidInput("regression: empty sample");
  if (q.size() != sample.size()) {
    throw InvalidInput("regression: " + std::to_string(q.size()) +
                       " weights for " + std::to_string(sample.size()) +
                       " points");
  }
  for (double v : q) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidInput("regression: weights must be finite and nonnegative");
    }
  }
}

}  // namespace

double LinearHypothesis::Predict(std::span<const double> x) const {
  return Dot(w, x);
}

LinearHypothesis WeightedRidge(const LabeledSample& sample,
                               std::span<const double> q,
                               const RidgeOptions& options) {
  CheckWeights(sample, q);
  const std::size_t d = sample.dim();
  SymMatrix gram(d);
  std::vector<double> rhs(d, 0.0);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (q[i] == 0.0) continue;
    const auto x = sample.points.row(i);
    gram.AddOuter(x, q[i]);
    for (std::size_t a = 0; a < d; ++a) rhs[a] += q[i] * sample.labels[i] * x[a];
  }
  double ridge = options.ridge;
  if (ridge == kAutoRidge) {
    ridge = 1e-6 * gram.Trace() / static_cast<double>(d);
  } else if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
    throw InvalidParameter("ridge must be nonnegative (or auto)");
  }
  gram.AddScaled(SymMatrix::Identity(d), ridge);

  const Eigensystem eig = Eigh(gram);
  const double top = std::max(std::abs(eig.values.front()), 1e-300);
  std::vector<double> coef(d, 0.0);
  for (std::size_t k = 0; k < d; ++k) {
    const double lambda = eig.values[k];
    if (!(lambda > 0.0) || (ridge == 0.0 && !(lambda > kRankTol * top))) {
      throw NumericFailure(
          "weighted ridge: rank-deficient system (eigenvalue " +
          std::to_string(lambda) + "); use a positive ridge");
    }
    double proj = 0.0;
    for (std::size_t a = 0; a < d; ++a) proj += eig.vector(a, k) * rhs[a];
    proj /= lambda;
    for (std::size_t a = 0; a < d; ++a) coef[a] += proj * eig.vector(a, k);
  }
  LinearHypothesis h{std::move(coef), options.norm_bound};
  if (options.project_to_ball) h.w = ProjectToBall(h.w, options.norm_bound);
  return h;
}

std::vector<double> ProjectToBall(std::span<const double> w, double radius) {
  if (!(radius > 0.0)) throw InvalidParameter("ball radius must be positive");
  std::vector<double> out(w.begin(), w.end());
  const double norm = Norm2(w);
  if (norm > radius) {
    for (double& v : out) v *= radius / norm;
  }
  return out;
}

double MeanSquaredError(const LinearHypothesis& h,
                        const LabeledSample& sample) {
  sample.Validate();
  if (sample.size() == 0) throw InvalidInput("mse: empty sample");
  double total = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double r = h.Predict(sample.points.row(i)) - sample.labels[i];
    total += r * r;
  }
  return total / static_cast<double>(sample.size());
}

double WeightedLoss(const LinearHypothesis& h, const LabeledSample& sample,
                    std::span<const double> q) {
  CheckWeights(sample, q);
  double total = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double r = h.Predict(sample.points.row(i)) - sample.labels[i];
    total += q[i] * r * r;
  }
  return total;
}

}  // namespace dpadapt
