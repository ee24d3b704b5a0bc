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

#include <cmath>
#include <vector>

#include "dpadapt/error.h"
#include "dpadapt/linalg.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpadapt {
namespace {

using testing::RandomBallPoints;
using testing::RandomSimplexPoint;

LabeledSample RandomSample(std::size_t m, std::size_t d, RandomStream& rng) {
  LabeledSample s{RandomBallPoints(m, d, 1.0, rng), std::vector<double>(m)};
  for (double& y : s.labels) y = rng.NextGaussian();
  return s;
}

double RidgeObjective(const LabeledSample& s, std::span<const double> q,
                      std::span<const double> w, double ridge) {
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double r = Dot(w, s.points.row(i)) - s.labels[i];
    total += q[i] * r * r;
  }
  return total + ridge * Dot(w, w);
}

TEST(WeightedRidgeTest, InterpolatesSinglePoint) {
  const LabeledSample s{PointSet::FromRows({{1.0}}), {2.0}};
  const std::vector<double> q = {1.0};
  RidgeOptions opts;
  opts.ridge = 0.0;
  const LinearHypothesis h = WeightedRidge(s, q, opts);
  EXPECT_NEAR(h.w[0], 2.0, 1e-15);
  EXPECT_NEAR(h.Predict(std::vector<double>{1.0}), 2.0, 1e-15);
}

TEST(WeightedRidgeTest, ZeroLabelsGiveZeroWeights) {
  RandomStream rng(1);
  LabeledSample s = RandomSample(20, 4, rng);
  for (double& y : s.labels) y = 0.0;
  const std::vector<double> q = RandomSimplexPoint(20, rng);
  for (double ridge : {kAutoRidge, 0.0, 0.5}) {
    RidgeOptions opts;
    opts.ridge = ridge;
    for (double v : WeightedRidge(s, q, opts).w) EXPECT_EQ(v, 0.0);
  }
}

TEST(WeightedRidgeTest, NormalEquationResidualAndLocalOptimality) {
  RandomStream rng(2);
  const LabeledSample s = RandomSample(30, 5, rng);
  const std::vector<double> q = RandomSimplexPoint(30, rng);
  RidgeOptions opts;
  opts.ridge = 0.01;
  const LinearHypothesis h = WeightedRidge(s, q, opts);

  std::vector<double> lhs(5, 0.0);
  std::vector<double> rhs(5, 0.0);
  for (std::size_t i = 0; i < 30; ++i) {
    const auto x = s.points.row(i);
    const double pred = Dot(h.w, x);
    for (std::size_t a = 0; a < 5; ++a) {
      lhs[a] += q[i] * pred * x[a];
      rhs[a] += q[i] * s.labels[i] * x[a];
    }
  }
  for (std::size_t a = 0; a < 5; ++a) lhs[a] += 0.01 * h.w[a];
  std::vector<double> diff(5);
  for (std::size_t a = 0; a < 5; ++a) diff[a] = lhs[a] - rhs[a];
  EXPECT_LE(Norm2(diff), 1e-8 * Norm2(rhs));

  const double at = RidgeObjective(s, q, h.w, 0.01);
  for (int t = 0; t < 10000; ++t) {
    std::vector<double> w = h.w;
    for (double& v : w) v += 1e-3 * rng.NextGaussian();
    ASSERT_LE(at, RidgeObjective(s, q, w, 0.01) + 1e-15);
  }
}

TEST(WeightedRidgeTest, LargerRidgeNeverGrowsNorm) {
  RandomStream rng(3);
  for (int t = 0; t < 20; ++t) {
    const LabeledSample s = RandomSample(15, 4, rng);
    const std::vector<double> q = RandomSimplexPoint(15, rng);
    double previous = std::numeric_limits<double>::infinity();
    for (double ridge : {1e-6, 1e-3, 0.1, 1.0, 10.0}) {
      RidgeOptions opts;
      opts.ridge = ridge;
      const double norm = Norm2(WeightedRidge(s, q, opts).w);
      EXPECT_LE(norm, previous * (1 + 1e-12));
      previous = norm;
    }
  }
}

TEST(WeightedRidgeTest, RankDeficientWithoutRidgeFails) {
  const LabeledSample s{PointSet::FromRows({{1.0, 0.0}, {2.0, 0.0}}), {1.0, 2.0}};
  const std::vector<double> q = {0.5, 0.5};
  RidgeOptions opts;
  opts.ridge = 0.0;
  EXPECT_THROW(WeightedRidge(s, q, opts), NumericFailure);
  opts.ridge = kAutoRidge;
  const LinearHypothesis h = WeightedRidge(s, q, opts);
  EXPECT_NEAR(h.w[0], 1.0, 1e-5);
  EXPECT_EQ(h.w[1], 0.0);
}

TEST(WeightedRidgeTest, ZeroWeightPointsAreIgnored) {
  const LabeledSample s{PointSet::FromRows({{1.0}, {1.0}}), {3.0, -7.0}};
  const std::vector<double> q = {1.0, 0.0};
  RidgeOptions opts;
  opts.ridge = 0.0;
  EXPECT_NEAR(WeightedRidge(s, q, opts).w[0], 3.0, 1e-15);
}

TEST(WeightedRidgeTest, BallProjection) {
  const LabeledSample s{PointSet::FromRows({{1.0, 0.0}, {0.0, 1.0}}),
                        {3.0, 4.0}};
  const std::vector<double> q = {0.5, 0.5};
  RidgeOptions opts;
  opts.ridge = 0.0;
  opts.norm_bound = 1.0;
  opts.project_to_ball = true;
  const LinearHypothesis h = WeightedRidge(s, q, opts);
  EXPECT_NEAR(h.w[0], 0.6, 1e-15);
  EXPECT_NEAR(h.w[1], 0.8, 1e-15);
  EXPECT_EQ(h.norm_bound, 1.0);
}

TEST(WeightedRidgeTest, RejectsMismatchedInput) {
  const LabeledSample s{PointSet::FromRows({{1.0}}), {1.0}};
  const std::vector<double> q = {0.5, 0.5};
  EXPECT_THROW(WeightedRidge(s, q), InvalidInput);
  const LabeledSample bad{PointSet::FromRows({{1.0}}), {1.0, 2.0}};
  EXPECT_THROW(WeightedRidge(bad, std::vector<double>{1.0}), InvalidInput);
}

TEST(ProjectToBallTest, InsideUnchangedAndIdempotent) {
  const std::vector<double> inside = {0.3, 0.4};
  EXPECT_EQ(ProjectToBall(inside, 1.0), inside);
  const std::vector<double> outside = {3.0, 4.0};
  const std::vector<double> once = ProjectToBall(outside, 2.0);
  EXPECT_NEAR(Norm2(once), 2.0, 1e-15);
  EXPECT_EQ(ProjectToBall(once, 2.0), once);
}

TEST(LossTest, Examples) {
  const LabeledSample s{PointSet::FromRows({{1.0}, {2.0}}), {2.0, 4.0}};
  const LinearHypothesis perfect{{2.0}, 5.0};
  EXPECT_EQ(MeanSquaredError(perfect, s), 0.0);
  const LabeledSample ones{PointSet::FromRows({{1.0}, {-3.0}}), {1.0, 1.0}};
  const LinearHypothesis zero{{0.0}, 1.0};
  EXPECT_EQ(MeanSquaredError(zero, ones), 1.0);
  EXPECT_EQ(WeightedLoss(zero, ones, std::vector<double>{0.25, 0.75}), 1.0);
  EXPECT_THROW(MeanSquaredError(zero, LabeledSample{PointSet(1, {}), {}}),
               InvalidInput);
}

TEST(LossTest, MatchesDirectSums) {
  RandomStream rng(4);
  const LabeledSample s = RandomSample(25, 3, rng);
  const LinearHypothesis h{{0.3, -0.2, 0.9}, 1.0};
  const std::vector<double> q = RandomSimplexPoint(25, rng);
  double mse = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < 25; ++i) {
    const auto x = s.points.row(i);
    const double r = 0.3 * x[0] - 0.2 * x[1] + 0.9 * x[2] - s.labels[i];
    mse += r * r;
    weighted += q[i] * r * r;
  }
  EXPECT_NEAR(MeanSquaredError(h, s), mse / 25, 1e-12);
  EXPECT_NEAR(WeightedLoss(h, s, q), weighted, 1e-12);
}

}  // namespace
}  // namespace dpadapt
