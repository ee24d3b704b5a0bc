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

// Closed-form noise scales, step sizes and default schedules of the three
// private optimizers. This is the only place (epsilon, delta) are turned into
// numbers; every formula is kept verbatim (no tighter accounting).

#ifndef DPADAPT_CALIBRATION_H_
#define DPADAPT_CALIBRATION_H_

#include <cstddef>

#include "dpadapt/mechanisms.h"

namespace dpadapt {

class DiscrepancyModel;

// Data-size quantities the formulas depend on.
struct ProblemScale {
  double r = 1.0;      // domain radius
  double r_hat = 1.0;  // max source norm
  std::size_t m = 1;   // source size
  std::size_t n = 1;   // target size

  static ProblemScale Of(const DiscrepancyModel& model);
};

inline constexpr int kMaxIterations = 1000000;
// Iteration count used by the default schedules when epsilon is infinite
// (the private formulas diverge there).
inline constexpr int kNoiselessIterations = 1000;
inline constexpr double kDefaultBeta = 0.05;

// Rounds to the nearest integer and clamps to [1, kMaxIterations].
int RoundIterations(double raw);

// Laplace scale of noisy Frank-Wolfe:
//   4 mu r^2 r_hat^2 sqrt(2 K log(1/delta)) / (n epsilon).
double FrankWolfeSigma(const ProblemScale& s, const PrivacyBudget& b, double mu,
                       int iterations);
// Gaussian scale of noisy mirror descent:
//   4 mu r^2 r_hat^2 sqrt(2 K m log(1/delta)) / (n epsilon).
double MirrorDescentSigma(const ProblemScale& s, const PrivacyBudget& b,
                          double mu, int iterations);
// (2 / (r_hat^2 + lambda)) sqrt(log(m) / K).
double MirrorDescentStepSize(const ProblemScale& s, double lambda,
                             int iterations);
// 1 + 1 / log(m).
double MirrorDescentExponent(std::size_t m);
// 4 tau sqrt(2 K log(1/delta)) / epsilon.
double StationarySigma(double tau, const PrivacyBudget& b, int iterations);

// Unrounded default-schedule formulas. Each throws InvalidParameter unless
// beta lies in (0, 1); the Frank-Wolfe iteration count also needs n >= 2, as
// do the Default*Params schedules.
//
// K = r_hat^{4/3} (eps n)^{2/3} /
//     (3 r^{4/3} log^{1/3}(1/delta) log^{2/3}(n) log^{2/3}(m n / beta))
double FrankWolfeIterationFormula(const ProblemScale& s, const PrivacyBudget& b,
                                  double beta);
// mu = sqrt(K log(m + n) / (8 r_hat^4))
double FrankWolfeMuFormula(const ProblemScale& s, double iterations);
// mu = sqrt(eps n) log^{1/4}(m + n) /
//      (4 r r_hat sqrt((lambda + r_hat^2) log(2m/beta)) (m log(1/delta))^{1/4})
double MirrorDescentMuFormula(const ProblemScale& s, const PrivacyBudget& b,
                              double beta, double lambda);
// K = (r_hat^2 + lambda)^2 eps^2 n^2 /
//     (128 mu^2 r_hat^4 r^4 m log(2m/beta) log(1/delta))
double MirrorDescentIterationFormula(const ProblemScale& s,
                                     const PrivacyBudget& b, double beta,
                                     double lambda, double mu);
// K = eps n (Lambda r_hat + Y) sqrt(1 + 2 mu r_hat^2) /
//     (4 Lambda r_hat r^2 mu log(m n / beta) sqrt(log(1/delta)))
double SingleStageIterationFormula(const ProblemScale& s,
                                   const PrivacyBudget& b, double beta,
                                   double lambda_bound, double label_bound,
                                   double mu);
// eta = sqrt(2) (Lambda r_hat + Y) / (Lambda r_hat sqrt((1 + 2 mu r_hat^2) K))
double SingleStageStepFormula(const ProblemScale& s, double lambda_bound,
                              double label_bound, double mu, double iterations);
// mu = (eps n)^{2/7} with unit constant.
double SingleStageMuFormula(const ProblemScale& s, const PrivacyBudget& b);

struct Schedule {
  int iterations = 1;
  double mu = 1.0;
  double eta = 0.0;  // only set by schedules that define a step size
};

// K from its formula, then mu from the rounded K.
Schedule DefaultFrankWolfeParams(const DiscrepancyModel& model,
                                 const PrivacyBudget& budget,
                                 double beta = kDefaultBeta);
// mu from its formula, then K from mu; eta from the rounded K.
Schedule DefaultMirrorDescentParams(const DiscrepancyModel& model,
                                    const PrivacyBudget& budget, double beta,
                                    double lambda);
// mu (unless given), K, then eta from the rounded K, clamped to (0, 1].
Schedule DefaultSingleStageParams(const DiscrepancyModel& model,
                                  const PrivacyBudget& budget, double beta,
                                  double lambda_bound, double label_bound,
                                  double mu = 0.0);

}  // namespace dpadapt

#endif  // DPADAPT_CALIBRATION_H_
