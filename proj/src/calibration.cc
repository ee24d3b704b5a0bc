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

#include "dpadapt/calibration.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpadapt/discrepancy.h"
#include "dpadapt/error.h"

namespace dpadapt {
namespace {

void CheckBeta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw InvalidParameter("beta must lie in (0, 1)");
  }
}

void CheckLogs(const ProblemScale& s, double beta) {
  if (s.n < 2) {
    throw InvalidParameter(
        "default schedules need at least 2 target points (log n > 0), got " +
        std::to_string(s.n));
  }
  CheckBeta(beta);
}

double LogInvDelta(const PrivacyBudget& b) { return std::log(1.0 / b.delta); }

double Sq(double x) { return x * x; }

}  // namespace

ProblemScale ProblemScale::Of(const DiscrepancyModel& model) {
  return {model.r(), model.r_hat(), model.m(), model.n()};
}

int RoundIterations(double raw) {
  if (std::isnan(raw)) throw InvalidParameter("iteration count is NaN");
  const double clamped =
      std::clamp(std::round(raw), 1.0, static_cast<double>(kMaxIterations));
  return static_cast<int>(clamped);
}

double FrankWolfeSigma(const ProblemScale& s, const PrivacyBudget& b, double mu,
                       int iterations) {
  return 4.0 * mu * Sq(s.r) * Sq(s.r_hat) *
         std::sqrt(2.0 * iterations * LogInvDelta(b)) /
         (static_cast<double>(s.n) * b.epsilon);
}

double MirrorDescentSigma(const ProblemScale& s, const PrivacyBudget& b,
                          double mu, int iterations) {
  return 4.0 * mu * Sq(s.r) * Sq(s.r_hat) *
         std::sqrt(2.0 * iterations * static_cast<double>(s.m) *
                   LogInvDelta(b)) /
         (static_cast<double>(s.n) * b.epsilon);
}

double MirrorDescentStepSize(const ProblemScale& s, double lambda,
                             int iterations) {
  return 2.0 / (Sq(s.r_hat) + lambda) *
         std::sqrt(std::log(static_cast<double>(s.m)) / iterations);
}

double MirrorDescentExponent(std::size_t m) {
  return 1.0 + 1.0 / std::log(static_cast<double>(m));
}

double StationarySigma(double tau, const PrivacyBudget& b, int iterations) {
  return 4.0 * tau * std::sqrt(2.0 * iterations * LogInvDelta(b)) / b.epsilon;
}

double FrankWolfeIterationFormula(const ProblemScale& s, const PrivacyBudget& b,
                                  double beta) {
  CheckLogs(s, beta);
  const double m = static_cast<double>(s.m);
  const double n = static_cast<double>(s.n);
  return std::pow(s.r_hat, 4.0 / 3.0) * std::pow(b.epsilon * n, 2.0 / 3.0) /
         (3.0 * std::pow(s.r, 4.0 / 3.0) * std::cbrt(LogInvDelta(b)) *
          std::pow(std::log(n), 2.0 / 3.0) *
          std::pow(std::log(m * n / beta), 2.0 / 3.0));
}

double FrankWolfeMuFormula(const ProblemScale& s, double iterations) {
  const double mn = static_cast<double>(s.m + s.n);
  return std::sqrt(iterations * std::log(mn) / (8.0 * Sq(Sq(s.r_hat))));
}

double MirrorDescentMuFormula(const ProblemScale& s, const PrivacyBudget& b,
                              double beta, double lambda) {
  CheckBeta(beta);
  const double m = static_cast<double>(s.m);
  const double n = static_cast<double>(s.n);
  return std::sqrt(b.epsilon * n) * std::pow(std::log(m + n), 0.25) /
         (4.0 * s.r * s.r_hat *
          std::sqrt((lambda + Sq(s.r_hat)) * std::log(2.0 * m / beta)) *
          std::pow(m * LogInvDelta(b), 0.25));
}

double MirrorDescentIterationFormula(const ProblemScale& s,
                                     const PrivacyBudget& b, double beta,
                                     double lambda, double mu) {
  CheckBeta(beta);
  const double m = static_cast<double>(s.m);
  const double n = static_cast<double>(s.n);
  return Sq(Sq(s.r_hat) + lambda) * Sq(b.epsilon) * Sq(n) /
         (128.0 * Sq(mu) * Sq(Sq(s.r_hat)) * Sq(Sq(s.r)) * m *
          std::log(2.0 * m / beta) * LogInvDelta(b));
}

double SingleStageIterationFormula(const ProblemScale& s,
                                   const PrivacyBudget& b, double beta,
                                   double lambda_bound, double label_bound,
                                   double mu) {
  CheckBeta(beta);
  const double m = static_cast<double>(s.m);
  const double n = static_cast<double>(s.n);
  return b.epsilon * n * (lambda_bound * s.r_hat + label_bound) *
         std::sqrt(1.0 + 2.0 * mu * Sq(s.r_hat)) /
         (4.0 * lambda_bound * s.r_hat * Sq(s.r) * mu *
          std::log(m * n / beta) * std::sqrt(LogInvDelta(b)));
}

double SingleStageStepFormula(const ProblemScale& s, double lambda_bound,
                              double label_bound, double mu,
                              double iterations) {
  return std::sqrt(2.0) * (lambda_bound * s.r_hat + label_bound) /
         (lambda_bound * s.r_hat *
          std::sqrt((1.0 + 2.0 * mu * Sq(s.r_hat)) * iterations));
}

double SingleStageMuFormula(const ProblemScale& s, const PrivacyBudget& b) {
  return std::pow(b.epsilon * static_cast<double>(s.n), 2.0 / 7.0);
}

Schedule DefaultFrankWolfeParams(const DiscrepancyModel& model,
                                 const PrivacyBudget& budget, double beta) {
  const ProblemScale s = ProblemScale::Of(model);
  CheckLogs(s, beta);
  Schedule out;
  out.iterations = budget.noiseless()
                       ? kNoiselessIterations
                       : RoundIterations(FrankWolfeIterationFormula(s, budget, beta));
  out.mu = FrankWolfeMuFormula(s, out.iterations);
  return out;
}

Schedule DefaultMirrorDescentParams(const DiscrepancyModel& model,
                                    const PrivacyBudget& budget, double beta,
                                    double lambda) {
  const ProblemScale s = ProblemScale::Of(model);
  CheckLogs(s, beta);
  Schedule out;
  if (budget.noiseless()) {
    out.iterations = kNoiselessIterations;
    out.mu = FrankWolfeMuFormula(s, out.iterations);
  } else {
    out.mu = MirrorDescentMuFormula(s, budget, beta, lambda);
    out.iterations = RoundIterations(
        MirrorDescentIterationFormula(s, budget, beta, lambda, out.mu));
  }
  if (s.m >= 2) out.eta = MirrorDescentStepSize(s, lambda, out.iterations);
  return out;
}

Schedule DefaultSingleStageParams(const DiscrepancyModel& model,
                                  const PrivacyBudget& budget, double beta,
                                  double lambda_bound, double label_bound,
                                  double mu) {
  const ProblemScale s = ProblemScale::Of(model);
  CheckLogs(s, beta);
  Schedule out;
  if (budget.noiseless()) {
    out.iterations = kNoiselessIterations;
    out.mu = mu > 0.0 ? mu : FrankWolfeMuFormula(s, out.iterations);
  } else {
    out.mu = mu > 0.0 ? mu : SingleStageMuFormula(s, budget);
    out.iterations = RoundIterations(SingleStageIterationFormula(
        s, budget, beta, lambda_bound, label_bound, out.mu));
  }
  out.eta = std::min(1.0, SingleStageStepFormula(s, lambda_bound, label_bound,
                                                 out.mu, out.iterations));
  return out;
}

}  // namespace dpadapt
