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

// Private optimizers over the simplex (and simplex x ball):
//
//  * NoisyFrankWolfe: report-noisy-min vertex selection on grad F~^lambda,
//    step 3 / (k + 2).
//  * NoisyMirrorDescent: Gaussian-perturbed gradients, p-norm prox steps with
//    p = 1 + 1/log(m), averaged iterate.
//  * PrivateStationaryFrankWolfe: joint Frank-Wolfe on a product domain
//    Q x B(R) for smooth nonconvex objectives, returning the iterate with the
//    smallest noisy stationarity-gap estimate.

#ifndef DPADAPT_OPTIMIZERS_H_
#define DPADAPT_OPTIMIZERS_H_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "dpadapt/discrepancy.h"
#include "dpadapt/mechanisms.h"

namespace dpadapt {

// One row of an optimizer trace. Fields an optimizer does not define are NaN
// (gaps) or -1 (selected_vertex).
struct IterationRecord {
  int k = 0;
  double objective = 0.0;
  double gap_q = 0.0;
  double gap_w = 0.0;
  long selected_vertex = -1;
};
using Trace = std::vector<IterationRecord>;

// Header `k,objective,gap_q,gap_w,selected_vertex`, LF line endings,
// shortest round-trip decimal floats.
void WriteTraceCsv(const Trace& trace, std::ostream& out);

struct FWConfig {
  int iterations = 1000;
  double mu = 1.0;
  double lambda = 0.0;
  PrivacyBudget budget;
  // When set, replaces the calibrated Laplace scale (0 = non-private).
  std::optional<double> sigma_override;
  // Return q_K instead of the last computed iterate q_{K+1}.
  bool return_penultimate = false;
};

struct FWResult {
  WeightVector q;
  double sigma = 0.0;
  Trace trace;
};

// Starts at the uniform weights.
FWResult NoisyFrankWolfe(const DiscrepancyModel& model, const FWConfig& cfg,
                         RandomStream& rng);

struct MDConfig {
  int iterations = 1000;
  double mu = 1.0;
  double lambda = 0.0;
  PrivacyBudget budget;
  double p = 0.0;    // 0 selects 1 + 1/log(m)
  double eta = 0.0;  // 0 selects (2 / (r_hat^2 + lambda)) sqrt(log(m) / K)
  std::optional<double> sigma_override;
};

struct MDResult {
  WeightVector q;  // average of q_1..q_K
  WeightVector last;
  double sigma = 0.0;
  double p = 0.0;
  double eta = 0.0;
  Trace trace;
};

// Starts at the uniform weights. With m == 1 the simplex is a point and the
// loop is skipped.
MDResult NoisyMirrorDescent(const DiscrepancyModel& model, const MDConfig& cfg,
                            RandomStream& rng);

// argmin over the simplex of <g, q - center> + ||q - center||_p^2 / (eta (p-1)).
// Exact for every p > 1: the KKT system is reduced to two scalar equations
// (a simplex multiplier and the norm scale) solved by safeguarded root
// finding. Throws ConvergenceError when the Frank-Wolfe gap of the result
// exceeds 1e-9 (relative to 1 + ||g||_inf).
WeightVector PnormProx(const WeightVector& center, std::span<const double> g,
                       double eta, double p);

// Objective minimized by PnormProx, for diagnostics and tests.
double PnormProxObjective(std::span<const double> center,
                          std::span<const double> g, double eta, double p,
                          std::span<const double> q);

// Constants of an objective on Q x W, Q polyhedral with l1 diameter diam_q,
// W an l2 ball with diameter diam_w.
struct SmoothnessProfile {
  double gamma_q = 0.0;   // Lipschitz in q w.r.t. l1
  double gamma_w = 0.0;   // Lipschitz in w w.r.t. l2
  double mu_q = 0.0;      // smoothness in q w.r.t. l1
  double mu_w = 0.0;      // smoothness in w w.r.t. l2
  double gamma_qw = 0.0;  // ||grad_q f(q, w) - grad_q f(q, w')||_inf / ||w - w'||_2
  double diam_q = 0.0;
  double diam_w = 0.0;
  double tau_q = 0.0;     // l_inf sensitivity of grad_q
  double tau_w = 0.0;     // l2 sensitivity of grad_w
};

// The vertex set of the q-domain, either the standard simplex or an explicit
// list of points.
class VertexSet {
 public:
  static VertexSet Simplex(std::size_t m);
  static VertexSet Explicit(std::vector<std::vector<double>> vertices);

  std::size_t count() const;
  std::size_t dim() const { return dim_; }
  double Dot(std::span<const double> g, std::size_t j) const;
  // q <- (1 - eta) q + eta v_j.
  void Blend(std::span<double> q, std::size_t j, double eta) const;
  std::vector<double> Centroid() const;

 private:
  std::size_t dim_ = 0;
  bool simplex_ = true;
  std::vector<std::vector<double>> explicit_;
};

struct ProductObjective {
  using GradFn = std::function<std::vector<double>(std::span<const double>,
                                                   std::span<const double>)>;
  using ValueFn =
      std::function<double(std::span<const double>, std::span<const double>)>;

  GradFn grad_q;
  GradFn grad_w;
  ValueFn value;  // optional, only feeds the trace
  VertexSet vertices = VertexSet::Simplex(1);
  std::size_t w_dim = 1;
  double w_radius = 1.0;
  SmoothnessProfile profile;
};

struct StationaryResult {
  std::vector<double> q;  // iterate k* with the smallest gap estimate
  std::vector<double> w;
  double gap_estimate = 0.0;
  int best_iteration = 0;
  std::vector<double> last_q;  // q^K, w^K
  std::vector<double> last_w;
  double sigma_q = 0.0;
  double sigma_w = 0.0;
  Trace trace;
};

// eta = sqrt(2 (D_q gamma_q + D_w gamma_w) /
//            ((D_q^2 mu_q + D_w^2 mu_w + 2 gamma_qw D_q D_w) K)), capped at 1.
double StationaryStepSize(const SmoothnessProfile& profile, int iterations);

// Starts from (centroid of vertices, 0). eta must lie in (0, 1]. The q-path
// draws Laplace noise from q_noise and the w-path Gaussian noise from w_noise;
// tau_w == 0 draws nothing from w_noise.
StationaryResult PrivateStationaryFrankWolfe(const ProductObjective& objective,
                                             const PrivacyBudget& budget,
                                             int iterations, double eta,
                                             RandomStream& q_noise,
                                             RandomStream& w_noise);
// Splits rng into the two noise streams (ids 1 and 2).
StationaryResult PrivateStationaryFrankWolfe(const ProductObjective& objective,
                                             const PrivacyBudget& budget,
                                             int iterations, double eta,
                                             RandomStream& rng);

// Exact stationarity gap max_{v in Q x W} <-grad f(q, w), v - (q, w)>.
double StationarityGap(const ProductObjective& objective,
                       std::span<const double> q, std::span<const double> w);

}  // namespace dpadapt

#endif  // DPADAPT_OPTIMIZERS_H_
