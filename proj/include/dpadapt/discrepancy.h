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

// Weighted discrepancy between a reweighted public source sample and the
// private target sample, for linear hypotheses under the squared loss.
//
// With M0 = (1/n) sum_j t_j t_j^T over the target points and
// M(q) = M0 - sum_i q_i x_i x_i^T over the source points, the discrepancy of
// the reweighting q is exactly 4 Lambda^2 ||M(q)||_2. This header provides
// that exact value together with three smooth surrogates:
//
//   F(q)   = (1/mu) log Tr exp(mu M(q))                   ~ lambda_max(M(q))
//   F~(q)  = (1/mu) log(Tr e^{mu M(q)} + Tr e^{-mu M(q)})  ~ ||M(q)||_2
//   G(q)   = Tr[M(q)^{2p}]^{1/p}                          ~ ||M(q)||_2^2
//
// and their gradients with respect to q. All values are computed from one
// eigendecomposition of M(q); the exponentials are shifted by the dominant
// eigenvalue, so mu * ||M(q)||_2 may be arbitrarily large.

#ifndef DPADAPT_DISCREPANCY_H_
#define DPADAPT_DISCREPANCY_H_

#include <cstddef>
#include <span>
#include <vector>

#include "dpadapt/linalg.h"
#include "dpadapt/points.h"

namespace dpadapt {

// A point of the probability simplex.
class WeightVector {
 public:
  // Clamps entries in [-1e-9, 0) to zero and renormalizes when the sum lies
  // within 1e-6 of one. Anything further off throws InvalidInput.
  explicit WeightVector(std::vector<double> q);

  static WeightVector Uniform(std::size_t m);
  static WeightVector Vertex(std::size_t m, std::size_t j);

  std::size_t size() const { return q_.size(); }
  double operator[](std::size_t i) const { return q_[i]; }
  std::span<const double> values() const { return q_; }
  operator std::span<const double>() const { return q_; }  // NOLINT

 private:
  std::vector<double> q_;
};

// Immutable precomputation shared by every discrepancy evaluation.
class DiscrepancyModel {
 public:
  std::size_t m() const { return source_.size(); }
  std::size_t n() const { return n_; }
  std::size_t dim() const { return source_.dim(); }
  // M0: second-moment matrix of the target sample.
  const SymMatrix& target_moment() const { return target_moment_; }
  const PointSet& source() const { return source_; }
  std::span<const double> source_point(std::size_t i) const {
    return source_.row(i);
  }
  // Domain radius bound r and observed source radius r_hat.
  double r() const { return r_; }
  double r_hat() const { return r_hat_; }

 private:
  friend DiscrepancyModel BuildModel(const PointSet&, const PrivateSample&,
                                     double);
  PointSet source_;
  SymMatrix target_moment_;
  std::size_t n_ = 0;
  double r_ = 0.0;
  double r_hat_ = 0.0;
};

// Throws InvalidInput on empty samples, dimension mismatch, non-finite
// coordinates, or a point whose norm exceeds r (the message names the point).
// The private sample is read exactly once per row.
DiscrepancyModel BuildModel(const PointSet& source, const PrivateSample& target,
                            double r);
DiscrepancyModel BuildModel(const PointSet& source, const PointSet& target,
                            double r);

// M(q) = M0 - sum_i q_i x_i x_i^T.
SymMatrix WeightMatrix(const DiscrepancyModel& model,
                       std::span<const double> q);

// 4 Lambda^2 ||M(q)||_2.
double ExactDiscrepancy(const DiscrepancyModel& model,
                        std::span<const double> q, double lambda_bound);

struct ValueAndGradient {
  double value = 0.0;
  std::vector<double> gradient;
};

double SoftmaxF(const DiscrepancyModel& model, std::span<const double> q,
                double mu);
std::vector<double> SoftmaxFGradient(const DiscrepancyModel& model,
                                     std::span<const double> q, double mu);

// F~(q) + (reg / 2) ||q||_2^2 and its gradient.
ValueAndGradient TildeFWithGradient(const DiscrepancyModel& model,
                                    std::span<const double> q, double mu,
                                    double reg);
double TildeF(const DiscrepancyModel& model, std::span<const double> q,
              double mu, double reg);
std::vector<double> TildeFGradient(const DiscrepancyModel& model,
                                   std::span<const double> q, double mu,
                                   double reg);

// Same evaluation for a caller that already holds M(q).
ValueAndGradient TildeFFromMatrix(const DiscrepancyModel& model,
                                  const SymMatrix& weight_matrix,
                                  std::span<const double> q, double mu,
                                  double reg);

double PnormG(const DiscrepancyModel& model, std::span<const double> q, int p);
std::vector<double> PnormGGradient(const DiscrepancyModel& model,
                                   std::span<const double> q, int p);

struct TheoryConstants {
  double smoothness_q;  // mu r_hat^4, w.r.t. ||.||_1
  double sensitivity;   // 2 mu r^2 r_hat^2 / n, l_inf change of the gradient
  double lipschitz;     // r_hat^2, bound on ||grad||_inf
};
TheoryConstants ComputeTheoryConstants(const DiscrepancyModel& model,
                                       double mu);

}  // namespace dpadapt

#endif  // DPADAPT_DISCREPANCY_H_
