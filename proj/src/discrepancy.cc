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

#include "dpadapt/discrepancy.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpadapt/error.h"

namespace dpadapt {
namespace {

constexpr double kNegativeClampTol = 1e-9;
constexpr double kSumTol = 1e-6;
constexpr double kRadiusSlack = 1e-12;

void CheckMu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw InvalidParameter("mu must be a positive finite real, got " +
                           std::to_string(mu));
  }
}

void CheckWeights(const DiscrepancyModel& model, std::span<const double> q) {
  if (q.size() != model.m()) {
    throw InvalidInput("weight vector has length " + std::to_string(q.size()) +
                       ", model has " + std::to_string(model.m()) +
                       " source points");
  }
}

void CheckPoints(const char* what, std::size_t index,
                 std::span<const double> x, double r) {
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw InvalidInput(std::string(what) + " point " + std::to_string(index) +
                         " has a non-finite coordinate");
    }
  }
  const double norm = Norm2(x);
  if (norm > r + kRadiusSlack) {
    throw InvalidInput(std::string(what) + " point " + std::to_string(index) +
                       " has norm " + std::to_string(norm) +
                       " exceeding radius " + std::to_string(r));
  }
}

double SquaredNorm(std::span<const double> q) { return Dot(q, q); }

}  // namespace

WeightVector::WeightVector(std::vector<double> q) : q_(std::move(q)) {
  if (q_.empty()) throw InvalidInput("weight vector is empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < q_.size(); ++i) {
    double& v = q_[i];
    if (!std::isfinite(v)) {
      throw InvalidInput("weight " + std::to_string(i) + " is not finite");
    }
    if (v < -kNegativeClampTol) {
      throw InvalidInput("weight " + std::to_string(i) + " is negative: " +
                         std::to_string(v));
    }
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumTol) {
    throw InvalidInput("weights sum to " + std::to_string(sum) +
                       ", not a point of the simplex");
  }
  for (double& v : q_) v /= sum;
}

WeightVector WeightVector::Uniform(std::size_t m) {
  if (m == 0) throw InvalidInput("weight vector is empty");
  return WeightVector(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

WeightVector WeightVector::Vertex(std::size_t m, std::size_t j) {
  if (j >= m) throw InvalidInput("vertex index out of range");
  std::vector<double> q(m, 0.0);
  q[j] = 1.0;
  return WeightVector(std::move(q));
}

DiscrepancyModel BuildModel(const PointSet& source, const PrivateSample& target,
                            double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw InvalidInput("radius must be a positive finite real");
  }
  if (source.empty()) throw InvalidInput("source sample is empty");
  if (target.size() == 0) throw InvalidInput("target sample is empty");
  if (source.dim() != target.dim()) {
    throw InvalidInput("source dimension " + std::to_string(source.dim()) +
                       " differs from target dimension " +
                       std::to_string(target.dim()));
  }
  DiscrepancyModel model;
  model.source_ = source;
  model.n_ = target.size();
  model.r_ = r;
  for (std::size_t i = 0; i < source.size(); ++i) {
    CheckPoints("source", i, source.row(i), r);
    model.r_hat_ = std::max(model.r_hat_, Norm2(source.row(i)));
  }
  SymMatrix m0(source.dim());
  for (std::size_t j = 0; j < target.size(); ++j) {
    const auto t = target.row(j);
    CheckPoints("target", j, t, r);
    m0.AddOuter(t, 1.0);
  }
  m0.Scale(1.0 / static_cast<double>(target.size()));
  model.target_moment_ = std::move(m0);
  return model;
}

DiscrepancyModel BuildModel(const PointSet& source, const PointSet& target,
                            double r) {
  return BuildModel(source, PrivateSample(target), r);
}

SymMatrix WeightMatrix(const DiscrepancyModel& model,
                       std::span<const double> q) {
  CheckWeights(model, q);
  SymMatrix out = model.target_moment();
  for (std::size_t i = 0; i < model.m(); ++i) {
    if (q[i] != 0.0) out.AddOuter(model.source_point(i), -q[i]);
  }
  return out;
}

double ExactDiscrepancy(const DiscrepancyModel& model,
                        std::span<const double> q, double lambda_bound) {
  if (!(lambda_bound > 0.0)) {
    throw InvalidParameter("Lambda must be positive");
  }
  return 4.0 * lambda_bound * lambda_bound *
         SpectralNorm(WeightMatrix(model, q));
}

double SoftmaxF(const DiscrepancyModel& model, std::span<const double> q,
                double mu) {
  CheckMu(mu);
  return LogTraceExp(WeightMatrix(model, q), mu);
}

std::vector<double> SoftmaxFGradient(const DiscrepancyModel& model,
                                     std::span<const double> q, double mu) {
  CheckMu(mu);
  const Eigensystem eig = Eigh(WeightMatrix(model, q));
  const double top = eig.values.front();
  std::vector<double> w(eig.dim);
  double total = 0.0;
  for (std::size_t k = 0; k < eig.dim; ++k) {
    w[k] = std::exp(mu * (eig.values[k] - top));
    total += w[k];
  }
  std::vector<double> grad(model.m());
  for (std::size_t j = 0; j < model.m(); ++j) {
    const auto proj = eig.SquaredProjections(model.source_point(j));
    double s = 0.0;
    for (std::size_t k = 0; k < eig.dim; ++k) s += w[k] * proj[k];
    grad[j] = -s / total;
  }
  return grad;
}

ValueAndGradient TildeFFromMatrix(const DiscrepancyModel& model,
                                  const SymMatrix& weight_matrix,
                                  std::span<const double> q, double mu,
                                  double reg) {
  CheckMu(mu);
  CheckWeights(model, q);
  if (!(reg >= 0.0)) throw InvalidParameter("regularization must be >= 0");
  const Eigensystem eig = Eigh(weight_matrix);
  const double shift = mu * std::max(eig.values.front(), -eig.values.back());
  std::vector<double> diff(eig.dim);
  double z = 0.0;
  for (std::size_t k = 0; k < eig.dim; ++k) {
    const double plus = std::exp(mu * eig.values[k] - shift);
    const double minus = std::exp(-mu * eig.values[k] - shift);
    diff[k] = plus - minus;
    z += plus + minus;
  }
  ValueAndGradient out;
  out.value = (shift + std::log(z)) / mu + 0.5 * reg * SquaredNorm(q);
  out.gradient.resize(model.m());
  for (std::size_t j = 0; j < model.m(); ++j) {
    const auto proj = eig.SquaredProjections(model.source_point(j));
    double s = 0.0;
    for (std::size_t k = 0; k < eig.dim; ++k) s += diff[k] * proj[k];
    out.gradient[j] = -s / z + reg * q[j];
  }
  return out;
}

ValueAndGradient TildeFWithGradient(const DiscrepancyModel& model,
                                    std::span<const double> q, double mu,
                                    double reg) {
  return TildeFFromMatrix(model, WeightMatrix(model, q), q, mu, reg);
}

double TildeF(const DiscrepancyModel& model, std::span<const double> q,
              double mu, double reg) {
  CheckMu(mu);
  if (!(reg >= 0.0)) throw InvalidParameter("regularization must be >= 0");
  const Eigensystem eig = Eigh(WeightMatrix(model, q));
  const double shift = mu * std::max(eig.values.front(), -eig.values.back());
  double z = 0.0;
  for (double lambda : eig.values) {
    z += std::exp(mu * lambda - shift) + std::exp(-mu * lambda - shift);
  }
  return (shift + std::log(z)) / mu + 0.5 * reg * SquaredNorm(q);
}

std::vector<double> TildeFGradient(const DiscrepancyModel& model,
                                   std::span<const double> q, double mu,
                                   double reg) {
  return TildeFWithGradient(model, q, mu, reg).gradient;
}

double PnormG(const DiscrepancyModel& model, std::span<const double> q,
              int p) {
  if (p < 1) throw InvalidParameter("p must be an integer >= 1");
  const Eigensystem eig = Eigh(WeightMatrix(model, q));
  const double top = std::max(std::abs(eig.values.front()),
                              std::abs(eig.values.back()));
  if (top == 0.0) return 0.0;
  double s = 0.0;
  for (double lambda : eig.values) s += std::pow(lambda / top, 2 * p);
  return top * top * std::pow(s, 1.0 / p);
}

std::vector<double> PnormGGradient(const DiscrepancyModel& model,
                                   std::span<const double> q, int p) {
  if (p < 1) throw InvalidParameter("p must be an integer >= 1");
  const Eigensystem eig = Eigh(WeightMatrix(model, q));
  std::vector<double> grad(model.m(), 0.0);
  const double top = std::max(std::abs(eig.values.front()),
                              std::abs(eig.values.back()));
  if (top == 0.0) return grad;
  // Everything is scaled by the spectral norm; the powers of `top` collect
  // into a single factor.
  std::vector<double> odd(eig.dim);
  double s = 0.0;
  for (std::size_t k = 0; k < eig.dim; ++k) {
    const double u = eig.values[k] / top;
    s += std::pow(u, 2 * p);
    odd[k] = std::pow(u, 2 * p - 1);
  }
  const double factor = -2.0 * top * std::pow(s, 1.0 / p - 1.0);
  for (std::size_t i = 0; i < model.m(); ++i) {
    const auto proj = eig.SquaredProjections(model.source_point(i));
    double acc = 0.0;
    for (std::size_t k = 0; k < eig.dim; ++k) acc += odd[k] * proj[k];
    grad[i] = factor * acc;
  }
  return grad;
}

TheoryConstants ComputeTheoryConstants(const DiscrepancyModel& model,
                                       double mu) {
  CheckMu(mu);
  const double rh2 = model.r_hat() * model.r_hat();
  return {mu * rh2 * rh2,
          2.0 * mu * model.r() * model.r() * rh2 /
              static_cast<double>(model.n()),
          rh2};
}

}  // namespace dpadapt
