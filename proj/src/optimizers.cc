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

#include "dpadapt/optimizers.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "dpadapt/calibration.h"
#include "dpadapt/error.h"
#include "dpadapt/linalg.h"

namespace dpadapt {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void AppendNumber(std::string& line, double v) {
  if (std::isnan(v)) {
    line += "nan";
    return;
  }
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  line.append(buf, end);
}

void CheckCommon(int iterations, double mu, double lambda) {
  if (iterations < 1) {
    throw InvalidParameter("iteration count must be >= 1, got " +
                           std::to_string(iterations));
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw InvalidParameter("mu must be positive and finite");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidParameter("lambda must be nonnegative and finite");
  }
}

double ResolveSigma(const std::optional<double>& override_value,
                    const PrivacyBudget& budget, double calibrated) {
  if (override_value) {
    if (!(*override_value >= 0.0) || !std::isfinite(*override_value)) {
      throw InvalidParameter("sigma override must be finite and nonnegative");
    }
    return *override_value;
  }
  return budget.noiseless() ? 0.0 : calibrated;
}

double FrankWolfeGap(std::span<const double> g, std::span<const double> q) {
  return Dot(g, q) - *std::min_element(g.begin(), g.end());
}

}  // namespace

void WriteTraceCsv(const Trace& trace, std::ostream& out) {
  out << "k,objective,gap_q,gap_w,selected_vertex\n";
  std::string line;
  for (const IterationRecord& r : trace) {
    line = std::to_string(r.k);
    line += ',';
    AppendNumber(line, r.objective);
    line += ',';
    AppendNumber(line, r.gap_q);
    line += ',';
    AppendNumber(line, r.gap_w);
    line += ',';
    line += std::to_string(r.selected_vertex);
    line += '\n';
    out << line;
  }
}

FWResult NoisyFrankWolfe(const DiscrepancyModel& model, const FWConfig& cfg,
                         RandomStream& rng) {
  CheckCommon(cfg.iterations, cfg.mu, cfg.lambda);
  const std::size_t m = model.m();
  FWResult result{WeightVector::Uniform(m), 0.0, {}};
  result.sigma = ResolveSigma(
      cfg.sigma_override, cfg.budget,
      FrankWolfeSigma(ProblemScale::Of(model), cfg.budget, cfg.mu,
                      cfg.iterations));

  std::vector<double> q(m, 1.0 / static_cast<double>(m));
  std::vector<double> previous = q;
  result.trace.reserve(cfg.iterations);
  for (int k = 1; k <= cfg.iterations; ++k) {
    const ValueAndGradient vg = TildeFWithGradient(model, q, cfg.mu, cfg.lambda);
    const NoisySelection pick = ReportNoisyMin(vg.gradient, result.sigma, rng);
    const double eta = 3.0 / (k + 2.0);
    result.trace.push_back({k, vg.value, Dot(vg.gradient, q) - pick.noisy_value,
                            0.0, static_cast<long>(pick.index)});
    previous = q;
    for (double& v : q) v *= 1.0 - eta;
    q[pick.index] += eta;
  }
  result.q = WeightVector(cfg.return_penultimate ? previous : q);
  return result;
}

MDResult NoisyMirrorDescent(const DiscrepancyModel& model, const MDConfig& cfg,
                            RandomStream& rng) {
  CheckCommon(cfg.iterations, cfg.mu, cfg.lambda);
  const std::size_t m = model.m();
  const ProblemScale scale = ProblemScale::Of(model);
  MDResult result{WeightVector::Uniform(m), WeightVector::Uniform(m), 0.0,
                  0.0, 0.0, {}};
  if (cfg.p != 0.0 && !(cfg.p > 1.0)) {
    throw InvalidParameter("mirror descent p must exceed 1");
  }
  if (cfg.eta != 0.0 && (!(cfg.eta > 0.0) || !std::isfinite(cfg.eta))) {
    throw InvalidParameter("mirror descent step size must be positive");
  }
  result.sigma = ResolveSigma(
      cfg.sigma_override, cfg.budget,
      MirrorDescentSigma(scale, cfg.budget, cfg.mu, cfg.iterations));
  if (m == 1) {
    // The simplex is a single point; nothing to optimize.
    result.p = cfg.p;
    result.eta = cfg.eta;
    return result;
  }
  result.p = cfg.p > 0.0 ? cfg.p : MirrorDescentExponent(m);
  result.eta = cfg.eta > 0.0
                   ? cfg.eta
                   : MirrorDescentStepSize(scale, cfg.lambda, cfg.iterations);

  WeightVector q = WeightVector::Uniform(m);
  std::vector<double> sum(m, 0.0);
  std::vector<double> noisy(m);
  result.trace.reserve(cfg.iterations);
  for (int k = 1; k <= cfg.iterations; ++k) {
    for (std::size_t i = 0; i < m; ++i) sum[i] += q[i];
    const ValueAndGradient vg = TildeFWithGradient(model, q, cfg.mu, cfg.lambda);
    result.trace.push_back(
        {k, vg.value, FrankWolfeGap(vg.gradient, q), kNaN, -1});
    const std::vector<double> noise = GaussianSampleVec(m, result.sigma, rng);
    for (std::size_t i = 0; i < m; ++i) noisy[i] = vg.gradient[i] + noise[i];
    q = PnormProx(q, noisy, result.eta, result.p);
  }
  for (double& v : sum) v /= cfg.iterations;
  result.q = WeightVector(std::move(sum));
  result.last = q;
  return result;
}

VertexSet VertexSet::Simplex(std::size_t m) {
  if (m < 1) throw InvalidParameter("simplex dimension must be >= 1");
  VertexSet out;
  out.dim_ = m;
  out.simplex_ = true;
  return out;
}

VertexSet VertexSet::Explicit(std::vector<std::vector<double>> vertices) {
  if (vertices.empty()) throw InvalidParameter("vertex set is empty");
  const std::size_t dim = vertices.front().size();
  for (const auto& v : vertices) {
    if (v.size() != dim || dim == 0) {
      throw InvalidParameter("vertices must share one positive dimension");
    }
  }
  VertexSet out;
  out.dim_ = dim;
  out.simplex_ = false;
  out.explicit_ = std::move(vertices);
  return out;
}

std::size_t VertexSet::count() const {
  return simplex_ ? dim_ : explicit_.size();
}

double VertexSet::Dot(std::span<const double> g, std::size_t j) const {
  return simplex_ ? g[j] : dpadapt::Dot(g, explicit_[j]);
}

void VertexSet::Blend(std::span<double> q, std::size_t j, double eta) const {
  if (simplex_) {
    for (double& v : q) v *= 1.0 - eta;
    q[j] += eta;
    return;
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    q[i] = (1.0 - eta) * q[i] + eta * explicit_[j][i];
  }
}

std::vector<double> VertexSet::Centroid() const {
  if (simplex_) return std::vector<double>(dim_, 1.0 / static_cast<double>(dim_));
  std::vector<double> c(dim_, 0.0);
  for (const auto& v : explicit_) {
    for (std::size_t i = 0; i < dim_; ++i) c[i] += v[i];
  }
  for (double& v : c) v /= static_cast<double>(explicit_.size());
  return c;
}

double StationaryStepSize(const SmoothnessProfile& pr, int iterations) {
  if (iterations < 1) throw InvalidParameter("iteration count must be >= 1");
  const double num = 2.0 * (pr.diam_q * pr.gamma_q + pr.diam_w * pr.gamma_w);
  const double den = (pr.diam_q * pr.diam_q * pr.mu_q +
                      pr.diam_w * pr.diam_w * pr.mu_w +
                      2.0 * pr.gamma_qw * pr.diam_q * pr.diam_w) *
                     iterations;
  if (!(num > 0.0) || !(den > 0.0)) {
    throw InvalidParameter("smoothness profile gives no usable step size");
  }
  return std::min(1.0, std::sqrt(num / den));
}

StationaryResult PrivateStationaryFrankWolfe(const ProductObjective& obj,
                                             const PrivacyBudget& budget,
                                             int iterations, double eta,
                                             RandomStream& q_noise,
                                             RandomStream& w_noise) {
  if (iterations < 1) throw InvalidParameter("iteration count must be >= 1");
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw InvalidParameter("step size must lie in (0, 1]");
  }
  if (!obj.grad_q || !obj.grad_w) {
    throw InvalidParameter("objective is missing a gradient callback");
  }
  if (obj.w_dim < 1 || !(obj.w_radius > 0.0)) {
    throw InvalidParameter("w-domain needs a positive dimension and radius");
  }
  const SmoothnessProfile& pr = obj.profile;
  if (!(pr.tau_q >= 0.0) || !(pr.tau_w >= 0.0)) {
    throw InvalidParameter("gradient sensitivities must be nonnegative");
  }

  StationaryResult result;
  result.sigma_q =
      budget.noiseless() ? 0.0 : StationarySigma(pr.tau_q, budget, iterations);
  result.sigma_w =
      budget.noiseless() ? 0.0 : StationarySigma(pr.tau_w, budget, iterations);

  const VertexSet& vertices = obj.vertices;
  std::vector<double> q = vertices.Centroid();
  std::vector<double> w(obj.w_dim, 0.0);
  std::vector<double> scores(vertices.count());
  std::vector<double> u(obj.w_dim);
  double best = std::numeric_limits<double>::infinity();
  result.trace.reserve(iterations);

  for (int k = 0; k < iterations; ++k) {
    const std::vector<double> gq = obj.grad_q(q, w);
    const std::vector<double> gw = obj.grad_w(q, w);
    if (gq.size() != q.size() || gw.size() != w.size()) {
      throw InvalidInput("gradient callback returned the wrong dimension");
    }
    for (std::size_t j = 0; j < scores.size(); ++j) {
      scores[j] = vertices.Dot(gq, j);
    }
    const NoisySelection pick = ReportNoisyMin(scores, result.sigma_q, q_noise);
    const double gap_q = -(pick.noisy_value - Dot(gq, q));

    std::vector<double> noisy = GaussianSampleVec(w.size(), result.sigma_w, w_noise);
    for (std::size_t i = 0; i < w.size(); ++i) noisy[i] += gw[i];
    const double norm = Norm2(noisy);
    if (norm > 0.0) {
      for (std::size_t i = 0; i < w.size(); ++i) {
        u[i] = -obj.w_radius * noisy[i] / norm;
      }
    } else {
      u = w;
    }
    double gap_w = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) gap_w -= noisy[i] * (u[i] - w[i]);

    const double objective = obj.value ? obj.value(q, w) : kNaN;
    result.trace.push_back(
        {k, objective, gap_q, gap_w, static_cast<long>(pick.index)});
    if (gap_q + gap_w < best) {
      best = gap_q + gap_w;
      result.best_iteration = k;
      result.q = q;
      result.w = w;
      result.gap_estimate = best;
    }

    vertices.Blend(q, pick.index, eta);
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = (1.0 - eta) * w[i] + eta * u[i];
    }
  }
  result.last_q = std::move(q);
  result.last_w = std::move(w);
  return result;
}

StationaryResult PrivateStationaryFrankWolfe(const ProductObjective& obj,
                                             const PrivacyBudget& budget,
                                             int iterations, double eta,
                                             RandomStream& rng) {
  RandomStream q_noise = rng.Split(1);
  RandomStream w_noise = rng.Split(2);
  return PrivateStationaryFrankWolfe(obj, budget, iterations, eta, q_noise,
                                     w_noise);
}

double StationarityGap(const ProductObjective& obj, std::span<const double> q,
                       std::span<const double> w) {
  const std::vector<double> gq = obj.grad_q(q, w);
  const std::vector<double> gw = obj.grad_w(q, w);
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < obj.vertices.count(); ++j) {
    lowest = std::min(lowest, obj.vertices.Dot(gq, j));
  }
  return Dot(gq, q) - lowest + Norm2(gw) * obj.w_radius + Dot(gw, w);
}

}  // namespace dpadapt
