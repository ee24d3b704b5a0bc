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

#include "dpadapt/mechanisms.h"

#include <cmath>
#include <numbers>
#include <string>

#include "dpadapt/error.h"

namespace dpadapt {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

void CheckScale(double scale, const char* what) {
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw InvalidParameter(std::string(what) +
                           " must be a finite nonnegative real, got " +
                           std::to_string(scale));
  }
}

}  // namespace

PrivacyBudget PrivacyBudget::Make(double epsilon, double delta) {
  if (!(epsilon > 0.0)) {
    throw InvalidParameter("epsilon must be positive, got " +
                           std::to_string(epsilon));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidParameter("delta must lie in (0, 1), got " +
                           std::to_string(delta));
  }
  return {epsilon, delta};
}

std::uint64_t Mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t CombineSeeds(std::uint64_t a, std::uint64_t b) {
  return Mix64(Mix64(a) ^ (b + kGolden + (a << 6) + (a >> 2)));
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), key_(CombineSeeds(seed, stream_id)) {}

std::uint64_t RandomStream::NextU64() {
  ++counter_;
  return Mix64(key_ + counter_ * kGolden);
}

double RandomStream::NextOpenUniform() {
  // 53 random bits, centered in their cell so 0 and 1 are never produced.
  const std::uint64_t bits = NextU64() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RandomStream::NextGaussian() {
  const double u1 = NextOpenUniform();
  const double u2 = NextOpenUniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

RandomStream RandomStream::Split(std::uint64_t stream_id) const {
  return RandomStream(CombineSeeds(key_, stream_id), 0);
}

double LaplaceSample(double scale, RandomStream& rng) {
  CheckScale(scale, "Laplace scale");
  if (scale == 0.0) return 0.0;
  const double u = rng.NextOpenUniform() - 0.5;
  const double sign = u < 0.0 ? -1.0 : 1.0;
  return -scale * sign * std::log1p(-2.0 * std::abs(u));
}

std::vector<double> GaussianSampleVec(std::size_t dim, double sigma,
                                      RandomStream& rng) {
  if (dim < 1) throw InvalidParameter("Gaussian noise dimension must be >= 1");
  CheckScale(sigma, "Gaussian sigma");
  std::vector<double> out(dim, 0.0);
  if (sigma == 0.0) return out;
  for (double& v : out) v = sigma * rng.NextGaussian();
  return out;
}

NoisySelection ReportNoisyMin(std::span<const double> scores, double scale,
                              RandomStream& rng) {
  if (scores.empty()) throw InvalidInput("report-noisy-min: no candidates");
  CheckScale(scale, "Laplace scale");
  NoisySelection best;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw InvalidInput("report-noisy-min: score " + std::to_string(i) +
                         " is not finite");
    }
    const double noise = LaplaceSample(scale, rng);
    const double value = scores[i] + noise;
    if (i == 0 || value < best.noisy_value) {
      best = {i, value, noise};
    }
  }
  return best;
}

}  // namespace dpadapt
