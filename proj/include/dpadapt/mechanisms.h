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

// Noise primitives. Callers compute the noise scale; nothing here interprets
// (epsilon, delta).
//
// These samplers use ordinary IEEE doubles and are not hardened against
// floating-point side channels.

#ifndef DPADAPT_MECHANISMS_H_
#define DPADAPT_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace dpadapt {

struct PrivacyBudget {
  // epsilon = +infinity means no privacy: every calibrated scale becomes 0.
  double epsilon = 1.0;
  double delta = 1e-6;

  // Throws InvalidParameter unless epsilon > 0 and 0 < delta < 1.
  static PrivacyBudget Make(double epsilon, double delta);
  bool noiseless() const {
    return epsilon == std::numeric_limits<double>::infinity();
  }
};

// SplitMix64 finalizer; also used to derive child seeds.
std::uint64_t Mix64(std::uint64_t x);
std::uint64_t CombineSeeds(std::uint64_t a, std::uint64_t b);

// Counter-based stream: output k is Mix64(key + (k + 1) * golden), so a
// (seed, stream_id) pair determines the sequence on every platform. Not
// thread-safe; give each worker its own stream via Split().
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t NextU64();
  // Uniform on the open interval (0, 1).
  double NextOpenUniform();
  // Standard normal (Box-Muller, one output per two uniforms).
  double NextGaussian();

  RandomStream Split(std::uint64_t stream_id) const;
  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Lap(scale) by inverse CDF. scale == 0 returns exactly 0 without consuming
// randomness.
double LaplaceSample(double scale, RandomStream& rng);

// i.i.d. N(0, sigma^2). sigma == 0 returns the zero vector without consuming
// randomness.
std::vector<double> GaussianSampleVec(std::size_t dim, double sigma,
                                      RandomStream& rng);

struct NoisySelection {
  std::size_t index = 0;     // 0-based
  double noisy_value = 0.0;  // score[index] + its noise draw
  double noise = 0.0;
};

// Report-noisy-min: adds fresh Lap(scale) noise to every score and returns the
// argmin, ties going to the lowest index.
NoisySelection ReportNoisyMin(std::span<const double> scores, double scale,
                              RandomStream& rng);

}  // namespace dpadapt

#endif  // DPADAPT_MECHANISMS_H_
