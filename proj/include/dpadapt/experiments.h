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

// Synthetic shifted-Gaussian benchmark and the sweep over
// (algorithm, n, epsilon, repeat).
//
// Seeds: the data of a cell depends on (base_seed, n, repeat) only, so every
// algorithm and epsilon sees the same samples; the optimizer noise of a cell
// is seeded with a hash of (base_seed, algorithm, n, epsilon index, repeat).

#ifndef DPADAPT_EXPERIMENTS_H_
#define DPADAPT_EXPERIMENTS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dpadapt/mechanisms.h"
#include "dpadapt/points.h"

namespace dpadapt {

inline constexpr const char* kAlgorithms[] = {
    "two-stage-fw", "two-stage-md", "single-stage", "public-only",
    "oracle-private"};

struct ExperimentConfig {
  int d = 10;
  double sigma2 = 0.0;  // 0 selects 1 / (9 d)
  int m = 1000;
  std::vector<int> n_grid = {1000, 2000, 4000, 8000};
  std::vector<double> epsilons;  // empty selects {0.5, 1, 2, 4, inf}
  int repeats = 10;
  int K = 1000;
  double lambda = 0.001;
  double delta = 1.0 / 8000.0;
  double mixture_weight_P = 0.25;
  int test_size = 2000;
  std::uint64_t base_seed = 0;
  // Not part of the published setup.
  double Lambda = 1.0;  // hypothesis-ball radius
  double radius = 0.0;  // 0: the largest point norm of the cell's samples
  double mu = 0.0;      // 0: each method's default formula per cell
  std::vector<std::string> algorithms;  // empty selects all five

  // Fills the defaults above and throws InvalidParameter on bad values.
  void Resolve();
};

// Parses a JSON object or a flat TOML document with the field names above.
// Unknown keys and type errors throw InvalidInput with the location.
ExperimentConfig ParseConfig(const std::string& text, const std::string& name);
ExperimentConfig LoadConfigFile(const std::string& path);
// JSON rendering of a resolved config (used in run manifests).
std::string ConfigToJson(const ExperimentConfig& cfg);

struct SyntheticData {
  LabeledSample source;
  PointSet target;
  std::vector<double> target_labels;  // hidden; only the oracle baseline uses them
  LabeledSample test;
};

std::vector<double> SourceCenter(int d);  // c_Q = (1/sqrt(2d), ...)
std::vector<double> TargetCenter(int d);  // alternating signs, starting negative
// x.1bar if positive, half of it otherwise; 1bar = (1/sqrt(d), ...).
double LabelFunction(std::span<const double> x);
PointSet SampleGaussian(const std::vector<double>& center, double variance,
                        std::size_t count, RandomStream& rng);

SyntheticData GenerateSynthetic(const ExperimentConfig& cfg, int n,
                                std::uint64_t seed);

struct ExperimentRecord {
  std::string algorithm;
  int n = 0;
  double epsilon = 0.0;
  int repeat = 0;
  std::uint64_t seed = 0;
  double spectral_norm = 0.0;  // NaN where undefined
  double test_mse = 0.0;
  std::string status = "ok";
};

std::uint64_t DataSeed(std::uint64_t base_seed, int n, int repeat);
std::uint64_t CellSeed(std::uint64_t base_seed, std::size_t algorithm_id, int n,
                       std::size_t epsilon_index, int repeat);

ExperimentRecord RunCell(const ExperimentConfig& cfg,
                         const std::string& algorithm, int n,
                         std::size_t epsilon_index, int repeat);

// Runs every cell on `jobs` worker threads; the order of the result does not
// depend on `jobs`.
std::vector<ExperimentRecord> RunSweep(const ExperimentConfig& cfg, int jobs);

struct AggregateRow {
  std::string algorithm;
  int n = 0;
  double epsilon = 0.0;
  std::string metric;  // spectral_norm or test_mse
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (ddof = 1)
  int count = 0;
};

// Mean and std over finite values, per (algorithm, n, epsilon, metric) in
// first-appearance order. Groups without finite values are dropped.
std::vector<AggregateRow> Aggregate(const std::vector<ExperimentRecord>& records);

// algorithm,n,epsilon,repeat,seed,spectral_norm,test_mse,status
void WriteRawCsv(const std::vector<ExperimentRecord>& records, std::ostream& out);
// algorithm,n,epsilon,metric,mean,std,count
void WriteAggregateCsv(const std::vector<AggregateRow>& rows, std::ostream& out);
std::vector<AggregateRow> ReadAggregateCsv(std::istream& in,
                                           const std::string& name);

}  // namespace dpadapt

#endif  // DPADAPT_EXPERIMENTS_H_
