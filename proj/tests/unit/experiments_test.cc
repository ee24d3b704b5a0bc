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


#include "dpadapt/experiments.h"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dpadapt/error.h"
#include "dpadapt/linalg.h"
#include "dpadapt/mechanisms.h"
#include "gtest/gtest.h"

namespace dpadapt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ExperimentConfig TinyConfig() {
  ExperimentConfig cfg;
  cfg.d = 3;
  cfg.m = 40;
  cfg.n_grid = {20, 30};
  cfg.epsilons = {1.0, kInf};
  cfg.repeats = 2;
  cfg.K = 20;
  cfg.test_size = 50;
  cfg.base_seed = 7;
  cfg.Resolve();
  return cfg;
}

std::vector<double> Coords(const PointSet& p) {
  return {p.coords().begin(), p.coords().end()};
}

std::string RawCsv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  WriteRawCsv(records, out);
  return out.str();
}

TEST(SyntheticTest, CentersHaveNormOneOverRootTwo) {
  for (int d : {1, 2, 10, 33}) {
    const std::vector<double> cq = SourceCenter(d);
    const std::vector<double> cp = TargetCenter(d);
    ASSERT_EQ(cq.size(), static_cast<std::size_t>(d));
    EXPECT_NEAR(Norm2(cq), 1.0 / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(Norm2(cp), 1.0 / std::sqrt(2.0), 1e-14);
    for (int a = 0; a < d; ++a) {
      EXPECT_GT(cq[a], 0.0);
      EXPECT_EQ(cp[a], a % 2 == 0 ? -cq[a] : cq[a]);
    }
  }
}

TEST(SyntheticTest, LabelFunctionIsPiecewiseLinear) {
  const int d = 10;
  const double unit = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<double> x(d, unit);
  EXPECT_NEAR(LabelFunction(x), 1.0, 1e-14);
  for (double& v : x) v = -unit;
  EXPECT_NEAR(LabelFunction(x), -0.5, 1e-14);
  EXPECT_EQ(LabelFunction(std::vector<double>(d, 0.0)), 0.0);
  EXPECT_NEAR(LabelFunction(std::vector<double>{2.0}), 2.0, 1e-15);
  EXPECT_NEAR(LabelFunction(std::vector<double>{-2.0}), -1.0, 1e-15);
}

TEST(SyntheticTest, TargetDrawsHaveStatedMoments) {
  const int d = 10;
  const double variance = 1.0 / (9.0 * d);
  RandomStream rng(11);
  const std::vector<double> cp = TargetCenter(d);
  const PointSet pts = SampleGaussian(cp, variance, 100000, rng);
  ASSERT_EQ(pts.size(), 100000u);
  for (int a = 0; a < d; ++a) {
    double sum = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) sum += pts.row(i)[a];
    const double mean = sum / pts.size();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      sq += (pts.row(i)[a] - mean) * (pts.row(i)[a] - mean);
    }
    const double var = sq / (pts.size() - 1);
    EXPECT_NEAR(mean, cp[a], 0.01) << "coordinate " << a;
    EXPECT_NEAR(var / variance, 1.0, 0.05) << "coordinate " << a;
  }
}

TEST(SyntheticTest, SizesLabelsAndMixture) {
  ExperimentConfig cfg;
  cfg.d = 2;
  cfg.sigma2 = 0.001;
  cfg.m = 4000;
  cfg.test_size = 300;
  cfg.Resolve();
  const SyntheticData data = GenerateSynthetic(cfg, 250, 5);
  ASSERT_EQ(data.source.size(), 4000u);
  ASSERT_EQ(data.target.size(), 250u);
  ASSERT_EQ(data.target_labels.size(), 250u);
  ASSERT_EQ(data.test.size(), 300u);
  EXPECT_EQ(data.target.dim(), 2u);
  for (std::size_t i = 0; i < data.source.size(); ++i) {
    EXPECT_EQ(data.source.labels[i], LabelFunction(data.source.points.row(i)));
  }
  for (std::size_t i = 0; i < data.test.size(); ++i) {
    EXPECT_EQ(data.test.labels[i], LabelFunction(data.test.points.row(i)));
  }
  // Centers sit at x1 = -0.5 (P) and +0.5 (Q) with sd ~0.03.
  std::size_t from_p = 0;
  for (std::size_t i = 0; i < data.source.size(); ++i) {
    from_p += data.source.points.row(i)[0] < 0.0;
  }
  EXPECT_NEAR(from_p / 4000.0, 0.25, 0.025);
  for (std::size_t i = 0; i < data.target.size(); ++i) {
    EXPECT_LT(data.target.row(i)[0], 0.0);
  }
}

TEST(SyntheticTest, MixtureWeightExtremes) {
  ExperimentConfig cfg;
  cfg.d = 2;
  cfg.sigma2 = 0.001;
  cfg.m = 200;
  cfg.test_size = 10;
  cfg.mixture_weight_P = 0.0;
  cfg.Resolve();
  SyntheticData data = GenerateSynthetic(cfg, 10, 1);
  for (std::size_t i = 0; i < 200; ++i) EXPECT_GT(data.source.points.row(i)[0], 0.0);
  cfg.mixture_weight_P = 1.0;
  data = GenerateSynthetic(cfg, 10, 1);
  for (std::size_t i = 0; i < 200; ++i) EXPECT_LT(data.source.points.row(i)[0], 0.0);
}

TEST(SyntheticTest, DeterministicInSeed) {
  ExperimentConfig cfg = TinyConfig();
  const SyntheticData a = GenerateSynthetic(cfg, 20, 99);
  const SyntheticData b = GenerateSynthetic(cfg, 20, 99);
  const SyntheticData c = GenerateSynthetic(cfg, 20, 100);
  EXPECT_EQ(Coords(a.source.points), Coords(b.source.points));
  EXPECT_EQ(Coords(a.target), Coords(b.target));
  EXPECT_NE(Coords(a.target), Coords(c.target));
  // A larger target sample keeps the source and test draws unchanged.
  const SyntheticData d = GenerateSynthetic(cfg, 30, 99);
  EXPECT_EQ(Coords(a.source.points), Coords(d.source.points));
  EXPECT_EQ(Coords(a.test.points), Coords(d.test.points));
}

TEST(ConfigTest, DefaultsResolve) {
  ExperimentConfig cfg;
  cfg.Resolve();
  EXPECT_DOUBLE_EQ(cfg.sigma2, 1.0 / 90.0);
  EXPECT_EQ(cfg.n_grid, (std::vector<int>{1000, 2000, 4000, 8000}));
  EXPECT_EQ(cfg.epsilons, (std::vector<double>{0.5, 1.0, 2.0, 4.0, kInf}));
  EXPECT_EQ(cfg.algorithms.size(), 5u);
  EXPECT_EQ(cfg.algorithms.front(), "two-stage-fw");
  EXPECT_EQ(cfg.repeats, 10);
  EXPECT_EQ(cfg.K, 1000);
  EXPECT_DOUBLE_EQ(cfg.delta, 1.0 / 8000.0);
  EXPECT_EQ(cfg.m, 1000);
  EXPECT_EQ(cfg.test_size, 2000);
}

TEST(ConfigTest, ResolveRejectsBadValues) {
  auto bad = [](auto mutate) {
    ExperimentConfig cfg;
    mutate(cfg);
    EXPECT_THROW(cfg.Resolve(), InvalidParameter);
  };
  bad([](ExperimentConfig& c) { c.d = 0; });
  bad([](ExperimentConfig& c) { c.sigma2 = -1.0; });
  bad([](ExperimentConfig& c) { c.n_grid = {}; });
  bad([](ExperimentConfig& c) { c.n_grid = {1}; });
  bad([](ExperimentConfig& c) { c.epsilons = {0.0}; });
  bad([](ExperimentConfig& c) { c.repeats = 0; });
  bad([](ExperimentConfig& c) { c.K = 0; });
  bad([](ExperimentConfig& c) { c.delta = 1.0; });
  bad([](ExperimentConfig& c) { c.mixture_weight_P = 1.5; });
  bad([](ExperimentConfig& c) { c.algorithms = {"two-stage-fw", "two-stage-fw"}; });
  ExperimentConfig cfg;
  cfg.algorithms = {"gradient-descent"};
  EXPECT_ANY_THROW(cfg.Resolve());
}

TEST(ConfigTest, ParsesJson) {
  const ExperimentConfig cfg = ParseConfig(
      R"({"d": 4, "m": 30, "n_grid": [10, 20], "epsilons": [1, "inf"],
          "repeats": 3, "K": 50, "base_seed": 12, "algorithms": ["public-only"]})",
      "c.json");
  EXPECT_EQ(cfg.d, 4);
  EXPECT_EQ(cfg.m, 30);
  EXPECT_EQ(cfg.n_grid, (std::vector<int>{10, 20}));
  EXPECT_EQ(cfg.epsilons, (std::vector<double>{1.0, kInf}));
  EXPECT_EQ(cfg.repeats, 3);
  EXPECT_EQ(cfg.K, 50);
  EXPECT_EQ(cfg.base_seed, 12u);
  EXPECT_EQ(cfg.algorithms, (std::vector<std::string>{"public-only"}));
  EXPECT_DOUBLE_EQ(cfg.sigma2, 1.0 / 36.0);
}

TEST(ConfigTest, ParsesFlatToml) {
  const ExperimentConfig cfg = ParseConfig(
      "# benchmark\n"
      "d = 5\n"
      "m = 60   # source size\n"
      "n_grid = [\n"
      "  100,\n"
      "  200,  # second\n"
      "]\n"
      "epsilons = [0.5, inf]\n"
      "lambda = 1e-2\n"
      "algorithms = [\"two-stage-md\", \"single-stage\"]\n"
      "\n",
      "c.toml");
  EXPECT_EQ(cfg.d, 5);
  EXPECT_EQ(cfg.m, 60);
  EXPECT_EQ(cfg.n_grid, (std::vector<int>{100, 200}));
  EXPECT_EQ(cfg.epsilons, (std::vector<double>{0.5, kInf}));
  EXPECT_DOUBLE_EQ(cfg.lambda, 0.01);
  EXPECT_EQ(cfg.algorithms,
            (std::vector<std::string>{"two-stage-md", "single-stage"}));
}

std::string ConfigError(const std::string& text, const std::string& name) {
  try {
    ParseConfig(text, name);
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return "";
}

TEST(ConfigTest, ErrorsNameTheLocation) {
  EXPECT_EQ(ConfigError("d = 3\nbogus = 1\n", "c.toml"),
            "c.toml: key 'bogus': unknown key");
  EXPECT_EQ(ConfigError(R"({"d": "three"})", "c.json"),
            "c.json: key 'd': expected an integer");
  EXPECT_EQ(ConfigError(R"({"n_grid": 5})", "c.json"),
            "c.json: key 'n_grid': expected an array");
  EXPECT_EQ(ConfigError(R"({"base_seed": -1})", "c.json"),
            "c.json: key 'base_seed': expected a nonnegative integer");
  EXPECT_EQ(ConfigError("d = 3\n\n[table]\n", "c.toml").rfind("c.toml:3:", 0), 0u);
  EXPECT_EQ(ConfigError("d = 3\nd = 4\n", "c.toml").rfind("c.toml:2:", 0), 0u);
  EXPECT_EQ(ConfigError("d = 3\nm 4\n", "c.toml").rfind("c.toml:2:", 0), 0u);
  EXPECT_EQ(ConfigError("d = @\n", "c.toml").rfind("c.toml:1:", 0), 0u);
  EXPECT_NE(ConfigError("n_grid = [1,\n2\n", "c.toml").find("not closed"),
            std::string::npos);
  EXPECT_NE(ConfigError("repeats = 0\n", "c.toml").find("repeats"),
            std::string::npos);
  EXPECT_EQ(ConfigError("{not json", "c.json").rfind("c.json", 0), 0u);
  EXPECT_EQ(ConfigError("[1, 2]", "c.json").rfind("c.", 0), 0u);
}

TEST(ConfigTest, ShippedConfigsLoad) {
  const std::string dir = std::string(DPADAPT_TEST_DATA_DIR) + "/../../configs";
  const ExperimentConfig reduced = LoadConfigFile(dir + "/reduced_grid.toml");
  EXPECT_EQ(reduced.n_grid, (std::vector<int>{1000, 4000, 8000}));
  EXPECT_EQ(reduced.epsilons, (std::vector<double>{1.0, 4.0, kInf}));
  EXPECT_EQ(reduced.delta, 1.0 / 8000.0);
  const ExperimentConfig full = LoadConfigFile(dir + "/full_grid.toml");
  EXPECT_EQ(full.epsilons.size(), 5u);
  EXPECT_THROW(LoadConfigFile(dir + "/missing.toml"), InvalidInput);
}

TEST(ConfigTest, JsonRenderingRoundTrips) {
  ExperimentConfig cfg = TinyConfig();
  cfg.lambda = 0.125;
  cfg.mu = 2.5;
  cfg.Resolve();
  const ExperimentConfig back = ParseConfig(ConfigToJson(cfg), "manifest");
  EXPECT_EQ(back.d, cfg.d);
  EXPECT_EQ(back.sigma2, cfg.sigma2);
  EXPECT_EQ(back.m, cfg.m);
  EXPECT_EQ(back.n_grid, cfg.n_grid);
  EXPECT_EQ(back.epsilons, cfg.epsilons);
  EXPECT_EQ(back.repeats, cfg.repeats);
  EXPECT_EQ(back.K, cfg.K);
  EXPECT_EQ(back.lambda, cfg.lambda);
  EXPECT_EQ(back.delta, cfg.delta);
  EXPECT_EQ(back.mixture_weight_P, cfg.mixture_weight_P);
  EXPECT_EQ(back.test_size, cfg.test_size);
  EXPECT_EQ(back.base_seed, cfg.base_seed);
  EXPECT_EQ(back.mu, cfg.mu);
  EXPECT_EQ(back.algorithms, cfg.algorithms);
  EXPECT_NE(ConfigToJson(cfg).find("\"inf\""), std::string::npos);
}

TEST(SeedTest, DataSeedIgnoresAlgorithmAndEpsilon) {
  const ExperimentConfig cfg = TinyConfig();
  const ExperimentRecord a = RunCell(cfg, "public-only", 20, 0, 1);
  const ExperimentRecord b = RunCell(cfg, "public-only", 20, 1, 1);
  // public-only does not use epsilon, so both cells see identical data.
  EXPECT_EQ(a.spectral_norm, b.spectral_norm);
  EXPECT_EQ(a.test_mse, b.test_mse);
  EXPECT_NE(a.seed, b.seed);
  EXPECT_NE(DataSeed(7, 20, 0), DataSeed(7, 20, 1));
  EXPECT_NE(DataSeed(7, 20, 0), DataSeed(7, 30, 0));
  EXPECT_NE(DataSeed(7, 20, 0), DataSeed(8, 20, 0));
}

TEST(SeedTest, CellSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  std::size_t cells = 0;
  for (std::size_t alg = 0; alg < 5; ++alg) {
    for (int n : {1000, 2000, 4000, 8000}) {
      for (std::size_t e = 0; e < 5; ++e) {
        for (int r = 0; r < 10; ++r) {
          seen.insert(CellSeed(0, alg, n, e, r));
          ++cells;
        }
      }
    }
  }
  EXPECT_EQ(seen.size(), cells);
}

TEST(SweepTest, OrderAndContent) {
  const ExperimentConfig cfg = TinyConfig();
  const std::vector<ExperimentRecord> records = RunSweep(cfg, 1);
  ASSERT_EQ(records.size(), 5u * 2u * 2u * 2u);
  std::size_t k = 0;
  for (const std::string& alg : cfg.algorithms) {
    for (int n : cfg.n_grid) {
      for (double eps : cfg.epsilons) {
        for (int r = 0; r < cfg.repeats; ++r, ++k) {
          const ExperimentRecord& rec = records[k];
          EXPECT_EQ(rec.algorithm, alg);
          EXPECT_EQ(rec.n, n);
          EXPECT_EQ(rec.epsilon, eps);
          EXPECT_EQ(rec.repeat, r);
          EXPECT_EQ(rec.status, "ok");
          EXPECT_TRUE(std::isfinite(rec.test_mse));
          EXPECT_EQ(std::isnan(rec.spectral_norm), alg == "oracle-private");
        }
      }
    }
  }
}

TEST(SweepTest, IndependentOfWorkerCount) {
  const ExperimentConfig cfg = TinyConfig();
  const std::string one = RawCsv(RunSweep(cfg, 1));
  EXPECT_EQ(one, RawCsv(RunSweep(cfg, 3)));
  EXPECT_EQ(one, RawCsv(RunSweep(cfg, 64)));
}

TEST(SweepTest, CellMatchesSweepEntry) {
  const ExperimentConfig cfg = TinyConfig();
  const std::vector<ExperimentRecord> records = RunSweep(cfg, 2);
  // two-stage-md, n = 30, eps index 0, repeat 1.
  const ExperimentRecord cell = RunCell(cfg, "two-stage-md", 30, 0, 1);
  const ExperimentRecord& entry = records[1 * 8 + 1 * 4 + 0 * 2 + 1];
  EXPECT_EQ(entry.algorithm, "two-stage-md");
  EXPECT_EQ(RawCsv({cell}), RawCsv({entry}));
}

TEST(SweepTest, CellFailureIsRecorded) {
  ExperimentConfig cfg = TinyConfig();
  cfg.radius = 0.01;  // every sample lies outside this ball
  cfg.algorithms = {"two-stage-fw"};
  cfg.Resolve();
  const std::vector<ExperimentRecord> records = RunSweep(cfg, 1);
  ASSERT_FALSE(records.empty());
  for (const ExperimentRecord& rec : records) {
    EXPECT_EQ(rec.status.rfind("error: ", 0), 0u) << rec.status;
    EXPECT_EQ(rec.status.find(','), std::string::npos);
    EXPECT_TRUE(std::isnan(rec.spectral_norm));
    EXPECT_TRUE(std::isnan(rec.test_mse));
  }
  EXPECT_TRUE(Aggregate(records).empty());
}

ExperimentRecord Record(const std::string& alg, int n, double eps, double sn,
                        double mse) {
  ExperimentRecord r;
  r.algorithm = alg;
  r.n = n;
  r.epsilon = eps;
  r.spectral_norm = sn;
  r.test_mse = mse;
  return r;
}

TEST(AggregateTest, SampleStatisticsPerGroup) {
  const std::vector<ExperimentRecord> records = {
      Record("b", 10, 1.0, 1.0, 2.0), Record("a", 10, 1.0, 5.0, kNaN),
      Record("b", 10, 1.0, 2.0, 4.0), Record("b", 10, 1.0, 6.0, 9.0),
      Record("b", 10, kInf, 3.0, 3.0)};
  const std::vector<AggregateRow> rows = Aggregate(records);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0].algorithm, "b");
  EXPECT_EQ(rows[0].metric, "spectral_norm");
  EXPECT_EQ(rows[0].count, 3);
  EXPECT_DOUBLE_EQ(rows[0].mean, 3.0);
  EXPECT_DOUBLE_EQ(rows[0].std, std::sqrt(7.0));  // (4 + 1 + 9) / 2
  EXPECT_EQ(rows[1].metric, "test_mse");
  EXPECT_DOUBLE_EQ(rows[1].mean, 5.0);
  EXPECT_DOUBLE_EQ(rows[1].std, std::sqrt(13.0));  // (9 + 1 + 16) / 2
  // Group "a" has no finite test_mse, so only its spectral norm survives.
  EXPECT_EQ(rows[2].algorithm, "a");
  EXPECT_EQ(rows[2].metric, "spectral_norm");
  EXPECT_EQ(rows[2].count, 1);
  EXPECT_TRUE(std::isnan(rows[2].std));
  EXPECT_EQ(rows[3].epsilon, kInf);
  EXPECT_EQ(rows[4].epsilon, kInf);
  EXPECT_EQ(rows[4].metric, "test_mse");
}

TEST(CsvTest, RawFormat) {
  ExperimentRecord r = Record("two-stage-fw", 1000, kInf, 0.25, kNaN);
  r.repeat = 3;
  r.seed = 18446744073709551615ull;
  std::ostringstream out;
  WriteRawCsv({r}, out);
  EXPECT_EQ(out.str(),
            "algorithm,n,epsilon,repeat,seed,spectral_norm,test_mse,status\n"
            "two-stage-fw,1000,inf,3,18446744073709551615,0.25,nan,ok\n");
}

TEST(CsvTest, AggregateFormatAndRoundTrip) {
  std::vector<AggregateRow> rows(2);
  rows[0] = {"two-stage-md", 4000, 0.5, "spectral_norm", 0.1, 0.02, 10};
  rows[1] = {"oracle-private", 8000, kInf, "test_mse", 1.0 / 3.0, kNaN, 1};
  std::ostringstream out;
  WriteAggregateCsv(rows, out);
  EXPECT_EQ(out.str(),
            "algorithm,n,epsilon,metric,mean,std,count\n"
            "two-stage-md,4000,0.5,spectral_norm,0.1,0.02,10\n"
            "oracle-private,8000,inf,test_mse,0.3333333333333333,nan,1\n");
  std::istringstream in(out.str());
  const std::vector<AggregateRow> back = ReadAggregateCsv(in, "agg.csv");
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].algorithm, rows[i].algorithm);
    EXPECT_EQ(back[i].n, rows[i].n);
    EXPECT_EQ(back[i].epsilon, rows[i].epsilon);
    EXPECT_EQ(back[i].metric, rows[i].metric);
    EXPECT_EQ(back[i].mean, rows[i].mean);
    EXPECT_EQ(back[i].count, rows[i].count);
  }
  EXPECT_EQ(back[0].std, 0.02);
  EXPECT_TRUE(std::isnan(back[1].std));
}

TEST(CsvTest, SweepAggregateRoundTrips) {
  const std::vector<AggregateRow> rows = Aggregate(RunSweep(TinyConfig(), 1));
  std::ostringstream out;
  WriteAggregateCsv(rows, out);
  std::istringstream in(out.str());
  const std::vector<AggregateRow> back = ReadAggregateCsv(in, "agg.csv");
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].mean, rows[i].mean);
    EXPECT_EQ(back[i].std, rows[i].std);
  }
}

std::string ReadError(const std::string& text) {
  std::istringstream in(text);
  try {
    ReadAggregateCsv(in, "agg.csv");
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return "";
}

TEST(CsvTest, AggregateReadErrors) {
  const std::string header = "algorithm,n,epsilon,metric,mean,std,count\n";
  EXPECT_EQ(ReadError("a,b\n"), "agg.csv:1: unexpected aggregate header");
  EXPECT_EQ(ReadError(""), "agg.csv:1: unexpected aggregate header");
  EXPECT_EQ(ReadError(header + "x,1,1,test_mse,1,1\n").rfind("agg.csv:2:", 0), 0u);
  EXPECT_EQ(ReadError(header + "x,1,1,test_mse,1,1,1\nx,1,oops,test_mse,1,1,1\n")
                .rfind("agg.csv:3:", 0),
            0u);
  EXPECT_NE(ReadError(header + "x,1,1,accuracy,1,1,1\n").find("metric"),
            std::string::npos);
}

}  // namespace
}  // namespace dpadapt
