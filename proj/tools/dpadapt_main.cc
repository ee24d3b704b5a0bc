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

// dpadapt adapt       --source S.csv --target T.csv --method M --epsilon E
//                     --delta D --lambda-cap L --out DIR [...]
// dpadapt experiment  --config C.toml --out DIR [--jobs N]
//
// Exit status: 0 success, 2 bad input or parameters, 3 numeric failure.

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpadapt/error.h"
#include "dpadapt/experiments.h"
#include "dpadapt/io.h"
#include "dpadapt/pipeline.h"
#include "json.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

struct AdaptFlags {
  std::string source;
  std::string target;
  std::string method;
  std::string epsilon;
  double delta = 0.0;
  double lambda_cap = 0.0;
  std::optional<double> mu;
  std::optional<int> k;
  std::optional<double> eta;
  std::optional<double> radius;
  double reg = 0.0;
  double beta = dpadapt::kDefaultBeta;
  std::uint64_t seed = 0;
  std::string out;
};

struct ExperimentFlags {
  std::string config;
  std::string out;
  int jobs = 1;
};

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json Number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json NumberArray(std::span<const double> values) {
  json arr = json::array();
  for (double v : values) arr.push_back(Number(v));
  return arr;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

fs::path PrepareOutput(const std::string& dir, const json& manifest) {
  const fs::path out(dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) {
    throw dpadapt::InvalidInput("cannot create output directory '" + dir +
                                "': " + ec.message());
  }
  WriteText(out / "manifest.json", manifest.dump(2) + "\n");
  return out;
}

int RunAdapt(const AdaptFlags& f, const std::vector<std::string>& argv) {
  double epsilon = 0.0;
  if (!dpadapt::ParseDouble(f.epsilon, &epsilon)) {
    throw dpadapt::InvalidParameter("--epsilon: '" + f.epsilon +
                                    "' is not a number (use inf for none)");
  }
  dpadapt::AdaptationOptions opts;
  opts.method = dpadapt::ParseMethod(f.method);
  opts.budget = dpadapt::PrivacyBudget::Make(epsilon, f.delta);
  opts.lambda_bound = f.lambda_cap;
  opts.reg = f.reg;
  opts.beta = f.beta;
  opts.iterations = f.k;
  opts.mu = f.mu;
  opts.eta = f.eta;

  json manifest = {{"command", "adapt"},
                   {"config_path", nullptr},
                   {"seed", f.seed},
                   {"output_dir", f.out},
                   {"timestamp", UtcTimestamp()},
                   {"argv", argv}};
  const fs::path out = PrepareOutput(f.out, manifest);

  const dpadapt::LabeledSample source = dpadapt::ReadLabeledCsvFile(f.source);
  const dpadapt::PointSet target_points =
      dpadapt::ReadUnlabeledCsvFile(f.target);
  // Without --radius the bound is read off both samples.
  opts.radius = f.radius ? *f.radius
                         : std::max(source.points.MaxNorm(),
                                    target_points.MaxNorm());
  const dpadapt::PrivateSample target(target_points);
  dpadapt::RandomStream rng(f.seed);
  const dpadapt::AdaptationResult result =
      dpadapt::Adapt(source, target, opts, rng);

  std::ostringstream trace;
  dpadapt::WriteTraceCsv(result.trace, trace);
  WriteText(out / "trace.csv", trace.str());

  const dpadapt::BoundTerms& b = result.bound_terms;
  json doc = {
      {"method", dpadapt::MethodName(opts.method)},
      {"q_hat", NumberArray(result.q_hat.values())},
      {"w", NumberArray(result.hypothesis.w)},
      {"discrepancy", Number(result.discrepancy_exact)},
      {"spectral_norm", Number(result.spectral_norm)},
      {"bound_terms",
       {{"weighted_empirical_loss", Number(b.weighted_empirical_loss)},
        {"discrepancy_exact", Number(b.discrepancy_exact)},
        {"rademacher_term", Number(b.rademacher_term)},
        {"confidence_term", Number(b.confidence_term)},
        {"eta_H", b.eta_h}}},
      {"trace_path", "trace.csv"},
      {"schedule",
       {{"iterations", result.iterations},
        {"mu", Number(result.mu)},
        {"eta", Number(result.eta)},
        {"sigma", Number(result.sigma)},
        {"radius", Number(opts.radius)}}}};
  WriteText(out / "result.json", doc.dump(2) + "\n");
  return 0;
}

int RunExperiment(const ExperimentFlags& f,
                  const std::vector<std::string>& argv) {
  if (f.jobs < 1) throw dpadapt::InvalidParameter("--jobs must be >= 1");
  const dpadapt::ExperimentConfig cfg = dpadapt::LoadConfigFile(f.config);
  json manifest = {{"command", "experiment"},
                   {"config_path", f.config},
                   {"config", json::parse(dpadapt::ConfigToJson(cfg))},
                   {"seed", cfg.base_seed},
                   {"output_dir", f.out},
                   {"timestamp", UtcTimestamp()},
                   {"argv", argv}};
  const fs::path out = PrepareOutput(f.out, manifest);

  const std::vector<dpadapt::ExperimentRecord> records =
      dpadapt::RunSweep(cfg, f.jobs);
  std::ostringstream raw;
  dpadapt::WriteRawCsv(records, raw);
  WriteText(out / "raw.csv", raw.str());
  std::ostringstream agg;
  dpadapt::WriteAggregateCsv(dpadapt::Aggregate(records), agg);
  WriteText(out / "aggregate.csv", agg.str());

  std::size_t failed = 0;
  for (const auto& r : records) failed += r.status != "ok";
  if (failed > 0) {
    std::cerr << "dpadapt: " << failed << " of " << records.size()
              << " cells failed; see the status column of raw.csv\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private domain adaptation"};
  app.require_subcommand(1);
  std::vector<std::string> args(argv, argv + argc);

  AdaptFlags af;
  CLI::App* adapt = app.add_subcommand(
      "adapt", "Reweight a public source sample toward a private target");
  adapt->add_option("--source", af.source, "Labeled source CSV (x1..xd,y)")
      ->required();
  adapt->add_option("--target", af.target, "Unlabeled target CSV (x1..xd)")
      ->required();
  adapt->add_option("--method", af.method,
                    "two-stage-fw, two-stage-md or single-stage")
      ->required();
  adapt->add_option("--epsilon", af.epsilon, "Privacy epsilon (inf: none)")
      ->required();
  adapt->add_option("--delta", af.delta, "Privacy delta")->required();
  adapt->add_option("--lambda-cap", af.lambda_cap,
                    "Norm bound Lambda of the linear hypotheses")
      ->required();
  adapt->add_option("--mu", af.mu, "Softmax sharpness (default: schedule)");
  adapt->add_option("--k", af.k, "Iterations (default: schedule)");
  adapt->add_option("--eta", af.eta,
                    "Step size for mirror descent and single-stage");
  adapt->add_option("--radius", af.radius,
                    "Bound r on point norms (default: largest observed)");
  adapt->add_option("--lambda", af.reg,
                    "l2 weight on q in the two-stage objective")
      ->capture_default_str();
  adapt->add_option("--beta", af.beta, "Failure probability in the schedules")
      ->capture_default_str();
  adapt->add_option("--seed", af.seed, "Seed for all randomness")
      ->capture_default_str();
  adapt->add_option("--out", af.out, "Output directory")->required();

  ExperimentFlags ef;
  CLI::App* experiment =
      app.add_subcommand("experiment", "Run the synthetic benchmark sweep");
  experiment->add_option("--config", ef.config, "TOML or JSON config")
      ->required();
  experiment->add_option("--out", ef.out, "Output directory")->required();
  experiment->add_option("--jobs", ef.jobs, "Worker threads")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    const CLI::App* scope = &app;
    if (adapt->parsed()) scope = adapt;
    if (experiment->parsed()) scope = experiment;
    std::cerr << scope->help();
    return kExitInput;
  }

  try {
    if (app.got_subcommand(adapt)) return RunAdapt(af, args);
    return RunExperiment(ef, args);
  } catch (const dpadapt::InvalidInput& e) {
    std::cerr << "dpadapt: input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const dpadapt::InvalidParameter& e) {
    std::cerr << "dpadapt: invalid parameter: " << e.what() << "\n";
    return kExitInput;
  } catch (const dpadapt::NumericFailure& e) {
    std::cerr << "dpadapt: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "dpadapt: " << e.what() << "\n";
    return 1;
  }
}
