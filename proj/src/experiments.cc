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

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "dpadapt/calibration.h"
#include "dpadapt/discrepancy.h"
#include "dpadapt/error.h"
#include "dpadapt/io.h"
#include "dpadapt/linalg.h"
#include "dpadapt/pipeline.h"
#include "dpadapt/regression.h"
#include "json.hpp"

namespace dpadapt {
namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t AlgorithmId(const std::string& name) {
  for (std::size_t i = 0; i < std::size(kAlgorithms); ++i) {
    if (name == kAlgorithms[i]) return i;
  }
  throw InvalidParameter("unknown algorithm '" + name + "'");
}

// ---- flat TOML -------------------------------------------------------------

std::string StripComment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::string TrimCopy(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class TomlReader {
 public:
  TomlReader(const std::string& name, std::size_t line)
      : name_(name), line_(line) {}

  json Value(const std::string& text) {
    const std::string t = TrimCopy(text);
    if (t.empty()) Fail("missing value");
    if (t.front() == '[') {
      if (t.back() != ']') Fail("unterminated array");
      json arr = json::array();
      const std::string body = t.substr(1, t.size() - 2);
      std::string item;
      bool in_string = false;
      for (char c : body) {
        if (c == '"') in_string = !in_string;
        if (c == ',' && !in_string) {
          if (!TrimCopy(item).empty()) arr.push_back(Scalar(item));
          item.clear();
        } else {
          item += c;
        }
      }
      if (in_string) Fail("unterminated string");
      if (!TrimCopy(item).empty()) arr.push_back(Scalar(item));
      return arr;
    }
    return Scalar(t);
  }

  [[noreturn]] void Fail(const std::string& msg) const {
    throw InvalidInput(name_ + ":" + std::to_string(line_) + ": " + msg);
  }

 private:
  json Scalar(const std::string& text) {
    const std::string t = TrimCopy(text);
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"') {
      return t.substr(1, t.size() - 2);
    }
    if (!t.empty() && t.front() == '"') Fail("unterminated string");
    std::uint64_t u = 0;
    auto [pu, eu] = std::from_chars(t.data(), t.data() + t.size(), u);
    if (eu == std::errc() && pu == t.data() + t.size()) return u;
    std::int64_t i = 0;
    auto [pi, ei] = std::from_chars(t.data(), t.data() + t.size(), i);
    if (ei == std::errc() && pi == t.data() + t.size()) return i;
    double d = 0.0;
    if (ParseDouble(t, &d)) return d;
    Fail("cannot parse value '" + t + "'");
  }

  std::string name_;
  std::size_t line_;
};

json ParseFlatToml(const std::string& text, const std::string& name) {
  json out = json::object();
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t start_line = line_no;
    std::string line = TrimCopy(StripComment(raw));
    if (line.empty()) continue;
    TomlReader reader(name, start_line);
    if (line.front() == '[') reader.Fail("tables are not supported");
    const auto eq = line.find('=');
    if (eq == std::string::npos) reader.Fail("expected 'key = value'");
    const std::string key = TrimCopy(line.substr(0, eq));
    std::string value = TrimCopy(line.substr(eq + 1));
    if (key.empty()) reader.Fail("empty key");
    // Arrays may continue over several lines.
    if (!value.empty() && value.front() == '[') {
      while (value.back() != ']') {
        if (!std::getline(in, raw)) {
          reader.Fail("array for '" + key + "' is not closed before end of file");
        }
        ++line_no;
        value += " " + TrimCopy(StripComment(raw));
        value = TrimCopy(value);
      }
    }
    if (out.contains(key)) reader.Fail("duplicate key '" + key + "'");
    out[key] = reader.Value(value);
  }
  return out;
}

// ---- schema ----------------------------------------------------------------

class Fields {
 public:
  explicit Fields(const std::string& name) : name_(name) {}

  [[noreturn]] void Fail(const std::string& key, const std::string& msg) const {
    throw InvalidInput(name_ + ": key '" + key + "': " + msg);
  }

  int Int(const std::string& key, const json& v) const {
    if (!v.is_number_integer()) Fail(key, "expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
      Fail(key, "integer out of range");
    }
    return static_cast<int>(x);
  }
  double Real(const std::string& key, const json& v) const {
    if (v.is_string()) {
      double d = 0.0;
      if (ParseDouble(v.get<std::string>(), &d)) return d;
    }
    if (!v.is_number()) Fail(key, "expected a number");
    return v.get<double>();
  }
  std::uint64_t Unsigned(const std::string& key, const json& v) const {
    if (!v.is_number_unsigned()) Fail(key, "expected a nonnegative integer");
    return v.get<std::uint64_t>();
  }
  const json& Array(const std::string& key, const json& v) const {
    if (!v.is_array()) Fail(key, "expected an array");
    return v;
  }

 private:
  std::string name_;
};

ExperimentConfig FromJson(const json& doc, const std::string& name) {
  if (!doc.is_object()) throw InvalidInput(name + ": config must be an object");
  Fields f(name);
  ExperimentConfig cfg;
  for (const auto& [key, v] : doc.items()) {
    if (key == "d") {
      cfg.d = f.Int(key, v);
    } else if (key == "sigma2") {
      cfg.sigma2 = f.Real(key, v);
    } else if (key == "m") {
      cfg.m = f.Int(key, v);
    } else if (key == "n_grid") {
      cfg.n_grid.clear();
      for (const json& x : f.Array(key, v)) cfg.n_grid.push_back(f.Int(key, x));
    } else if (key == "epsilons") {
      cfg.epsilons.clear();
      for (const json& x : f.Array(key, v)) cfg.epsilons.push_back(f.Real(key, x));
    } else if (key == "repeats") {
      cfg.repeats = f.Int(key, v);
    } else if (key == "K") {
      cfg.K = f.Int(key, v);
    } else if (key == "lambda") {
      cfg.lambda = f.Real(key, v);
    } else if (key == "delta") {
      cfg.delta = f.Real(key, v);
    } else if (key == "mixture_weight_P") {
      cfg.mixture_weight_P = f.Real(key, v);
    } else if (key == "test_size") {
      cfg.test_size = f.Int(key, v);
    } else if (key == "base_seed") {
      cfg.base_seed = f.Unsigned(key, v);
    } else if (key == "Lambda") {
      cfg.Lambda = f.Real(key, v);
    } else if (key == "radius") {
      cfg.radius = f.Real(key, v);
    } else if (key == "mu") {
      cfg.mu = f.Real(key, v);
    } else if (key == "algorithms") {
      cfg.algorithms.clear();
      for (const json& x : f.Array(key, v)) {
        if (!x.is_string()) f.Fail(key, "expected strings");
        cfg.algorithms.push_back(x.get<std::string>());
      }
    } else {
      f.Fail(key, "unknown key");
    }
  }
  try {
    cfg.Resolve();
  } catch (const InvalidParameter& e) {
    throw InvalidInput(name + ": " + e.what());
  }
  return cfg;
}

std::string CsvSafe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

void ExperimentConfig::Resolve() {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw InvalidParameter(msg);
  };
  require(d >= 1, "d must be >= 1");
  if (sigma2 == 0.0) sigma2 = 1.0 / (9.0 * d);
  require(sigma2 > 0.0 && std::isfinite(sigma2), "sigma2 must be positive");
  require(m >= 1, "m must be >= 1");
  require(!n_grid.empty(), "n_grid must not be empty");
  for (int n : n_grid) require(n >= 2, "every n in n_grid must be >= 2");
  if (epsilons.empty()) epsilons = {0.5, 1.0, 2.0, 4.0, kInf};
  for (double e : epsilons) require(e > 0.0, "every epsilon must be positive");
  require(repeats >= 1, "repeats must be >= 1");
  require(K >= 1, "K must be >= 1");
  require(lambda >= 0.0 && std::isfinite(lambda), "lambda must be >= 0");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  require(mixture_weight_P >= 0.0 && mixture_weight_P <= 1.0,
          "mixture_weight_P must lie in [0, 1]");
  require(test_size >= 1, "test_size must be >= 1");
  require(Lambda > 0.0 && std::isfinite(Lambda), "Lambda must be positive");
  require(radius >= 0.0 && std::isfinite(radius), "radius must be >= 0");
  require(mu >= 0.0 && std::isfinite(mu), "mu must be >= 0");
  if (algorithms.empty()) {
    algorithms.assign(std::begin(kAlgorithms), std::end(kAlgorithms));
  }
  for (std::size_t i = 0; i < algorithms.size(); ++i) {
    AlgorithmId(algorithms[i]);
    for (std::size_t j = 0; j < i; ++j) {
      require(algorithms[i] != algorithms[j],
              "algorithm '" + algorithms[i] + "' listed twice");
    }
  }
}

ExperimentConfig ParseConfig(const std::string& text, const std::string& name) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw InvalidInput(name + ": " + e.what());
    }
    return FromJson(doc, name);
  }
  return FromJson(ParseFlatToml(text, name), name);
}

ExperimentConfig LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return ParseConfig(text, path);
}

std::string ConfigToJson(const ExperimentConfig& cfg) {
  json eps = json::array();
  for (double e : cfg.epsilons) {
    if (std::isinf(e)) {
      eps.push_back("inf");
    } else {
      eps.push_back(e);
    }
  }
  json doc = {{"d", cfg.d},
              {"sigma2", cfg.sigma2},
              {"m", cfg.m},
              {"n_grid", cfg.n_grid},
              {"epsilons", eps},
              {"repeats", cfg.repeats},
              {"K", cfg.K},
              {"lambda", cfg.lambda},
              {"delta", cfg.delta},
              {"mixture_weight_P", cfg.mixture_weight_P},
              {"test_size", cfg.test_size},
              {"base_seed", cfg.base_seed},
              {"Lambda", cfg.Lambda},
              {"radius", cfg.radius},
              {"mu", cfg.mu},
              {"algorithms", cfg.algorithms}};
  return doc.dump(2);
}

std::vector<double> SourceCenter(int d) {
  return std::vector<double>(d, 1.0 / std::sqrt(2.0 * d));
}

std::vector<double> TargetCenter(int d) {
  std::vector<double> c(d);
  for (int i = 0; i < d; ++i) {
    c[i] = (i % 2 == 0 ? -1.0 : 1.0) / std::sqrt(2.0 * d);
  }
  return c;
}

double LabelFunction(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  s /= std::sqrt(static_cast<double>(x.size()));
  return s > 0.0 ? s : 0.5 * s;
}

PointSet SampleGaussian(const std::vector<double>& center, double variance,
                        std::size_t count, RandomStream& rng) {
  const double sd = std::sqrt(variance);
  const std::size_t d = center.size();
  std::vector<double> coords(count * d);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t a = 0; a < d; ++a) {
      coords[i * d + a] = center[a] + sd * rng.NextGaussian();
    }
  }
  return PointSet(d, std::move(coords));
}

SyntheticData GenerateSynthetic(const ExperimentConfig& cfg, int n,
                                std::uint64_t seed) {
  const RandomStream root(seed);
  RandomStream source_rng = root.Split(1);
  RandomStream target_rng = root.Split(2);
  RandomStream test_rng = root.Split(3);
  const std::vector<double> cp = TargetCenter(cfg.d);
  const std::vector<double> cq = SourceCenter(cfg.d);
  const double sd = std::sqrt(cfg.sigma2);

  SyntheticData data;
  std::vector<double> coords(static_cast<std::size_t>(cfg.m) * cfg.d);
  for (int i = 0; i < cfg.m; ++i) {
    const bool from_p = source_rng.NextOpenUniform() < cfg.mixture_weight_P;
    const std::vector<double>& c = from_p ? cp : cq;
    for (int a = 0; a < cfg.d; ++a) {
      coords[i * cfg.d + a] = c[a] + sd * source_rng.NextGaussian();
    }
  }
  data.source.points = PointSet(cfg.d, std::move(coords));
  data.target = SampleGaussian(cp, cfg.sigma2, n, target_rng);
  data.test.points = SampleGaussian(cp, cfg.sigma2, cfg.test_size, test_rng);
  for (std::size_t i = 0; i < data.source.points.size(); ++i) {
    data.source.labels.push_back(LabelFunction(data.source.points.row(i)));
  }
  for (std::size_t i = 0; i < data.target.size(); ++i) {
    data.target_labels.push_back(LabelFunction(data.target.row(i)));
  }
  for (std::size_t i = 0; i < data.test.points.size(); ++i) {
    data.test.labels.push_back(LabelFunction(data.test.points.row(i)));
  }
  return data;
}

std::uint64_t DataSeed(std::uint64_t base_seed, int n, int repeat) {
  return CombineSeeds(CombineSeeds(base_seed, static_cast<std::uint64_t>(n)),
                      static_cast<std::uint64_t>(repeat));
}

std::uint64_t CellSeed(std::uint64_t base_seed, std::size_t algorithm_id, int n,
                       std::size_t epsilon_index, int repeat) {
  std::uint64_t h = CombineSeeds(base_seed, algorithm_id);
  h = CombineSeeds(h, static_cast<std::uint64_t>(n));
  h = CombineSeeds(h, epsilon_index);
  return CombineSeeds(h, static_cast<std::uint64_t>(repeat));
}

namespace {

// Each private method takes mu from its own schedule; K stays fixed by the
// config. Noiseless cells use the Frank-Wolfe formula.
double DefaultMu(const AdaptationOptions& opts, const ProblemScale& scale,
                 int iterations) {
  if (opts.budget.noiseless()) return FrankWolfeMuFormula(scale, iterations);
  switch (opts.method) {
    case Method::kTwoStageMirrorDescent:
      return MirrorDescentMuFormula(scale, opts.budget, opts.beta, opts.reg);
    case Method::kSingleStage:
      return SingleStageMuFormula(scale, opts.budget);
    default:
      return FrankWolfeMuFormula(scale, iterations);
  }
}

}  // namespace

ExperimentRecord RunCell(const ExperimentConfig& cfg,
                         const std::string& algorithm, int n,
                         std::size_t epsilon_index, int repeat) {
  ExperimentRecord rec;
  rec.algorithm = algorithm;
  rec.n = n;
  rec.epsilon = cfg.epsilons.at(epsilon_index);
  rec.repeat = repeat;
  rec.seed = CellSeed(cfg.base_seed, AlgorithmId(algorithm), n, epsilon_index,
                      repeat);
  rec.spectral_norm = kNaN;
  rec.test_mse = kNaN;
  try {
    const SyntheticData data =
        GenerateSynthetic(cfg, n, DataSeed(cfg.base_seed, n, repeat));
    const double radius =
        cfg.radius > 0.0
            ? cfg.radius
            : std::max(data.source.points.MaxNorm(), data.target.MaxNorm());
    const std::size_t m = data.source.size();
    RidgeOptions ridge;
    ridge.norm_bound = cfg.Lambda;
    if (algorithm == "oracle-private") {
      const LabeledSample labeled{data.target, data.target_labels};
      const LinearHypothesis h =
          WeightedRidge(labeled, WeightVector::Uniform(data.target.size()), ridge);
      rec.test_mse = MeanSquaredError(h, data.test);
    } else if (algorithm == "public-only") {
      const WeightVector q = WeightVector::Uniform(m);
      const DiscrepancyModel model =
          BuildModel(data.source.points, data.target, radius);
      rec.spectral_norm = SpectralNorm(WeightMatrix(model, q));
      rec.test_mse = MeanSquaredError(WeightedRidge(data.source, q, ridge),
                                      data.test);
    } else {
      AdaptationOptions opts;
      opts.method = ParseMethod(algorithm);
      opts.lambda_bound = cfg.Lambda;
      opts.radius = radius;
      opts.budget = PrivacyBudget::Make(rec.epsilon, cfg.delta);
      opts.reg = cfg.lambda;
      opts.iterations = cfg.K;
      const ProblemScale scale{radius, data.source.points.MaxNorm(), m,
                               static_cast<std::size_t>(n)};
      opts.mu = cfg.mu > 0.0 ? cfg.mu : DefaultMu(opts, scale, cfg.K);
      RandomStream rng(rec.seed);
      const PrivateSample target(data.target);
      const AdaptationResult result = Adapt(data.source, target, opts, rng);
      rec.spectral_norm = result.spectral_norm;
      rec.test_mse = MeanSquaredError(result.hypothesis, data.test);
    }
  } catch (const std::exception& e) {
    rec.spectral_norm = kNaN;
    rec.test_mse = kNaN;
    rec.status = CsvSafe(std::string("error: ") + e.what());
  }
  return rec;
}

std::vector<ExperimentRecord> RunSweep(const ExperimentConfig& cfg, int jobs) {
  struct Cell {
    const std::string* algorithm;
    int n;
    std::size_t eps;
    int repeat;
  };
  std::vector<Cell> cells;
  for (const std::string& alg : cfg.algorithms) {
    for (int n : cfg.n_grid) {
      for (std::size_t e = 0; e < cfg.epsilons.size(); ++e) {
        for (int r = 0; r < cfg.repeats; ++r) cells.push_back({&alg, n, e, r});
      }
    }
  }
  std::vector<ExperimentRecord> out(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      out[i] = RunCell(cfg, *c.algorithm, c.n, c.eps, c.repeat);
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
  if (threads == 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  return out;
}

std::vector<AggregateRow> Aggregate(
    const std::vector<ExperimentRecord>& records) {
  using Cell = std::tuple<std::string, int, double>;
  std::vector<Cell> order;
  std::map<Cell, std::vector<const ExperimentRecord*>> by_cell;
  for (const ExperimentRecord& r : records) {
    const Cell key{r.algorithm, r.n, r.epsilon};
    auto [it, fresh] = by_cell.try_emplace(key);
    if (fresh) order.push_back(key);
    it->second.push_back(&r);
  }
  std::vector<AggregateRow> rows;
  auto emit = [&rows](const Cell& cell, const char* metric,
                      const std::vector<double>& values) {
    if (values.empty()) return;
    const double count = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= count;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    AggregateRow row;
    std::tie(row.algorithm, row.n, row.epsilon) = cell;
    row.metric = metric;
    row.mean = mean;
    row.std = values.size() > 1 ? std::sqrt(ss / (count - 1.0)) : kNaN;
    row.count = static_cast<int>(values.size());
    rows.push_back(row);
  };
  for (const Cell& cell : order) {
    std::vector<double> spectral;
    std::vector<double> mse;
    for (const ExperimentRecord* r : by_cell[cell]) {
      if (std::isfinite(r->spectral_norm)) spectral.push_back(r->spectral_norm);
      if (std::isfinite(r->test_mse)) mse.push_back(r->test_mse);
    }
    emit(cell, "spectral_norm", spectral);
    emit(cell, "test_mse", mse);
  }
  return rows;
}

void WriteRawCsv(const std::vector<ExperimentRecord>& records,
                 std::ostream& out) {
  out << "algorithm,n,epsilon,repeat,seed,spectral_norm,test_mse,status\n";
  for (const ExperimentRecord& r : records) {
    out << r.algorithm << ',' << r.n << ',' << FormatDouble(r.epsilon) << ','
        << r.repeat << ',' << r.seed << ',' << FormatDouble(r.spectral_norm)
        << ',' << FormatDouble(r.test_mse) << ',' << CsvSafe(r.status) << '\n';
  }
}

void WriteAggregateCsv(const std::vector<AggregateRow>& rows,
                       std::ostream& out) {
  out << "algorithm,n,epsilon,metric,mean,std,count\n";
  for (const AggregateRow& r : rows) {
    out << r.algorithm << ',' << r.n << ',' << FormatDouble(r.epsilon) << ','
        << r.metric << ',' << FormatDouble(r.mean) << ',' << FormatDouble(r.std)
        << ',' << r.count << '\n';
  }
}

std::vector<AggregateRow> ReadAggregateCsv(std::istream& in,
                                           const std::string& name) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) ||
      line != "algorithm,n,epsilon,metric,mean,std,count") {
    throw InvalidInput(name + ":1: unexpected aggregate header");
  }
  std::vector<AggregateRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    auto fail = [&](const std::string& msg) {
      throw InvalidInput(name + ":" + std::to_string(line_no) + ": " + msg);
    };
    if (f.size() != 7) fail("expected 7 columns");
    AggregateRow r;
    r.algorithm = f[0];
    r.metric = f[3];
    double n = 0.0;
    double count = 0.0;
    if (!ParseDouble(f[1], &n) || !ParseDouble(f[2], &r.epsilon) ||
        !ParseDouble(f[6], &count)) {
      fail("malformed number");
    }
    if (!ParseDouble(f[4], &r.mean)) r.mean = kNaN;
    if (!ParseDouble(f[5], &r.std)) r.std = kNaN;
    if (r.metric != "spectral_norm" && r.metric != "test_mse") {
      fail("unknown metric '" + r.metric + "'");
    }
    r.n = static_cast<int>(n);
    r.count = static_cast<int>(count);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace dpadapt
