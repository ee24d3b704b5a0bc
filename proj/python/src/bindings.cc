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


#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dpadapt/calibration.h"
#include "dpadapt/discrepancy.h"
#include "dpadapt/error.h"
#include "dpadapt/experiments.h"
#include "dpadapt/linalg.h"
#include "dpadapt/pipeline.h"
#include "dpadapt/points.h"
#include "dpadapt/regression.h"

namespace py = pybind11;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

dpadapt::PointSet ToPoints(const Array& a, const char* what) {
  if (a.ndim() != 2) {
    throw dpadapt::InvalidInput(std::string(what) + " must be a 2-D array");
  }
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return dpadapt::PointSet(cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

std::vector<double> ToVector(const Array& a) {
  if (a.ndim() != 1) throw dpadapt::InvalidInput("expected a 1-D array");
  return {a.data(), a.data() + a.shape(0)};
}

py::array_t<double> ToArray(std::span<const double> v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

double DefaultRadius(const dpadapt::PointSet& a, const dpadapt::PointSet& b,
                     std::optional<double> radius) {
  return radius ? *radius : std::max(a.MaxNorm(), b.MaxNorm());
}

dpadapt::DiscrepancyModel Model(const Array& source, const Array& target,
                                std::optional<double> radius) {
  const dpadapt::PointSet s = ToPoints(source, "source");
  const dpadapt::PointSet t = ToPoints(target, "target");
  return dpadapt::BuildModel(s, t, DefaultRadius(s, t, radius));
}

py::dict Adapt(const Array& source_x, const Array& source_y,
               const Array& target_x, const std::string& method, double epsilon,
               double delta, double lambda_bound, std::optional<double> radius,
               std::optional<double> mu, std::optional<int> iterations,
               std::optional<double> eta, double reg, double beta,
               std::uint64_t seed) {
  dpadapt::LabeledSample source{ToPoints(source_x, "source_x"), ToVector(source_y)};
  source.Validate();
  const dpadapt::PointSet target_points = ToPoints(target_x, "target_x");
  dpadapt::AdaptationOptions opts;
  opts.method = dpadapt::ParseMethod(method);
  opts.budget = dpadapt::PrivacyBudget::Make(epsilon, delta);
  opts.lambda_bound = lambda_bound;
  opts.radius = DefaultRadius(source.points, target_points, radius);
  opts.mu = mu;
  opts.iterations = iterations;
  opts.eta = eta;
  opts.reg = reg;
  opts.beta = beta;
  dpadapt::RandomStream rng(seed);
  dpadapt::AdaptationResult r;
  {
    py::gil_scoped_release release;
    r = dpadapt::Adapt(source, dpadapt::PrivateSample(target_points), opts, rng);
  }
  py::dict bound;
  bound["weighted_empirical_loss"] = r.bound_terms.weighted_empirical_loss;
  bound["discrepancy_exact"] = r.bound_terms.discrepancy_exact;
  bound["rademacher_term"] = r.bound_terms.rademacher_term;
  bound["confidence_term"] = r.bound_terms.confidence_term;
  bound["eta_H"] = r.bound_terms.eta_h;
  py::dict out;
  out["method"] = dpadapt::MethodName(opts.method);
  out["q_hat"] = ToArray(r.q_hat.values());
  out["w"] = ToArray(r.hypothesis.w);
  out["discrepancy"] = r.discrepancy_exact;
  out["spectral_norm"] = r.spectral_norm;
  out["iterations"] = r.iterations;
  out["mu"] = r.mu;
  out["eta"] = r.eta;
  out["sigma"] = r.sigma;
  out["radius"] = opts.radius;
  out["bound_terms"] = bound;
  return out;
}

py::list Records(const std::vector<dpadapt::ExperimentRecord>& records) {
  py::list out;
  for (const auto& r : records) {
    py::dict row;
    row["algorithm"] = r.algorithm;
    row["n"] = r.n;
    row["epsilon"] = r.epsilon;
    row["repeat"] = r.repeat;
    row["seed"] = r.seed;
    row["spectral_norm"] = r.spectral_norm;
    row["test_mse"] = r.test_mse;
    row["status"] = r.status;
    out.append(row);
  }
  return out;
}

py::tuple RunExperiment(const std::string& config, int jobs) {
  const dpadapt::ExperimentConfig cfg = dpadapt::ParseConfig(config, "<config>");
  std::vector<dpadapt::ExperimentRecord> records;
  {
    py::gil_scoped_release release;
    records = dpadapt::RunSweep(cfg, jobs);
  }
  std::ostringstream raw, agg;
  dpadapt::WriteRawCsv(records, raw);
  dpadapt::WriteAggregateCsv(dpadapt::Aggregate(records), agg);
  return py::make_tuple(Records(records), raw.str(), agg.str());
}

py::list ReadAggregate(const std::string& text) {
  std::istringstream in(text);
  py::list out;
  for (const auto& r : dpadapt::ReadAggregateCsv(in, "<aggregate>")) {
    py::dict row;
    row["algorithm"] = r.algorithm;
    row["n"] = r.n;
    row["epsilon"] = r.epsilon;
    row["metric"] = r.metric;
    row["mean"] = r.mean;
    row["std"] = r.std;
    row["count"] = r.count;
    out.append(row);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Private domain adaptation by discrepancy minimization.";

  py::register_exception<dpadapt::InvalidInput>(m, "InvalidInput",
                                                PyExc_ValueError);
  py::register_exception<dpadapt::InvalidParameter>(m, "InvalidParameter",
                                                    PyExc_ValueError);
  py::register_exception<dpadapt::NumericFailure>(m, "NumericFailure",
                                                  PyExc_ArithmeticError);

  m.def("exact_discrepancy",
        [](const Array& source, const Array& target, const Array& q,
           double lambda_bound, std::optional<double> radius) {
          return dpadapt::ExactDiscrepancy(Model(source, target, radius),
                                           ToVector(q), lambda_bound);
        },
        py::arg("source"), py::arg("target"), py::arg("q"),
        py::arg("lambda_bound") = 1.0, py::arg("radius") = py::none(),
        "4 Lambda^2 ||M(q)||_2 for source and target point arrays.");
  m.def("weight_matrix",
        [](const Array& source, const Array& target, const Array& q) {
          const dpadapt::SymMatrix mq =
              dpadapt::WeightMatrix(Model(source, target, std::nullopt), ToVector(q));
          const auto d = static_cast<py::ssize_t>(mq.dim());
          py::array_t<double> out({d, d});
          auto view = out.mutable_unchecked<2>();
          for (py::ssize_t a = 0; a < d; ++a) {
            for (py::ssize_t b = 0; b < d; ++b) view(a, b) = mq(a, b);
          }
          return out;
        },
        py::arg("source"), py::arg("target"), py::arg("q"),
        "M(q) = M0 - sum_i q_i x_i x_i^T.");
  m.def("softmax_f",
        [](const Array& source, const Array& target, const Array& q, double mu) {
          return dpadapt::SoftmaxF(Model(source, target, std::nullopt), ToVector(q), mu);
        },
        py::arg("source"), py::arg("target"), py::arg("q"), py::arg("mu"));
  m.def("tilde_f",
        [](const Array& source, const Array& target, const Array& q, double mu,
           double reg) {
          const dpadapt::ValueAndGradient vg = dpadapt::TildeFWithGradient(
              Model(source, target, std::nullopt), ToVector(q), mu, reg);
          return py::make_tuple(vg.value, ToArray(vg.gradient));
        },
        py::arg("source"), py::arg("target"), py::arg("q"), py::arg("mu"),
        py::arg("reg") = 0.0, "Value and gradient of the two-sided softmax.");
  m.def("pnorm_g",
        [](const Array& source, const Array& target, const Array& q, int p) {
          return dpadapt::PnormG(Model(source, target, std::nullopt), ToVector(q), p);
        },
        py::arg("source"), py::arg("target"), py::arg("q"), py::arg("p"));
  m.def("adapt", &Adapt, py::arg("source_x"), py::arg("source_y"),
        py::arg("target_x"), py::arg("method") = "two-stage-fw",
        py::arg("epsilon") = 1.0, py::arg("delta") = 1e-5,
        py::arg("lambda_bound") = 1.0, py::arg("radius") = py::none(),
        py::arg("mu") = py::none(), py::arg("iterations") = py::none(),
        py::arg("eta") = py::none(), py::arg("reg") = 0.0,
        py::arg("beta") = dpadapt::kDefaultBeta, py::arg("seed") = 0,
        "Reweights the labeled source toward the private target and fits a "
        "ridge hypothesis.");
  m.def("run_experiment", &RunExperiment, py::arg("config"), py::arg("jobs") = 1,
        "Runs a sweep from JSON or TOML text; returns (records, raw_csv, "
        "aggregate_csv).");
  m.def("read_aggregate_csv", &ReadAggregate, py::arg("text"));
  m.attr("ALGORITHMS") = py::cast(std::vector<std::string>(
      std::begin(dpadapt::kAlgorithms), std::end(dpadapt::kAlgorithms)));
}
