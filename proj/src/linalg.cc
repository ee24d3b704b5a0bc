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

#include "dpadapt/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dpadapt/error.h"

namespace dpadapt {
namespace {

constexpr double kJacobiRelTol = 1e-13;
constexpr int kJacobiMaxSweeps = 100;

void CheckMu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw InvalidParameter("mu must be a positive finite real, got " +
                           std::to_string(mu));
  }
}

double OffDiagonalNorm(const std::vector<double>& a, std::size_t d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (i != j) s += a[i * d + j] * a[i * d + j];
    }
  }
  return std::sqrt(s);
}

}  // namespace

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim, 0.0) {}

SymMatrix SymMatrix::FromRowMajor(std::size_t dim, std::span<const double> a) {
  if (a.size() != dim * dim) {
    throw InvalidInput("expected " + std::to_string(dim * dim) +
                       " entries, got " + std::to_string(a.size()));
  }
  SymMatrix out(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double v = a[i * dim + j];
      if (!std::isfinite(v)) {
        throw InvalidInput("non-finite matrix entry at (" + std::to_string(i) +
                           ", " + std::to_string(j) + ")");
      }
    }
  }
  for (std::size_t i = 0; i < dim; ++i) {
    out.entries_[i * dim + i] = a[i * dim + i];
    for (std::size_t j = i + 1; j < dim; ++j) {
      const double v = 0.5 * (a[i * dim + j] + a[j * dim + i]);
      out.entries_[i * dim + j] = v;
      out.entries_[j * dim + i] = v;
    }
  }
  return out;
}

SymMatrix SymMatrix::Identity(std::size_t dim) {
  SymMatrix out(dim);
  for (std::size_t i = 0; i < dim; ++i) out.entries_[i * dim + i] = 1.0;
  return out;
}

SymMatrix SymMatrix::Diagonal(std::span<const double> diag) {
  SymMatrix out(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    out.entries_[i * diag.size() + i] = diag[i];
  }
  return out;
}

void SymMatrix::AddOuter(std::span<const double> x, double scale) {
  if (x.size() != dim_) throw InvalidInput("AddOuter: dimension mismatch");
  for (std::size_t i = 0; i < dim_; ++i) {
    const double sxi = scale * x[i];
    entries_[i * dim_ + i] += sxi * x[i];
    for (std::size_t j = i + 1; j < dim_; ++j) {
      const double v = sxi * x[j];
      entries_[i * dim_ + j] += v;
      entries_[j * dim_ + i] += v;
    }
  }
}

void SymMatrix::AddScaled(const SymMatrix& other, double scale) {
  if (other.dim_ != dim_) throw InvalidInput("AddScaled: dimension mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    entries_[k] += scale * other.entries_[k];
  }
}

void SymMatrix::Scale(double factor) {
  for (double& v : entries_) v *= factor;
}

double SymMatrix::QuadraticForm(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) row += entries_[i * dim_ + j] * x[j];
    s += x[i] * row;
  }
  return s;
}

double SymMatrix::Trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) s += entries_[i * dim_ + i];
  return s;
}

double SymMatrix::FrobeniusNorm() const {
  double s = 0.0;
  for (double v : entries_) s += v * v;
  return std::sqrt(s);
}

double SymMatrix::MaxAbs() const {
  double s = 0.0;
  for (double v : entries_) s = std::max(s, std::abs(v));
  return s;
}

bool SymMatrix::AllFinite() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](double v) { return std::isfinite(v); });
}

SymMatrix SymMatrix::operator-() const {
  SymMatrix out = *this;
  out.Scale(-1.0);
  return out;
}

std::vector<double> Eigensystem::SquaredProjections(
    std::span<const double> x) const {
  std::vector<double> out(dim, 0.0);
  for (std::size_t k = 0; k < dim; ++k) {
    double p = 0.0;
    for (std::size_t i = 0; i < dim; ++i) p += vectors[i * dim + k] * x[i];
    out[k] = p * p;
  }
  return out;
}

SymMatrix Eigensystem::Compose(std::span<const double> weights) const {
  std::vector<double> a(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        s += weights[k] * vectors[i * dim + k] * vectors[j * dim + k];
      }
      a[i * dim + j] = s;
      a[j * dim + i] = s;
    }
  }
  return SymMatrix::FromRowMajor(dim, a);
}

Eigensystem Eigh(const SymMatrix& m) {
  if (!m.AllFinite()) throw InvalidInput("Eigh: matrix has a non-finite entry");
  const std::size_t d = m.dim();
  std::vector<double> a(m.data().begin(), m.data().end());
  std::vector<double> v(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) v[i * d + i] = 1.0;

  const double threshold = kJacobiRelTol * m.FrobeniusNorm();
  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    if (OffDiagonalNorm(a, d) <= threshold) break;
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = a[p * d + q];
        if (apq == 0.0) continue;
        const double tau = (a[q * d + q] - a[p * d + p]) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          const double akp = a[k * d + p];
          const double akq = a[k * d + q];
          a[k * d + p] = c * akp - s * akq;
          a[k * d + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double apk = a[p * d + k];
          const double aqk = a[q * d + k];
          a[p * d + k] = c * apk - s * aqk;
          a[q * d + k] = s * apk + c * aqk;
        }
        a[p * d + q] = 0.0;
        a[q * d + p] = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double vkp = v[k * d + p];
          const double vkq = v[k * d + q];
          v[k * d + p] = c * vkp - s * vkq;
          v[k * d + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x * d + x] > a[y * d + y];
  });
  Eigensystem out;
  out.dim = d;
  out.values.resize(d);
  out.vectors.resize(d * d);
  for (std::size_t k = 0; k < d; ++k) {
    out.values[k] = a[order[k] * d + order[k]];
    for (std::size_t i = 0; i < d; ++i) {
      out.vectors[i * d + k] = v[i * d + order[k]];
    }
  }
  return out;
}

double SpectralNorm(const SymMatrix& m) {
  if (m.dim() == 0) return 0.0;
  const Eigensystem eig = Eigh(m);
  return std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
}

double LogTraceExp(const Eigensystem& eig, double mu) {
  CheckMu(mu);
  const double top = eig.values.front();
  double s = 0.0;
  for (double lambda : eig.values) s += std::exp(mu * (lambda - top));
  return top + std::log(s) / mu;
}

double LogTraceExp(const SymMatrix& m, double mu) {
  CheckMu(mu);
  return LogTraceExp(Eigh(m), mu);
}

SymMatrix ExpWeights(const SymMatrix& m, double mu) {
  CheckMu(mu);
  const Eigensystem eig = Eigh(m);
  const double top = eig.values.front();
  std::vector<double> w(eig.dim);
  double total = 0.0;
  for (std::size_t k = 0; k < eig.dim; ++k) {
    w[k] = std::exp(mu * (eig.values[k] - top));
    total += w[k];
  }
  for (double& x : w) x /= total;
  return eig.Compose(w);
}

double FrobeniusProduct(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidInput("FrobeniusProduct: dim mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    s += a.data()[k] * b.data()[k];
  }
  return s;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double Norm2(std::span<const double> a) { return std::sqrt(Dot(a, a)); }

}  // namespace dpadapt
