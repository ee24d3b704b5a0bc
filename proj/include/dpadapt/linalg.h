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

// Dense symmetric-matrix kernel. Dimensions in this library are small (tens),
// so everything is row-major, dense and dependency-free.

#ifndef DPADAPT_LINALG_H_
#define DPADAPT_LINALG_H_

#include <cstddef>
#include <span>
#include <vector>

namespace dpadapt {

// A real symmetric d x d matrix. Every constructor and mutator keeps
// entries(i, j) == entries(j, i) bit for bit.
class SymMatrix {
 public:
  SymMatrix() = default;
  // Zero matrix.
  explicit SymMatrix(std::size_t dim);

  // Symmetrizes (A + A^T) / 2. Throws InvalidInput on size mismatch or a
  // non-finite entry.
  static SymMatrix FromRowMajor(std::size_t dim, std::span<const double> a);
  static SymMatrix Identity(std::size_t dim);
  static SymMatrix Diagonal(std::span<const double> diag);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * dim_ + j];
  }
  std::span<const double> data() const { return entries_; }

  // this += scale * x x^T.
  void AddOuter(std::span<const double> x, double scale);
  // this += scale * other.
  void AddScaled(const SymMatrix& other, double scale);
  void Scale(double factor);

  // x^T this x.
  double QuadraticForm(std::span<const double> x) const;
  double Trace() const;
  double FrobeniusNorm() const;
  double MaxAbs() const;
  bool AllFinite() const;

  SymMatrix operator-() const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> entries_;
};

// Eigenpairs sorted by decreasing eigenvalue. Column k of the row-major
// `vectors` array is the unit eigenvector for values[k].
struct Eigensystem {
  std::vector<double> values;
  std::vector<double> vectors;
  std::size_t dim = 0;

  double vector(std::size_t row, std::size_t k) const {
    return vectors[row * dim + k];
  }
  // Squared projections (v_k . x)^2 for every k.
  std::vector<double> SquaredProjections(std::span<const double> x) const;
  // V diag(weights) V^T.
  SymMatrix Compose(std::span<const double> weights) const;
};

// Cyclic Jacobi eigensolver. Stops when the off-diagonal Frobenius norm
// drops below 1e-13 * ||M||_F; at most 100 sweeps.
Eigensystem Eigh(const SymMatrix& m);

// max(|lambda_1|, |lambda_d|).
double SpectralNorm(const SymMatrix& m);

// (1/mu) log Tr exp(mu M), shifted by lambda_max so that no exponential
// overflows. Throws InvalidParameter when mu <= 0.
double LogTraceExp(const SymMatrix& m, double mu);
double LogTraceExp(const Eigensystem& eig, double mu);

// exp(mu M) / Tr exp(mu M).
SymMatrix ExpWeights(const SymMatrix& m, double mu);

double FrobeniusProduct(const SymMatrix& a, const SymMatrix& b);

double Dot(std::span<const double> a, std::span<const double> b);
double Norm2(std::span<const double> a);

}  // namespace dpadapt

#endif  // DPADAPT_LINALG_H_
