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

#ifndef DPADAPT_POINTS_H_
#define DPADAPT_POINTS_H_

#include <cstddef>
#include <span>
#include <vector>

namespace dpadapt {

// n points in R^d, row-major.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t dim, std::vector<double> coords);
  static PointSet FromRows(const std::vector<std::vector<double>>& rows);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const { return size() == 0; }
  std::span<const double> row(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  std::span<const double> coords() const { return coords_; }

  void Append(std::span<const double> x);
  double MaxNorm() const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

// Public labeled sample.
struct LabeledSample {
  PointSet points;
  std::vector<double> labels;

  std::size_t size() const { return points.size(); }
  std::size_t dim() const { return points.dim(); }
  // Throws InvalidInput unless labels.size() == points.size().
  void Validate() const;
};

// Read-only view of the private unlabeled sample. Every row read is counted
// so callers can check which stages actually touched private data.
class PrivateSample {
 public:
  explicit PrivateSample(const PointSet& points) : points_(&points) {}

  std::size_t size() const { return points_->size(); }
  std::size_t dim() const { return points_->dim(); }
  std::span<const double> row(std::size_t i) const {
    ++reads_;
    return points_->row(i);
  }
  std::size_t reads() const { return reads_; }

 private:
  const PointSet* points_;
  mutable std::size_t reads_ = 0;
};

}  // namespace dpadapt

#endif  // DPADAPT_POINTS_H_
