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

#include "dpadapt/points.h"

#include <algorithm>
#include <string>

#include "dpadapt/error.h"
#include "dpadapt/linalg.h"

namespace dpadapt {

PointSet::PointSet(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0 && !coords_.empty()) {
    throw InvalidInput("PointSet: zero dimension with nonempty coordinates");
  }
  if (dim_ != 0 && coords_.size() % dim_ != 0) {
    throw InvalidInput("PointSet: coordinate count " +
                       std::to_string(coords_.size()) +
                       " is not a multiple of dimension " +
                       std::to_string(dim_));
  }
}

PointSet PointSet::FromRows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return PointSet();
  PointSet out(rows.front().size(), {});
  for (const auto& r : rows) out.Append(r);
  return out;
}

void PointSet::Append(std::span<const double> x) {
  if (dim_ == 0) dim_ = x.size();
  if (x.size() != dim_) {
    throw InvalidInput("PointSet: point of dimension " +
                       std::to_string(x.size()) + " appended to a set of dimension " +
                       std::to_string(dim_));
  }
  coords_.insert(coords_.end(), x.begin(), x.end());
}

double PointSet::MaxNorm() const {
  double r = 0.0;
  for (std::size_t i = 0; i < size(); ++i) r = std::max(r, Norm2(row(i)));
  return r;
}

void LabeledSample::Validate() const {
  if (labels.size() != points.size()) {
    throw InvalidInput("labeled sample has " + std::to_string(points.size()) +
                       " points but " + std::to_string(labels.size()) +
                       " labels");
  }
}

}  // namespace dpadapt
