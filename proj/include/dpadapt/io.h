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

// Sample files: a header `x1,...,xd` with an optional trailing `y`, then one
// point per line. Errors name the file and the 1-based line.

#ifndef DPADAPT_IO_H_
#define DPADAPT_IO_H_

#include <istream>
#include <string>

#include "dpadapt/points.h"

namespace dpadapt {

// Shortest round-trip decimal; "inf", "-inf" and "nan" for the specials.
std::string FormatDouble(double v);

// Parses a full decimal or inf/infinity (any case, optional sign). Returns
// false on anything else, including trailing characters.
bool ParseDouble(const std::string& text, double* out);

struct SampleTable {
  PointSet points;
  std::vector<double> labels;
  bool has_labels = false;
};

SampleTable ReadSampleCsv(std::istream& in, const std::string& name);
SampleTable ReadSampleCsvFile(const std::string& path);

// Require (or forbid) the y column.
LabeledSample ReadLabeledCsvFile(const std::string& path);
PointSet ReadUnlabeledCsvFile(const std::string& path);

}  // namespace dpadapt

#endif  // DPADAPT_IO_H_
