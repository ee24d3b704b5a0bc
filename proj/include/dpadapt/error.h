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

#ifndef DPADAPT_ERROR_H_
#define DPADAPT_ERROR_H_

#include <stdexcept>
#include <string>

namespace dpadapt {

// Malformed data: non-finite entries, empty samples, norm violations,
// dimension mismatches.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A scalar parameter outside its admissible range (mu <= 0, p < 1, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The input was valid but the computation could not complete: singular
// systems, inner solvers that fail to reach tolerance.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericFailure {
 public:
  ConvergenceError(const std::string& what, double final_gap)
      : NumericFailure(what), final_gap_(final_gap) {}

  double final_gap() const { return final_gap_; }

 private:
  double final_gap_;
};

}  // namespace dpadapt

#endif  // DPADAPT_ERROR_H_
