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

#include "dpadapt/io.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dpadapt/error.h"

namespace dpadapt {
namespace {

std::string Trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> SplitCommas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(Trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

[[noreturn]] void Fail(const std::string& name, std::size_t line,
                       const std::string& msg) {
  throw InvalidInput(name + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

bool ParseDouble(const std::string& raw, double* out) {
  const std::string text = Trim(raw);
  if (text.empty()) return false;
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  const bool neg = lower.front() == '-';
  const std::string body =
      (lower.front() == '-' || lower.front() == '+') ? lower.substr(1) : lower;
  if (body == "inf" || body == "infinity") {
    *out = neg ? -std::numeric_limits<double>::infinity()
               : std::numeric_limits<double>::infinity();
    return true;
  }
  const char* first = text.data();
  if (*first == '+') ++first;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, *out);
  return ec == std::errc() && ptr == last;
}

SampleTable ReadSampleCsv(std::istream& in, const std::string& name) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) Fail(name, 1, "empty file, expected a header");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = SplitCommas(line);
  SampleTable table;
  std::size_t dim = header.size();
  if (!header.empty() && header.back() == "y") {
    table.has_labels = true;
    --dim;
  }
  if (dim == 0) Fail(name, 1, "header has no feature columns");
  for (std::size_t j = 0; j < dim; ++j) {
    if (header[j] != "x" + std::to_string(j + 1)) {
      Fail(name, 1,
           "column " + std::to_string(j + 1) + " is '" + header[j] +
               "', expected 'x" + std::to_string(j + 1) + "'");
    }
  }
  std::vector<double> coords;
  std::vector<double> row(dim);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    const std::vector<std::string> fields = SplitCommas(line);
    if (fields.size() != header.size()) {
      Fail(name, line_no,
           "expected " + std::to_string(header.size()) + " columns, found " +
               std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      double v = 0.0;
      if (!ParseDouble(fields[j], &v)) {
        Fail(name, line_no, "column '" + header[j] + "': '" + fields[j] +
                                "' is not a number");
      }
      if (!std::isfinite(v)) {
        Fail(name, line_no, "column '" + header[j] + "' is not finite");
      }
      if (j < dim) {
        coords.push_back(v);
      } else {
        table.labels.push_back(v);
      }
    }
  }
  if (coords.empty()) Fail(name, line_no, "no data rows");
  table.points = PointSet(dim, std::move(coords));
  return table;
}

SampleTable ReadSampleCsvFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  return ReadSampleCsv(in, path);
}

LabeledSample ReadLabeledCsvFile(const std::string& path) {
  SampleTable t = ReadSampleCsvFile(path);
  if (!t.has_labels) {
    throw InvalidInput(path + ":1: missing the label column 'y'");
  }
  return {std::move(t.points), std::move(t.labels)};
}

PointSet ReadUnlabeledCsvFile(const std::string& path) {
  SampleTable t = ReadSampleCsvFile(path);
  if (t.has_labels) {
    throw InvalidInput(path +
                       ":1: target sample must not carry a label column 'y'");
  }
  return std::move(t.points);
}

}  // namespace dpadapt
