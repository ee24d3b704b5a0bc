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

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "dpadapt/error.h"
#include "gtest/gtest.h"

namespace dpadapt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(FormatDoubleTest, ShortestRoundTrip) {
  EXPECT_EQ(FormatDouble(0.1), "0.1");
  EXPECT_EQ(FormatDouble(1.0), "1");
  EXPECT_EQ(FormatDouble(-2.5), "-2.5");
  EXPECT_EQ(FormatDouble(1.0 / 3.0), "0.3333333333333333");
  EXPECT_EQ(FormatDouble(kInf), "inf");
  EXPECT_EQ(FormatDouble(-kInf), "-inf");
  EXPECT_EQ(FormatDouble(std::nan("")), "nan");
  std::mt19937_64 gen(3);
  for (int i = 0; i < 10000; ++i) {
    const double v = std::ldexp(static_cast<double>(gen()) - 9.2e18,
                                static_cast<int>(gen() % 200) - 100);
    double back = 0.0;
    ASSERT_TRUE(ParseDouble(FormatDouble(v), &back));
    EXPECT_EQ(back, v);
  }
}

TEST(ParseDoubleTest, AcceptsNumbersAndInfinities) {
  double v = 0.0;
  EXPECT_TRUE(ParseDouble("1e-3", &v));
  EXPECT_EQ(v, 1e-3);
  EXPECT_TRUE(ParseDouble("+2", &v));
  EXPECT_EQ(v, 2.0);
  EXPECT_TRUE(ParseDouble(" -0.5 ", &v));
  EXPECT_EQ(v, -0.5);
  for (const char* s : {"inf", "INF", "Infinity", "+inf"}) {
    EXPECT_TRUE(ParseDouble(s, &v)) << s;
    EXPECT_EQ(v, kInf);
  }
  EXPECT_TRUE(ParseDouble("-inf", &v));
  EXPECT_EQ(v, -kInf);
}

TEST(ParseDoubleTest, RejectsGarbage) {
  double v = 0.0;
  for (const char* s : {"", " ", "1.0x", "abc", "1,2", "--1", "infinit", "0x"}) {
    EXPECT_FALSE(ParseDouble(s, &v)) << s;
  }
}

SampleTable Read(const std::string& text) {
  std::istringstream in(text);
  return ReadSampleCsv(in, "s.csv");
}

std::string ReadError(const std::string& text) {
  try {
    Read(text);
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return "";
}

TEST(SampleCsvTest, ReadsLabeledAndUnlabeled) {
  const SampleTable labeled = Read("x1,x2,y\n1,2,3\r\n\n-4,5e-1,6\n");
  ASSERT_TRUE(labeled.has_labels);
  ASSERT_EQ(labeled.points.size(), 2u);
  EXPECT_EQ(labeled.points.dim(), 2u);
  EXPECT_EQ(labeled.points.row(1)[0], -4.0);
  EXPECT_EQ(labeled.points.row(1)[1], 0.5);
  EXPECT_EQ(labeled.labels, (std::vector<double>{3.0, 6.0}));
  const SampleTable plain = Read("x1\n0.25\n");
  EXPECT_FALSE(plain.has_labels);
  EXPECT_EQ(plain.points.size(), 1u);
  EXPECT_TRUE(plain.labels.empty());
}

TEST(SampleCsvTest, ErrorsCarryLineNumbers) {
  EXPECT_EQ(ReadError(""), "s.csv:1: empty file, expected a header");
  EXPECT_EQ(ReadError("y\n1\n"), "s.csv:1: header has no feature columns");
  EXPECT_EQ(ReadError("x2\n1\n").rfind("s.csv:1:", 0), 0u);
  EXPECT_EQ(ReadError("x1,y\n1,2\n3\n"), "s.csv:3: expected 2 columns, found 1");
  EXPECT_EQ(ReadError("x1\n1\nfoo\n"), "s.csv:3: column 'x1': 'foo' is not a number");
  EXPECT_EQ(ReadError("x1\ninf\n"), "s.csv:2: column 'x1' is not finite");
  EXPECT_EQ(ReadError("x1\n\n"), "s.csv:2: no data rows");
}

TEST(SampleCsvTest, FileReaders) {
  const std::string dir = DPADAPT_TEST_DATA_DIR;
  const LabeledSample source = ReadLabeledCsvFile(dir + "/toy_source.csv");
  EXPECT_EQ(source.size(), 2u);
  const PointSet target = ReadUnlabeledCsvFile(dir + "/toy_target.csv");
  EXPECT_EQ(target.size(), 1u);
  EXPECT_THROW(ReadLabeledCsvFile(dir + "/toy_target.csv"), InvalidInput);
  EXPECT_THROW(ReadUnlabeledCsvFile(dir + "/toy_source.csv"), InvalidInput);
  EXPECT_THROW(ReadSampleCsvFile(dir + "/missing.csv"), InvalidInput);
}

}  // namespace
}  // namespace dpadapt
