// Copyright 2026 the pfbank authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pfbank/quant_coe.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace pfbank {
namespace {

TEST(Quantize, KnownCodes) {
  const FixedPointFormat q15 = q15_format();
  EXPECT_EQ(quantize_value(0.5, q15), 16384);
  EXPECT_EQ(quantize_value(1.0, q15), 32767);  // saturated
  EXPECT_EQ(quantize_value(-1.0, q15), -32768);
  EXPECT_EQ(quantize_value(-4.2, q15), -32768);  // saturated
  // -0.000015 * 32768 = -0.4915..., rounds toward zero magnitude
  EXPECT_EQ(quantize_value(-0.000015, q15), 0);
  // -0.00002 * 32768 = -0.655..., rounds half away from zero
  EXPECT_EQ(quantize_value(-0.00002, q15), -1);
}

TEST(Quantize, RejectsNonFinite) {
  EXPECT_THROW(quantize_value(std::numeric_limits<double>::quiet_NaN(),
                              q15_format()),
               std::domain_error);
  EXPECT_THROW(quantize({1.0, std::numeric_limits<double>::infinity()},
                        q15_format()),
               std::domain_error);
}

TEST(Quantize, RejectsBadFormat) {
  EXPECT_THROW(quantize({0.5}, {1, 0}), std::domain_error);
  EXPECT_THROW(quantize({0.5}, {33, 15}), std::domain_error);
  EXPECT_THROW(quantize({0.5}, {16, 16}), std::domain_error);
  EXPECT_THROW(quantize({0.5}, {16, -1}), std::domain_error);
}

TEST(Dequantize, KnownValues) {
  const FixedPointFormat q15 = q15_format();
  QuantizedFilter q{{16384, -32768, 0, 1}, q15, 0};
  const std::vector<double> values = dequantize(q);
  EXPECT_EQ(values[0], 0.5);
  EXPECT_EQ(values[1], -1.0);
  EXPECT_EQ(values[2], 0.0);
  EXPECT_EQ(values[3], std::ldexp(1.0, -15));
}

TEST(Quantize, CodesRoundTripExactly) {
  const FixedPointFormat q15 = q15_format();
  std::mt19937 rng(7);
  std::vector<int32_t> codes;
  for (int i = 0; i < 1000; ++i) {
    codes.push_back(static_cast<int32_t>(rng() % 65536) - 32768);
  }
  QuantizedFilter q{codes, q15, 0};
  const QuantizedFilter q2 = quantize(dequantize(q), q15);
  EXPECT_EQ(q2.codes, codes);
}

TEST(Quantize, ErrorBoundForInRangeValues) {
  const FixedPointFormat q15 = q15_format();
  const double half_step = std::ldexp(1.0, -16);
  const double max_rep = 32767.0 / 32768.0;
  std::mt19937 rng(11);
  for (int i = 0; i < 20000; ++i) {
    const double c = oracle::uniform_in(rng, -1.0, max_rep);
    const double back = dequantize_value(quantize_value(c, q15), q15);
    ASSERT_LE(std::abs(back - c), half_step) << c;
  }
}

TEST(Quantize, MonotoneNonDecreasing) {
  const FixedPointFormat q15 = q15_format();
  std::mt19937 rng(13);
  for (int i = 0; i < 5000; ++i) {
    double a = oracle::uniform_in(rng, -2.0, 2.0);
    double b = oracle::uniform_in(rng, -2.0, 2.0);
    if (a > b) std::swap(a, b);
    ASSERT_LE(quantize_value(a, q15), quantize_value(b, q15)) << a << " " << b;
  }
}

TEST(CoeWriter, ExactLayout) {
  const FixedPointFormat q15 = q15_format();
  QuantizedFilter q{{3, -1}, q15, 0};
  EXPECT_EQ(write_coe(q, 10), "radix=10;\ncoefdata=\n3,\n-1;");

  QuantizedFilter minus_one{{-1}, q15, 0};
  EXPECT_EQ(write_coe(minus_one, 16), "radix=16;\ncoefdata=\nffff;");

  QuantizedFilter min_code{{-32768}, q15, 0};
  EXPECT_EQ(write_coe(min_code, 2), "radix=2;\ncoefdata=\n1000000000000000;");
}

TEST(CoeWriter, RejectsBadInput) {
  const FixedPointFormat q15 = q15_format();
  QuantizedFilter q{{3}, q15, 0};
  EXPECT_THROW(write_coe(q, 8), std::domain_error);
  QuantizedFilter empty{{}, q15, 0};
  EXPECT_THROW(write_coe(empty, 10), std::domain_error);
  QuantizedFilter wide{{40000}, q15, 0};
  EXPECT_THROW(write_coe(wide, 10), std::domain_error);
}

TEST(CoeReader, MinimalDocuments) {
  const FixedPointFormat q15 = q15_format();
  const CoeDocument zero = read_coe("radix=10;\ncoefdata=\n0;", q15);
  EXPECT_EQ(zero.radix, 10);
  EXPECT_EQ(zero.codes, (std::vector<int32_t>{0}));

  const CoeDocument neg = read_coe("radix=16;\ncoefdata=\nffff;", q15);
  EXPECT_EQ(neg.codes, (std::vector<int32_t>{-1}));
}

TEST(CoeReader, TolerantOfCommentsCaseAndCrlf) {
  const FixedPointFormat q15 = q15_format();
  const std::string doc =
      "; produced by hand\r\n"
      "\r\n"
      "RADIX = 16;\r\n"
      "; three coefficients follow\r\n"
      "Coefdata= 7FFF, 8000,\r\n"
      "  00FF ;trailing text ignored\r\n";
  const CoeDocument parsed = read_coe(doc, q15);
  EXPECT_EQ(parsed.radix, 16);
  EXPECT_EQ(parsed.codes, (std::vector<int32_t>{32767, -32768, 255}));
}

TEST(CoeReader, RoundTripsAllRadices) {
  const FixedPointFormat q15 = q15_format();
  std::mt19937 rng(17);
  std::vector<int32_t> codes;
  for (int i = 0; i < 63; ++i) {
    codes.push_back(static_cast<int32_t>(rng() % 65536) - 32768);
  }
  QuantizedFilter q{codes, q15, 0};
  for (int radix : {2, 10, 16}) {
    const CoeDocument parsed = read_coe(write_coe(q, radix), q15);
    EXPECT_EQ(parsed.radix, radix);
    EXPECT_EQ(parsed.codes, codes) << "radix " << radix;
  }
}

TEST(CoeReader, RoundTripsNarrowFormats) {
  const FixedPointFormat q7{8, 7};
  std::mt19937 rng(19);
  std::vector<int32_t> codes;
  for (int i = 0; i < 31; ++i) {
    codes.push_back(static_cast<int32_t>(rng() % 256) - 128);
  }
  QuantizedFilter q{codes, q7, 0};
  for (int radix : {2, 10, 16}) {
    EXPECT_EQ(read_coe(write_coe(q, radix), q7).codes, codes);
  }
}

TEST(CoeReader, ParseErrorsCarryLineNumbers) {
  const FixedPointFormat q15 = q15_format();
  try {
    read_coe("coefdata=\n0;", q15);
    FAIL() << "expected parse_error";
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line(), 1);
  }
  try {
    read_coe("radix=16;\ncoefdata=\n12,\nxyz;", q15);
    FAIL() << "expected parse_error";
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line(), 4);
  }
  // token wider than the format
  EXPECT_THROW(read_coe("radix=16;\ncoefdata=\nfffff;", q15), parse_error);
  EXPECT_THROW(read_coe("radix=10;\ncoefdata=\n40000;", q15), parse_error);
  EXPECT_THROW(read_coe("radix=2;\ncoefdata=\n10000000000000000;", q15),
               parse_error);
  // missing terminator / missing data
  EXPECT_THROW(read_coe("radix=10;\ncoefdata=\n1,2", q15), parse_error);
  EXPECT_THROW(read_coe("radix=10;\n", q15), parse_error);
  EXPECT_THROW(read_coe("radix=7;\ncoefdata=\n0;", q15), parse_error);
  EXPECT_THROW(read_coe("", q15), parse_error);
}

TEST(OutputBitWidth, MacDatapathWidths) {
  EXPECT_EQ(output_bit_width(8, 16, 63), 30);
  EXPECT_EQ(output_bit_width(8, 16, 1), 24);
  EXPECT_EQ(output_bit_width(1, 1, 2), 3);
  EXPECT_EQ(output_bit_width(8, 16, 64), 30);
  EXPECT_EQ(output_bit_width(8, 16, 65), 31);
  EXPECT_THROW(output_bit_width(0, 16, 63), std::domain_error);
}

// Exhaustive check at tiny widths: a full convolution of 2-bit inputs with
// 2-bit codes over 3 taps never leaves the predicted accumulator range.
TEST(OutputBitWidth, ExhaustiveTinyWidthConvolution) {
  const int width = output_bit_width(2, 2, 3);
  const int64_t lo = -(int64_t{1} << (width - 1));
  const int64_t hi = (int64_t{1} << (width - 1)) - 1;
  for (int c0 = -2; c0 <= 1; ++c0) {
    for (int c1 = -2; c1 <= 1; ++c1) {
      for (int c2 = -2; c2 <= 1; ++c2) {
        for (int x0 = -2; x0 <= 1; ++x0) {
          for (int x1 = -2; x1 <= 1; ++x1) {
            for (int x2 = -2; x2 <= 1; ++x2) {
              const int64_t acc = int64_t{c0} * x0 + int64_t{c1} * x1 +
                                  int64_t{c2} * x2;
              ASSERT_GE(acc, lo);
              ASSERT_LE(acc, hi);
            }
          }
        }
      }
    }
  }
}

// Randomized probe at the full widths used by the datapath.
TEST(OutputBitWidth, RandomizedFullWidthConvolution) {
  const int width = output_bit_width(8, 16, 63);
  ASSERT_EQ(width, 30);
  const int64_t lo = -(int64_t{1} << (width - 1));
  const int64_t hi = (int64_t{1} << (width - 1)) - 1;
  std::mt19937 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    int64_t acc_min = 0, acc_max = 0;
    for (int t = 0; t < 63; ++t) {
      const int32_t code = static_cast<int32_t>(rng() % 65536) - 32768;
      const int64_t a = int64_t{code} * -128;
      const int64_t b = int64_t{code} * 127;
      acc_min += std::min(a, b);
      acc_max += std::max(a, b);
    }
    ASSERT_GE(acc_min, lo);
    ASSERT_LE(acc_max, hi);
  }
}

}  // namespace
}  // namespace pfbank
