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

#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfbank/errors.hpp"

namespace pfbank {

// Signed two's-complement fixed-point format.
struct FixedPointFormat {
  int total_bits = 16;
  int fraction_bits = 15;

  int64_t min_code() const { return -(int64_t{1} << (total_bits - 1)); }
  int64_t max_code() const { return (int64_t{1} << (total_bits - 1)) - 1; }
  double step() const { return std::ldexp(1.0, -fraction_bits); }
};

inline void validate_format(const FixedPointFormat& format) {
  if (format.total_bits < 2 || format.total_bits > 32) {
    throw std::domain_error("total_bits must be in [2, 32]");
  }
  if (format.fraction_bits < 0 || format.fraction_bits >= format.total_bits) {
    throw std::domain_error("fraction_bits must be in [0, total_bits - 1]");
  }
}

// Q1.15, the usual coefficient width for FIR generator tooling.
inline FixedPointFormat q15_format() { return {16, 15}; }

struct QuantizedFilter {
  std::vector<int32_t> codes;
  FixedPointFormat format;
  uint64_t source_hash = 0;  // FNV-1a over the real coefficient bits
};

namespace detail {

inline uint64_t fnv1a64(const std::vector<double>& values) {
  uint64_t hash = 1469598103934665603ull;
  for (double v : values) {
    uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    for (int i = 0; i < 8; ++i) {
      hash ^= (bits >> (8 * i)) & 0xFF;
      hash *= 1099511628211ull;
    }
  }
  return hash;
}

}  // namespace detail

// Round half away from zero, then saturate at the format limits.
inline int32_t quantize_value(double coefficient, const FixedPointFormat& format) {
  if (!std::isfinite(coefficient)) {
    throw std::domain_error("cannot quantize a non-finite coefficient");
  }
  const double scaled = std::ldexp(coefficient, format.fraction_bits);
  // Saturate before rounding so huge values cannot overflow the integer cast.
  if (scaled >= static_cast<double>(format.max_code())) {
    return static_cast<int32_t>(format.max_code());
  }
  if (scaled <= static_cast<double>(format.min_code())) {
    return static_cast<int32_t>(format.min_code());
  }
  return static_cast<int32_t>(std::llround(scaled));
}

inline QuantizedFilter quantize(const std::vector<double>& coefficients,
                                const FixedPointFormat& format) {
  validate_format(format);
  QuantizedFilter q;
  q.format = format;
  q.source_hash = detail::fnv1a64(coefficients);
  q.codes.reserve(coefficients.size());
  for (double c : coefficients) q.codes.push_back(quantize_value(c, format));
  return q;
}

inline double dequantize_value(int32_t code, const FixedPointFormat& format) {
  return std::ldexp(static_cast<double>(code), -format.fraction_bits);
}

inline std::vector<double> dequantize(const QuantizedFilter& q) {
  std::vector<double> values;
  values.reserve(q.codes.size());
  for (int32_t code : q.codes) values.push_back(dequantize_value(code, q.format));
  return values;
}

struct CoeDocument {
  int radix = 16;
  std::vector<int32_t> codes;
};

namespace detail {

inline uint32_t code_bits(int32_t code, int total_bits) {
  const uint32_t mask =
      total_bits == 32 ? 0xFFFFFFFFu : ((uint32_t{1} << total_bits) - 1);
  return static_cast<uint32_t>(code) & mask;
}

inline std::string code_to_radix(int32_t code, int radix, int total_bits) {
  if (radix == 10) return std::to_string(code);
  const uint32_t bits = code_bits(code, total_bits);
  if (radix == 16) {
    const int digits = (total_bits + 3) / 4;
    std::string out(digits, '0');
    for (int i = 0; i < digits; ++i) {
      out[digits - 1 - i] = "0123456789abcdef"[(bits >> (4 * i)) & 0xF];
    }
    return out;
  }
  std::string out(total_bits, '0');
  for (int i = 0; i < total_bits; ++i) {
    out[total_bits - 1 - i] = (bits >> i) & 1 ? '1' : '0';
  }
  return out;
}

}  // namespace detail

// Coefficient file layout:
//   radix=<R>;
//   coefdata=
//   <code>,
//   ...
//   <code>;
// Radix 10 codes are signed decimal; radix 2/16 codes are two's complement at
// the format width, zero padded, hex in lowercase. LF newlines throughout.
inline std::string write_coe(const QuantizedFilter& q, int radix) {
  if (radix != 2 && radix != 10 && radix != 16) {
    throw std::domain_error("radix must be 2, 10 or 16");
  }
  if (q.codes.empty()) {
    throw std::domain_error("cannot write an empty coefficient list");
  }
  validate_format(q.format);
  for (int32_t code : q.codes) {
    if (code < q.format.min_code() || code > q.format.max_code()) {
      throw std::domain_error("code outside the fixed-point format range");
    }
  }
  std::string out = "radix=" + std::to_string(radix) + ";\ncoefdata=\n";
  for (size_t i = 0; i < q.codes.size(); ++i) {
    out += detail::code_to_radix(q.codes[i], radix, q.format.total_bits);
    out += i + 1 < q.codes.size() ? ",\n" : ";";
  }
  return out;
}

namespace detail {

inline int digit_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

inline int32_t parse_coe_token(const std::string& token, int radix,
                               const FixedPointFormat& format, int line_no) {
  if (token.empty()) throw parse_error("empty coefficient token", line_no);
  if (radix == 10) {
    size_t pos = 0;
    bool negative = false;
    if (token[0] == '-' || token[0] == '+') {
      negative = token[0] == '-';
      pos = 1;
      if (token.size() == 1) {
        throw parse_error("invalid decimal token '" + token + "'", line_no);
      }
    }
    int64_t value = 0;
    for (; pos < token.size(); ++pos) {
      const int d = digit_value(token[pos]);
      if (d < 0 || d > 9) {
        throw parse_error("invalid digit in decimal token '" + token + "'",
                          line_no);
      }
      value = value * 10 + d;
      if (value > (int64_t{1} << 32)) {
        throw parse_error("code '" + token + "' exceeds the format width",
                          line_no);
      }
    }
    if (negative) value = -value;
    if (value < format.min_code() || value > format.max_code()) {
      throw parse_error("code '" + token + "' exceeds the format width",
                        line_no);
    }
    return static_cast<int32_t>(value);
  }
  // Radix 2 / 16: unsigned digits, two's complement at the format width.
  uint64_t value = 0;
  for (char c : token) {
    const int d = digit_value(c);
    if (d < 0 || d >= radix) {
      throw parse_error("invalid digit in radix-" + std::to_string(radix) +
                            " token '" + token + "'",
                        line_no);
    }
    value = value * radix + d;
    if (value >> format.total_bits != 0) {
      throw parse_error("code '" + token + "' exceeds the format width",
                        line_no);
    }
  }
  if (format.total_bits < 64 && (value >> (format.total_bits - 1)) != 0) {
    return static_cast<int32_t>(
        static_cast<int64_t>(value) - (int64_t{1} << format.total_bits));
  }
  return static_cast<int32_t>(value);
}

}  // namespace detail

// Tolerant reader for the format written above. Blank lines and ';' comment
// lines outside the two directives are ignored; hex case and CRLF endings are
// accepted. The code list ends at the first ';' inside the data section.
inline CoeDocument read_coe(const std::string& document,
                            const FixedPointFormat& format) {
  validate_format(format);
  std::istringstream in(document);
  std::string line;
  int line_no = 0;
  int radix = 0;
  bool in_data = false;
  bool terminated = false;
  CoeDocument doc;

  auto lower_nospace = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
    }
    return out;
  };

  std::string pending;  // token text accumulated inside the data section
  int pending_line = 0;
  auto flush_pending = [&]() {
    if (pending.empty()) {
      throw parse_error("missing coefficient before separator", line_no);
    }
    doc.codes.push_back(
        detail::parse_coe_token(pending, radix, format, pending_line));
    pending.clear();
  };

  while (std::getline(in, line) && !terminated) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!in_data) {
      const std::string flat = lower_nospace(line);
      if (flat.empty() || flat[0] == ';') continue;
      if (radix == 0) {
        if (flat.rfind("radix=", 0) != 0 || flat.back() != ';') {
          throw parse_error("expected 'radix=<R>;' directive", line_no);
        }
        const std::string digits = flat.substr(6, flat.size() - 7);
        if (digits == "2") radix = 2;
        else if (digits == "10") radix = 10;
        else if (digits == "16") radix = 16;
        else throw parse_error("radix must be 2, 10 or 16", line_no);
        continue;
      }
      if (flat.rfind("coefdata=", 0) != 0) {
        throw parse_error("expected 'coefdata=' directive", line_no);
      }
      in_data = true;
      line = line.substr(line.find('=') + 1);  // data may follow on this line
    }
    for (char c : line) {
      if (std::isspace(static_cast<unsigned char>(c))) continue;
      if (c == ',') {
        flush_pending();
      } else if (c == ';') {
        flush_pending();
        terminated = true;
        break;
      } else {
        if (pending.empty()) pending_line = line_no;
        pending += c;
      }
    }
  }
  if (radix == 0) throw parse_error("missing 'radix=' directive", line_no);
  if (!in_data) throw parse_error("missing 'coefdata=' directive", line_no);
  if (!terminated) throw parse_error("coefficient data not terminated by ';'", line_no);
  doc.radix = radix;
  return doc;
}

// Full-precision accumulator width for an n_taps MAC:
// input width + coefficient width + ceil(log2(taps)).
inline int output_bit_width(int input_bits, int coeff_bits, int n_taps) {
  if (input_bits < 1 || coeff_bits < 1 || n_taps < 1) {
    throw std::domain_error("bit widths and tap count must be >= 1");
  }
  int growth = 0;
  while ((1 << growth) < n_taps) ++growth;
  return input_bits + coeff_bits + growth;
}

}  // namespace pfbank
