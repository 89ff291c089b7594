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

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfbank/errors.hpp"
#include "pfbank/scales.hpp"

namespace pfbank {

inline constexpr int kBandsPerBank = 13;

enum class WindowKind { Bartlett, Hamming };

inline const char* window_name(WindowKind kind) {
  return kind == WindowKind::Bartlett ? "bartlett" : "hamming";
}

// One bandpass band. The nominal bandwidth is the published table value,
// stored verbatim; it is reported by the validator but never used in design.
struct BandSpec {
  double lower_hz = 0.0;
  double upper_hz = 0.0;
  double nominal_bandwidth_hz = 0.0;

  double computed_bandwidth_hz() const { return upper_hz - lower_hz; }
};

using BandList = std::array<BandSpec, kBandsPerBank>;

struct BankPreset {
  ScaleKind scale = ScaleKind::Mel;
  int variant = 1;  // 1..3
  WindowKind window = WindowKind::Bartlett;
  BandList bands;
};

namespace detail {

struct PresetRowKhz {
  int lower, upper, bandwidth;
};

// Built-in band tables, in kHz exactly as published. Mel banks pair with the
// Bartlett window, Bark banks with the Hamming window.
inline constexpr PresetRowKhz kMelTables[3][kBandsPerBank] = {
    {{50, 250, 200},
     {250, 450, 200},
     {450, 650, 200},
     {650, 850, 200},
     {850, 1062, 212},
     {1058, 1358, 300},
     {1350, 1750, 400},
     {1742, 2262, 520},
     {2256, 2956, 700},
     {2948, 3758, 810},
     {3750, 4700, 950},
     {4692, 5962, 1270},
     {5960, 7625, 1675}},
    {{150, 250, 100},
     {250, 350, 100},
     {350, 450, 100},
     {450, 550, 100},
     {550, 670, 120},
     {665, 825, 160},
     {820, 1060, 240},
     {1055, 1415, 360},
     {1410, 1910, 500},
     {1906, 2606, 700},
     {2600, 3550, 950},
     {3545, 3845, 1250},
     {3840, 5490, 1650}},
    {{10, 60, 50},
     {60, 110, 50},
     {110, 160, 50},
     {160, 210, 50},
     {210, 360, 150},
     {340, 690, 350},
     {670, 1320, 650},
     {1310, 2360, 1050},
     {2300, 3850, 1550},
     {3840, 5990, 2150},
     {5980, 6830, 2850},
     {6810, 7460, 3650},
     {7440, 11990, 4550}},
};

inline constexpr PresetRowKhz kBarkTables[3][kBandsPerBank] = {
    {{50, 200, 150},
     {200, 350, 150},
     {350, 500, 150},
     {500, 650, 150},
     {650, 900, 250},
     {900, 1300, 400},
     {1300, 1900, 600},
     {1900, 2750, 850},
     {2750, 3900, 1150},
     {3900, 5400, 1600},
     {5400, 7400, 2000},
     {7400, 9900, 2500},
     {9900, 12900, 3000}},
    {{150, 250, 100},
     {250, 350, 100},
     {350, 450, 100},
     {450, 550, 100},
     {550, 700, 150},
     {700, 900, 200},
     {900, 1200, 300},
     {1200, 1650, 450},
     {1650, 2300, 650},
     {2300, 3100, 800},
     {3100, 4200, 1100},
     {4200, 5650, 1450},
     {5650, 7500, 1850}},
    {{10, 60, 50},
     {60, 110, 50},
     {110, 160, 50},
     {160, 210, 50},
     {210, 360, 150},
     {360, 710, 350},
     {710, 1360, 650},
     {1360, 2410, 1050},
     {2410, 3960, 1550},
     {3960, 6110, 2150},
     {6110, 8960, 2850},
     {8960, 12610, 3650},
     {12610, 16010, 4000}},
};

// Shortest round-trip formatting, but plain digits for integral values
// (to_chars would otherwise prefer "2e+05" over "200000").
inline std::string format_number(double v) {
  char buf[64];
  if (v == std::floor(v) && std::abs(v) < 9.007199254740992e15) {
    auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof(buf), static_cast<int64_t>(v));
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
  }
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

}  // namespace detail

// Returns one of the six built-in presets with frequencies in Hz
// (exact kHz -> Hz conversion).
inline BankPreset load_preset(ScaleKind scale, int variant) {
  if (variant < 1 || variant > 3) {
    throw std::out_of_range("unknown preset variant " + std::to_string(variant) +
                            " (expected 1..3)");
  }
  const auto& table = scale == ScaleKind::Mel ? detail::kMelTables[variant - 1]
                                              : detail::kBarkTables[variant - 1];
  BankPreset preset;
  preset.scale = scale;
  preset.variant = variant;
  preset.window =
      scale == ScaleKind::Mel ? WindowKind::Bartlett : WindowKind::Hamming;
  for (int i = 0; i < kBandsPerBank; ++i) {
    preset.bands[i] = {table[i].lower * 1000.0, table[i].upper * 1000.0,
                       table[i].bandwidth * 1000.0};
  }
  return preset;
}

enum class FindingKind { BandwidthMismatch, Overlap, Gap };

// One internal inconsistency of a preset table. band_index is 1-based to match
// the published row numbers; Overlap/Gap findings refer to the pair
// (band_index, band_index + 1).
struct ValidationFinding {
  int band_index = 0;
  FindingKind kind = FindingKind::BandwidthMismatch;
  double amount_hz = 0.0;

  std::string describe() const {
    std::ostringstream os;
    switch (kind) {
      case FindingKind::BandwidthMismatch:
        os << "band " << band_index << ": computed bandwidth differs from the "
           << "nominal value by " << detail::format_number(amount_hz) << " Hz";
        break;
      case FindingKind::Overlap:
        os << "bands " << band_index << "-" << band_index + 1 << ": overlap of "
           << detail::format_number(amount_hz) << " Hz";
        break;
      case FindingKind::Gap:
        os << "bands " << band_index << "-" << band_index + 1 << ": gap of "
           << detail::format_number(amount_hz) << " Hz";
        break;
    }
    return os.str();
  }
};

// Report-only: flags rows whose stated bandwidth disagrees with
// upper - lower, and adjacent pairs that overlap or leave a gap.
// Several published rows are internally inconsistent; the findings surface
// this without guessing which column is the typo.
inline std::vector<ValidationFinding> validate_preset(const BankPreset& preset) {
  std::vector<ValidationFinding> findings;
  for (int i = 0; i < kBandsPerBank; ++i) {
    const BandSpec& band = preset.bands[i];
    const double diff =
        std::abs(band.computed_bandwidth_hz() - band.nominal_bandwidth_hz);
    if (diff > 0.0) {
      findings.push_back({i + 1, FindingKind::BandwidthMismatch, diff});
    }
    if (i + 1 < kBandsPerBank) {
      const double step = preset.bands[i + 1].lower_hz - band.upper_hz;
      if (step < 0.0) {
        findings.push_back({i + 1, FindingKind::Overlap, -step});
      } else if (step > 0.0) {
        findings.push_back({i + 1, FindingKind::Gap, step});
      }
    }
  }
  return findings;
}

// Triangular frequency-domain weights, one row per perceptual band, one
// column per non-negative FFT bin.
struct TriangularBank {
  ScaleKind scale = ScaleKind::Mel;
  double sample_rate_hz = 0.0;
  int fft_size = 0;
  std::vector<std::vector<double>> weights;

  int n_bands() const { return static_cast<int>(weights.size()); }
  int n_bins() const { return fft_size / 2 + 1; }
};

// n_edges points equally spaced on the perceptual scale between warp(f_min)
// and warp(f_max), unwarped back to Hz. Endpoints are pinned exactly.
inline std::vector<double> perceptual_edges_hz(ScaleKind scale, double f_min,
                                               double f_max, int n_edges) {
  if (!(f_min >= 0.0) || !(f_min < f_max) || !std::isfinite(f_max)) {
    throw std::domain_error("need 0 <= f_min < f_max");
  }
  if (n_edges < 2) throw std::domain_error("need at least two edge points");
  const double w_min = warp(scale, f_min);
  const double w_max = warp(scale, f_max);
  std::vector<double> edges(n_edges);
  edges.front() = f_min;
  edges.back() = f_max;
  for (int i = 1; i + 1 < n_edges; ++i) {
    const double w = w_min + (w_max - w_min) * i / (n_edges - 1);
    edges[i] = unwarp(scale, w);
  }
  return edges;
}

// floor(f / fs * fft_size + 0.5)
inline int snap_to_bin(double f_hz, double sample_rate_hz, int fft_size) {
  return static_cast<int>(
      std::floor(f_hz / sample_rate_hz * fft_size + 0.5));
}

// Triangular perceptual bank: n_bands + 2 scale-equispaced edges, snapped to
// FFT bins; band k rises linearly from edge k to a unit peak at edge k+1 and
// falls linearly to edge k+2, giving the 50%-overlap triangle layout.
inline TriangularBank triangular_bank(ScaleKind scale, double f_min,
                                      double f_max, int n_bands, int fft_size,
                                      double sample_rate_hz) {
  if (n_bands < 1) throw std::domain_error("need at least one band");
  if (fft_size < 2 * (n_bands + 1)) {
    throw std::domain_error("fft_size must be >= 2 * (n_bands + 1)");
  }
  if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
    throw std::domain_error("sample rate must be positive and finite");
  }
  if (f_max > sample_rate_hz / 2.0) {
    throw std::domain_error("f_max exceeds the Nyquist frequency");
  }

  const std::vector<double> edges_hz =
      perceptual_edges_hz(scale, f_min, f_max, n_bands + 2);
  std::vector<int> bins(edges_hz.size());
  for (size_t i = 0; i < edges_hz.size(); ++i) {
    bins[i] = snap_to_bin(edges_hz[i], sample_rate_hz, fft_size);
  }
  for (size_t i = 0; i + 1 < bins.size(); ++i) {
    if (bins[i] >= bins[i + 1]) {
      throw design_error("too few FFT bins to separate band edges " +
                         std::to_string(i) + " and " + std::to_string(i + 1));
    }
  }

  TriangularBank bank;
  bank.scale = scale;
  bank.sample_rate_hz = sample_rate_hz;
  bank.fft_size = fft_size;
  bank.weights.assign(n_bands, std::vector<double>(fft_size / 2 + 1, 0.0));
  for (int k = 0; k < n_bands; ++k) {
    const int lo = bins[k], mid = bins[k + 1], hi = bins[k + 2];
    for (int b = lo + 1; b <= mid; ++b) {
      bank.weights[k][b] = static_cast<double>(b - lo) / (mid - lo);
    }
    for (int b = mid + 1; b < hi; ++b) {
      bank.weights[k][b] = static_cast<double>(hi - b) / (hi - mid);
    }
  }
  return bank;
}

// --- band table documents ---------------------------------------------------
//
// Presets travel as a small CSV document, one record per band:
//   index,lower_hz,upper_hz,nominal_bw_hz

inline std::string export_bands(const BandList& bands) {
  std::string out = "index,lower_hz,upper_hz,nominal_bw_hz\n";
  for (int i = 0; i < kBandsPerBank; ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += detail::format_number(bands[i].lower_hz);
    out += ',';
    out += detail::format_number(bands[i].upper_hz);
    out += ',';
    out += detail::format_number(bands[i].nominal_bandwidth_hz);
    out += '\n';
  }
  return out;
}

namespace detail {

inline double parse_double_field(const std::string& field, int line_no) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw parse_error("invalid numeric field '" + field + "'", line_no);
  }
  return value;
}

}  // namespace detail

inline BandList import_bands(const std::string& document) {
  std::istringstream in(document);
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  BandList bands{};
  int next_index = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!header_seen) {
      if (line != "index,lower_hz,upper_hz,nominal_bw_hz") {
        throw parse_error("expected header 'index,lower_hz,upper_hz,nominal_bw_hz'",
                          line_no);
      }
      header_seen = true;
      continue;
    }
    if (next_index > kBandsPerBank) {
      throw parse_error("more than " + std::to_string(kBandsPerBank) +
                            " band records",
                        line_no);
    }
    std::array<std::string, 4> fields;
    size_t start = 0;
    for (int f = 0; f < 4; ++f) {
      const size_t comma = line.find(',', start);
      if (f < 3 && comma == std::string::npos) {
        throw parse_error("expected 4 comma-separated fields", line_no);
      }
      fields[f] = line.substr(start, comma == std::string::npos
                                         ? std::string::npos
                                         : comma - start);
      start = comma + 1;
    }
    const double index = detail::parse_double_field(fields[0], line_no);
    if (index != next_index) {
      throw parse_error("expected band index " + std::to_string(next_index),
                        line_no);
    }
    BandSpec band;
    band.lower_hz = detail::parse_double_field(fields[1], line_no);
    band.upper_hz = detail::parse_double_field(fields[2], line_no);
    band.nominal_bandwidth_hz = detail::parse_double_field(fields[3], line_no);
    if (!(band.lower_hz < band.upper_hz)) {
      throw parse_error("band lower cutoff must be below upper cutoff", line_no);
    }
    if (next_index > 1 && !(band.lower_hz > bands[next_index - 2].lower_hz)) {
      throw parse_error("band lower cutoffs must be strictly increasing", line_no);
    }
    bands[next_index - 1] = band;
    ++next_index;
  }
  if (!header_seen) throw parse_error("missing header line", line_no);
  if (next_index <= kBandsPerBank) {
    throw parse_error("expected " + std::to_string(kBandsPerBank) +
                          " band records, got " + std::to_string(next_index - 1),
                      line_no);
  }
  return bands;
}

}  // namespace pfbank
