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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfbank/fir_design.hpp"
#include "pfbank/quant_coe.hpp"

namespace pfbank {

// Direct digital synthesizer configuration. The tuning word is the integer
// phase increment per clock; the realized frequency is
// tuning_word / 2^accumulator_bits * clock_hz.
struct DdsConfig {
  double clock_hz = 50.0e6;
  double target_hz = 1.0e6;
  int accumulator_bits = 32;
  double amplitude = 1.0;
};

inline void validate(const DdsConfig& config) {
  if (!(config.clock_hz > 0.0) || !std::isfinite(config.clock_hz)) {
    throw std::domain_error("DDS clock must be positive and finite");
  }
  if (!(config.target_hz > 0.0) || !(config.target_hz < config.clock_hz / 2.0)) {
    throw std::domain_error("DDS target must lie in (0, clock/2)");
  }
  if (config.accumulator_bits < 2 || config.accumulator_bits > 62) {
    throw std::domain_error("accumulator bits must be in [2, 62]");
  }
  if (!(config.amplitude > 0.0) || !(config.amplitude <= 1.0)) {
    throw std::domain_error("DDS amplitude must lie in (0, 1]");
  }
}

inline uint64_t dds_tuning_word(const DdsConfig& config) {
  validate(config);
  const uint64_t word = static_cast<uint64_t>(std::llround(
      config.target_hz / config.clock_hz *
      std::ldexp(1.0, config.accumulator_bits)));
  if (word == 0) {
    throw std::domain_error("DDS target below the accumulator resolution");
  }
  return word;
}

inline double dds_actual_hz(const DdsConfig& config) {
  return static_cast<double>(dds_tuning_word(config)) *
         std::ldexp(config.clock_hz, -config.accumulator_bits);
}

struct Signal {
  std::vector<double> samples;
  double sample_rate_hz = 0.0;
};

// sample[n] = amplitude * sin(2 pi acc_n / 2^bits), acc wrapping mod 2^bits
// with acc_0 = 0.
inline Signal dds_sine(const DdsConfig& config, size_t n_samples) {
  const uint64_t word = dds_tuning_word(config);
  const uint64_t mask = (uint64_t{1} << config.accumulator_bits) - 1;
  const double phase_scale =
      2.0 * std::numbers::pi * std::ldexp(1.0, -config.accumulator_bits);
  Signal signal;
  signal.sample_rate_hz = config.clock_hz;
  signal.samples.resize(n_samples);
  uint64_t acc = 0;
  for (size_t n = 0; n < n_samples; ++n) {
    signal.samples[n] = config.amplitude * std::sin(acc * phase_scale);
    acc = (acc + word) & mask;
  }
  return signal;
}

// Quantized-output mode for the fixed-point path: full scale maps to
// +/-(2^(input_bits-1) - 1).
inline std::vector<int32_t> dds_sine_codes(const DdsConfig& config,
                                           size_t n_samples, int input_bits) {
  if (input_bits < 2 || input_bits > 31) {
    throw std::domain_error("input bits must be in [2, 31]");
  }
  const Signal signal = dds_sine(config, n_samples);
  const double scale = static_cast<double>((int64_t{1} << (input_bits - 1)) - 1);
  std::vector<int32_t> codes(n_samples);
  for (size_t n = 0; n < n_samples; ++n) {
    codes[n] = static_cast<int32_t>(std::llround(signal.samples[n] * scale));
  }
  return codes;
}

struct BankRunResult {
  std::vector<Signal> per_filter_outputs;
  Signal summed_output;
  std::vector<double> band_energies;

  int argmax_band() const {
    int best = 0;
    for (size_t k = 1; k < band_energies.size(); ++k) {
      if (band_energies[k] > band_energies[best]) best = static_cast<int>(k);
    }
    return best;
  }
};

namespace detail {

// Full linear convolution truncated to the input length, zero initial state.
inline std::vector<double> convolve_truncated(const std::vector<double>& taps,
                                              const std::vector<double>& input) {
  std::vector<double> out(input.size(), 0.0);
  for (size_t n = 0; n < input.size(); ++n) {
    const size_t t_max = std::min(taps.size() - 1, n);
    double acc = 0.0;
    for (size_t t = 0; t <= t_max; ++t) {
      acc += taps[t] * input[n - t];
    }
    out[n] = acc;
  }
  return out;
}

}  // namespace detail

// Runs the input through every filter and sums the outputs elementwise, the
// summing-bank datapath. Band energy is the plain sum of squared output
// samples.
inline BankRunResult run_bank(const std::vector<FirFilter>& filters,
                              const Signal& input) {
  if (filters.empty()) throw std::domain_error("bank has no filters");
  if (input.samples.empty()) throw std::domain_error("input signal is empty");
  for (size_t k = 0; k < filters.size(); ++k) {
    if (filters[k].sample_rate_hz != input.sample_rate_hz) {
      throw std::domain_error("filter " + std::to_string(k) +
                              " sample rate differs from the input");
    }
  }
  BankRunResult result;
  result.per_filter_outputs.reserve(filters.size());
  result.band_energies.reserve(filters.size());
  result.summed_output.sample_rate_hz = input.sample_rate_hz;
  result.summed_output.samples.assign(input.samples.size(), 0.0);
  for (const FirFilter& filter : filters) {
    Signal out;
    out.sample_rate_hz = input.sample_rate_hz;
    out.samples = detail::convolve_truncated(filter.coefficients, input.samples);
    double energy = 0.0;
    for (size_t n = 0; n < out.samples.size(); ++n) {
      energy += out.samples[n] * out.samples[n];
      result.summed_output.samples[n] += out.samples[n];
    }
    result.band_energies.push_back(energy);
    result.per_filter_outputs.push_back(std::move(out));
  }
  return result;
}

// Integer mirror of run_bank: exact MACs in 64-bit accumulators, plus the
// observed accumulator extrema so callers can confirm the datapath width.
struct FixedBankRunResult {
  std::vector<std::vector<int64_t>> per_filter_outputs;
  std::vector<int64_t> summed_output;
  std::vector<double> band_energies;
  int64_t min_accumulator = 0;
  int64_t max_accumulator = 0;

  int argmax_band() const {
    int best = 0;
    for (size_t k = 1; k < band_energies.size(); ++k) {
      if (band_energies[k] > band_energies[best]) best = static_cast<int>(k);
    }
    return best;
  }
};

inline FixedBankRunResult run_bank_fixed_point(
    const std::vector<QuantizedFilter>& filters,
    const std::vector<int32_t>& input_codes, int input_bits) {
  if (filters.empty()) throw std::domain_error("bank has no filters");
  if (input_codes.empty()) throw std::domain_error("input is empty");
  if (input_bits < 2 || input_bits > 32) {
    throw std::domain_error("input bits must be in [2, 32]");
  }
  const int64_t in_min = -(int64_t{1} << (input_bits - 1));
  const int64_t in_max = (int64_t{1} << (input_bits - 1)) - 1;
  for (int32_t code : input_codes) {
    if (code < in_min || code > in_max) {
      throw std::domain_error("input code " + std::to_string(code) +
                              " outside the " + std::to_string(input_bits) +
                              "-bit range");
    }
  }
  for (size_t k = 1; k < filters.size(); ++k) {
    if (filters[k].format.total_bits != filters[0].format.total_bits ||
        filters[k].format.fraction_bits != filters[0].format.fraction_bits) {
      throw std::domain_error("filters must share one fixed-point format");
    }
  }

  FixedBankRunResult result;
  result.summed_output.assign(input_codes.size(), 0);
  for (const QuantizedFilter& filter : filters) {
    std::vector<int64_t> out(input_codes.size(), 0);
    double energy = 0.0;
    for (size_t n = 0; n < input_codes.size(); ++n) {
      const size_t t_max = std::min(filter.codes.size() - 1, n);
      int64_t acc = 0;
      for (size_t t = 0; t <= t_max; ++t) {
        acc += static_cast<int64_t>(filter.codes[t]) * input_codes[n - t];
      }
      out[n] = acc;
      result.min_accumulator = std::min(result.min_accumulator, acc);
      result.max_accumulator = std::max(result.max_accumulator, acc);
      result.summed_output[n] += acc;
      energy += static_cast<double>(acc) * static_cast<double>(acc);
    }
    result.band_energies.push_back(energy);
    result.per_filter_outputs.push_back(std::move(out));
  }
  return result;
}

// Exact worst-case accumulator magnitudes for input_bits-wide samples against
// this code set: the most negative and most positive sums reachable.
struct AccumulatorBound {
  int64_t most_negative = 0;
  int64_t most_positive = 0;
};

inline AccumulatorBound worst_case_accumulator(const std::vector<int32_t>& codes,
                                               int input_bits) {
  const int64_t in_min = -(int64_t{1} << (input_bits - 1));
  const int64_t in_max = (int64_t{1} << (input_bits - 1)) - 1;
  AccumulatorBound bound;
  for (int32_t code : codes) {
    const int64_t lo = std::min({code * in_min, code * in_max});
    const int64_t hi = std::max({code * in_min, code * in_max});
    bound.most_negative += lo;
    bound.most_positive += hi;
  }
  return bound;
}

// Coefficient- and response-level comparison between two banks of equal
// geometry: per-band cosine similarity, RMS coefficient difference, and RMS
// difference of the magnitude responses in dB.
struct BankComparison {
  std::vector<double> per_band_cosine;
  std::vector<double> per_band_rms_diff;
  std::vector<double> response_rms_diff_db;
};

inline BankComparison compare_banks(const std::vector<FirFilter>& bank_a,
                                    const std::vector<FirFilter>& bank_b,
                                    int n_response_points) {
  if (bank_a.size() != bank_b.size()) {
    throw std::domain_error("banks have different band counts");
  }
  if (n_response_points < 2) {
    throw std::domain_error("need at least two response points");
  }
  BankComparison cmp;
  for (size_t k = 0; k < bank_a.size(); ++k) {
    const FirFilter& a = bank_a[k];
    const FirFilter& b = bank_b[k];
    if (a.n_taps() != b.n_taps()) {
      throw std::domain_error("band " + std::to_string(k) +
                              ": tap counts differ");
    }
    if (a.sample_rate_hz != b.sample_rate_hz) {
      throw std::domain_error("band " + std::to_string(k) +
                              ": sample rates differ");
    }
    double dot = 0.0, norm_a = 0.0, norm_b = 0.0, sq_diff = 0.0;
    for (int n = 0; n < a.n_taps(); ++n) {
      const double ca = a.coefficients[n], cb = b.coefficients[n];
      dot += ca * cb;
      norm_a += ca * ca;
      norm_b += cb * cb;
      sq_diff += (ca - cb) * (ca - cb);
    }
    double cosine;
    if (norm_a == 0.0 && norm_b == 0.0) {
      cosine = 1.0;  // identical zero vectors
    } else if (norm_a == 0.0 || norm_b == 0.0) {
      cosine = 0.0;
    } else {
      cosine = dot / std::sqrt(norm_a * norm_b);
      cosine = std::min(1.0, std::max(-1.0, cosine));
    }
    cmp.per_band_cosine.push_back(cosine);
    cmp.per_band_rms_diff.push_back(std::sqrt(sq_diff / a.n_taps()));

    const FrequencyResponse ra = frequency_response(a, n_response_points);
    const FrequencyResponse rb = frequency_response(b, n_response_points);
    double sq_db = 0.0;
    for (int p = 0; p < n_response_points; ++p) {
      const double d = ra.magnitude_db[p] - rb.magnitude_db[p];
      sq_db += d * d;
    }
    cmp.response_rms_diff_db.push_back(std::sqrt(sq_db / n_response_points));
  }
  return cmp;
}

}  // namespace pfbank
