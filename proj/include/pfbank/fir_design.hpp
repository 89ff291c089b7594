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
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfbank/bank_layout.hpp"
#include "pfbank/errors.hpp"

namespace pfbank {

// Linear-phase bandpass FIR filter designed by the windowed-sinc method.
// Odd tap count (Type I); coefficients are bit-exactly symmetric because both
// the prototype and the window are computed on one half and mirrored.
struct FirFilter {
  std::vector<double> coefficients;
  double sample_rate_hz = 0.0;
  BandSpec band;
  WindowKind window = WindowKind::Bartlett;

  int n_taps() const { return static_cast<int>(coefficients.size()); }
};

namespace detail {

inline void require_odd_taps(int n_taps) {
  if (n_taps < 3 || n_taps % 2 == 0) {
    throw std::domain_error("tap count must be odd and >= 3, got " +
                            std::to_string(n_taps));
  }
}

}  // namespace detail

// Bartlett: w[n] = 1 - |n - M| / M.  Hamming: w[n] = 0.54 - 0.46 cos(2 pi n / (N-1)).
// Both symmetric with a unit peak at the center tap M = (N-1)/2.
inline std::vector<double> window_weights(WindowKind kind, int n_taps) {
  detail::require_odd_taps(n_taps);
  const int mid = (n_taps - 1) / 2;
  std::vector<double> w(n_taps);
  for (int n = 0; n <= mid; ++n) {
    double value;
    if (kind == WindowKind::Bartlett) {
      value = 1.0 - static_cast<double>(mid - n) / mid;
    } else {
      value = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (n_taps - 1));
    }
    w[n] = value;
    w[n_taps - 1 - n] = value;
  }
  return w;
}

// Ideal (rectangular-windowed) bandpass prototype:
//   h[n] = (sin(w_h (n-M)) - sin(w_l (n-M))) / (pi (n-M)),  h[M] = (w_h - w_l) / pi
inline std::vector<double> ideal_bandpass(double lower_hz, double upper_hz,
                                          double sample_rate_hz, int n_taps) {
  detail::require_odd_taps(n_taps);
  if (!(lower_hz > 0.0) || !(lower_hz < upper_hz) ||
      !(upper_hz < sample_rate_hz / 2.0)) {
    throw design_error("band edges must satisfy 0 < lower < upper < Nyquist");
  }
  const int mid = (n_taps - 1) / 2;
  const double w_l = 2.0 * std::numbers::pi * lower_hz / sample_rate_hz;
  const double w_h = 2.0 * std::numbers::pi * upper_hz / sample_rate_hz;
  std::vector<double> h(n_taps);
  h[mid] = (w_h - w_l) / std::numbers::pi;
  for (int n = 0; n < mid; ++n) {
    const int k = mid - n;  // distance from center, > 0
    const double value =
        (std::sin(w_h * k) - std::sin(w_l * k)) / (std::numbers::pi * k);
    h[n] = value;
    h[n_taps - 1 - n] = value;
  }
  return h;
}

// Approximate main-lobe transition width of the windowed design, in Hz.
// 3.3 / N (Hamming) and 6.1 / N (Bartlett) as fractions of the sample rate.
inline double transition_width_hz(WindowKind kind, int n_taps,
                                  double sample_rate_hz) {
  const double factor = kind == WindowKind::Hamming ? 3.3 : 6.1;
  return factor * sample_rate_hz / n_taps;
}

// A band narrower than the window's transition width never develops a real
// passband at this tap count; such designs get a warning, not an error.
struct FeasibilityWarning {
  int band_index = 0;  // 1-based when produced for a bank, 0 for single bands
  double bandwidth_hz = 0.0;
  double transition_width_hz = 0.0;

  std::string describe() const {
    std::string msg = band_index > 0
                          ? "band " + std::to_string(band_index) + ": "
                          : std::string();
    msg += "bandwidth " + detail::format_number(bandwidth_hz) +
           " Hz is below the window transition width " +
           detail::format_number(transition_width_hz) + " Hz";
    return msg;
  }
};

inline bool band_is_narrow(const BandSpec& band, WindowKind kind, int n_taps,
                           double sample_rate_hz) {
  return band.computed_bandwidth_hz() <
         transition_width_hz(kind, n_taps, sample_rate_hz);
}

// Windowed-sinc bandpass design: elementwise product of the ideal prototype
// with the window. Narrow-band feasibility is reported through `warning`
// when a sink is supplied.
inline FirFilter design_bandpass(const BandSpec& band, WindowKind window,
                                 int n_taps, double sample_rate_hz,
                                 std::vector<FeasibilityWarning>* warnings = nullptr) {
  std::vector<double> h =
      ideal_bandpass(band.lower_hz, band.upper_hz, sample_rate_hz, n_taps);
  const std::vector<double> w = window_weights(window, n_taps);
  for (int n = 0; n < n_taps; ++n) h[n] *= w[n];
  if (warnings != nullptr && band_is_narrow(band, window, n_taps, sample_rate_hz)) {
    warnings->push_back({0, band.computed_bandwidth_hz(),
                         transition_width_hz(window, n_taps, sample_rate_hz)});
  }
  return {std::move(h), sample_rate_hz, band, window};
}

// One filter per preset band, preset window, order preserved.
inline std::vector<FirFilter> design_bank(const BandList& bands, WindowKind window,
                                          int n_taps, double sample_rate_hz,
                                          std::vector<FeasibilityWarning>* warnings = nullptr) {
  int worst = -1;
  for (int i = 0; i < kBandsPerBank; ++i) {
    if (!(bands[i].upper_hz < sample_rate_hz / 2.0) &&
        (worst < 0 || bands[i].upper_hz > bands[worst].upper_hz)) {
      worst = i;
    }
  }
  if (worst >= 0) {
    throw design_error(
        "band " + std::to_string(worst + 1) + " upper cutoff " +
        detail::format_number(bands[worst].upper_hz) + " Hz exceeds Nyquist " +
        detail::format_number(sample_rate_hz / 2.0) + " Hz");
  }
  std::vector<FirFilter> filters;
  filters.reserve(kBandsPerBank);
  for (int i = 0; i < kBandsPerBank; ++i) {
    std::vector<FeasibilityWarning> local;
    filters.push_back(
        design_bandpass(bands[i], window, n_taps, sample_rate_hz,
                        warnings != nullptr ? &local : nullptr));
    if (warnings != nullptr && !local.empty()) {
      local.front().band_index = i + 1;
      warnings->push_back(local.front());
    }
  }
  return filters;
}

inline std::vector<FirFilter> design_bank(const BankPreset& preset, int n_taps,
                                          double sample_rate_hz,
                                          std::vector<FeasibilityWarning>* warnings = nullptr) {
  return design_bank(preset.bands, preset.window, n_taps, sample_rate_hz,
                     warnings);
}

// Magnitude (dB) and phase (radians) of H(w) = sum_n h[n] e^(-i w n) at
// n_points equally spaced w in [0, pi].
struct FrequencyResponse {
  std::vector<double> frequency_hz;
  std::vector<double> magnitude_db;
  std::vector<double> phase_rad;
};

inline FrequencyResponse frequency_response(const FirFilter& filter,
                                            int n_points,
                                            double floor_db = -300.0) {
  if (n_points < 2) throw std::domain_error("need at least two response points");
  FrequencyResponse resp;
  resp.frequency_hz.resize(n_points);
  resp.magnitude_db.resize(n_points);
  resp.phase_rad.resize(n_points);
  const int n_taps = filter.n_taps();
  for (int k = 0; k < n_points; ++k) {
    const double w = std::numbers::pi * k / (n_points - 1);
    double re = 0.0, im = 0.0;
    for (int n = 0; n < n_taps; ++n) {
      re += filter.coefficients[n] * std::cos(w * n);
      im -= filter.coefficients[n] * std::sin(w * n);
    }
    const double mag = std::hypot(re, im);
    resp.frequency_hz[k] = w / (2.0 * std::numbers::pi) * filter.sample_rate_hz;
    resp.magnitude_db[k] =
        mag > 0.0 ? std::max(20.0 * std::log10(mag), floor_db) : floor_db;
    resp.phase_rad[k] = std::atan2(im, re);
  }
  return resp;
}

// Optional post-step: scale coefficients so the peak magnitude response is 1.
inline FirFilter peak_normalize(const FirFilter& filter,
                                int n_probe_points = 4096) {
  const FrequencyResponse resp = frequency_response(filter, n_probe_points);
  double peak_db = resp.magnitude_db[0];
  for (double m : resp.magnitude_db) peak_db = std::max(peak_db, m);
  const double peak = std::pow(10.0, peak_db / 20.0);
  FirFilter out = filter;
  if (peak > 0.0) {
    for (double& c : out.coefficients) c /= peak;
  }
  return out;
}

}  // namespace pfbank
