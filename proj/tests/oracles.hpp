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
//
// Test-only reference implementations, kept independent of the library code
// they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

// Direct DFT magnitude of a real tap vector at one frequency.
inline double dft_magnitude(const std::vector<double>& taps, double freq_hz,
                            double sample_rate_hz) {
  double re = 0.0, im = 0.0;
  for (size_t n = 0; n < taps.size(); ++n) {
    const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz * n;
    re += taps[n] * std::cos(w);
    im -= taps[n] * std::sin(w);
  }
  return std::hypot(re, im);
}

inline double dft_magnitude_db(const std::vector<double>& taps, double freq_hz,
                               double sample_rate_hz) {
  const double mag = dft_magnitude(taps, freq_hz, sample_rate_hz);
  return mag > 0.0 ? 20.0 * std::log10(mag) : -300.0;
}

// Peak magnitude (dB) over a uniform frequency grid up to Nyquist.
inline double peak_magnitude_db(const std::vector<double>& taps,
                                double sample_rate_hz, int n_grid = 4096) {
  double peak = -1.0e300;
  for (int k = 0; k < n_grid; ++k) {
    const double f = sample_rate_hz / 2.0 * k / (n_grid - 1);
    peak = std::max(peak, dft_magnitude_db(taps, f, sample_rate_hz));
  }
  return peak;
}

// Iterative radix-2 FFT; size must be a power of two.
inline void fft_inplace(std::vector<std::complex<double>>& a) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// Index of the strongest non-negative-frequency FFT bin of a real signal.
inline int fft_peak_bin(const std::vector<double>& samples) {
  std::vector<std::complex<double>> a(samples.begin(), samples.end());
  fft_inplace(a);
  int best = 0;
  double best_mag = -1.0;
  for (size_t k = 0; k <= a.size() / 2; ++k) {
    const double mag = std::abs(a[k]);
    if (mag > best_mag) {
      best_mag = mag;
      best = static_cast<int>(k);
    }
  }
  return best;
}

// Classic phase unwrap: removes 2 pi jumps between consecutive samples.
inline std::vector<double> unwrap_phase(const std::vector<double>& phase) {
  std::vector<double> out(phase.size());
  if (phase.empty()) return out;
  out[0] = phase[0];
  double offset = 0.0;
  for (size_t i = 1; i < phase.size(); ++i) {
    double d = phase[i] - phase[i - 1];
    if (d > std::numbers::pi) offset -= 2.0 * std::numbers::pi;
    else if (d < -std::numbers::pi) offset += 2.0 * std::numbers::pi;
    out[i] = phase[i] + offset;
  }
  return out;
}

// Least-squares slope of y against x.
inline double linear_fit_slope(const std::vector<double>& x,
                               const std::vector<double>& y) {
  const size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < n; ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

// Phase slope (radians per radian) of a linear-phase filter, estimated from
// the largest contiguous response region within 40 dB of the peak.
inline double phase_slope(const std::vector<double>& magnitude_db,
                          const std::vector<double>& phase_rad,
                          double omega_step) {
  double peak = -1.0e300;
  for (double m : magnitude_db) peak = std::max(peak, m);
  // longest run of indices above peak - 40 dB
  size_t best_start = 0, best_len = 0, start = 0, len = 0;
  for (size_t i = 0; i <= magnitude_db.size(); ++i) {
    if (i < magnitude_db.size() && magnitude_db[i] > peak - 40.0) {
      if (len == 0) start = i;
      ++len;
      if (len > best_len) {
        best_len = len;
        best_start = start;
      }
    } else {
      len = 0;
    }
  }
  std::vector<double> x(best_len), y(best_len);
  for (size_t i = 0; i < best_len; ++i) {
    x[i] = static_cast<double>(best_start + i) * omega_step;
    y[i] = phase_rad[best_start + i];
  }
  return linear_fit_slope(x, unwrap_phase(y));
}

// Deterministic uniform double in [-1, 1) built from raw mt19937 draws, so
// the stream is identical on every platform.
inline double uniform_pm1(std::mt19937& rng) {
  return -1.0 + static_cast<double>(rng()) * (2.0 / 4294967296.0);
}

inline double uniform_in(std::mt19937& rng, double lo, double hi) {
  return lo + (static_cast<double>(rng()) / 4294967296.0) * (hi - lo);
}

}  // namespace oracle
