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

#include <cmath>
#include <stdexcept>
#include <string>

namespace pfbank {

enum class ScaleKind { Mel, Bark };

inline const char* scale_name(ScaleKind kind) {
  return kind == ScaleKind::Mel ? "mel" : "bark";
}

// Upper end of the bisection bracket used when inverting the Bark warping.
inline constexpr double kBarkSearchMaxHz = 1.0e9;

namespace detail {

inline void require_finite_nonneg(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) {
    throw std::domain_error(std::string(what) + " must be finite and >= 0");
  }
}

}  // namespace detail

// Mel(f) = 2595 log10(1 + f/700), anchored near 1000 Mel at a 1000 Hz tone.
inline double hz_to_mel(double hz) {
  detail::require_finite_nonneg(hz, "frequency in Hz");
  return 2595.0 * std::log10(1.0 + hz / 700.0);
}

// Algebraic inverse of hz_to_mel.
inline double mel_to_hz(double mel) {
  detail::require_finite_nonneg(mel, "mel value");
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

// Bark(f) = 13 atan(0.76 f / 1000) + 3.5 atan((f / 7500)^2), Schroeder's form.
inline double hz_to_bark(double hz) {
  detail::require_finite_nonneg(hz, "frequency in Hz");
  const double r = hz / 7500.0;
  return 13.0 * std::atan(0.76 * hz / 1000.0) + 3.5 * std::atan(r * r);
}

// Largest Bark value invertible within [0, kBarkSearchMaxHz]. Slightly below
// the asymptotic bound 16.5 * pi / 2 of the two arctangent terms.
inline double bark_upper_limit() { return hz_to_bark(kBarkSearchMaxHz); }

// The Bark warping has no closed-form inverse; bisect on the monotone forward
// map until the Hz bracket collapses to adjacent doubles.
inline double bark_to_hz(double bark) {
  detail::require_finite_nonneg(bark, "bark value");
  if (bark > bark_upper_limit()) {
    throw std::domain_error("bark value outside representable range");
  }
  if (bark == 0.0) return 0.0;
  double lo = 0.0;
  double hi = kBarkSearchMaxHz;
  // [0, 1e9] collapses in well under 1200 halvings even through subnormals.
  for (int i = 0; i < 1200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hz_to_bark(mid) < bark) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double warp(ScaleKind kind, double hz) {
  return kind == ScaleKind::Mel ? hz_to_mel(hz) : hz_to_bark(hz);
}

inline double unwarp(ScaleKind kind, double value) {
  return kind == ScaleKind::Mel ? mel_to_hz(value) : bark_to_hz(value);
}

}  // namespace pfbank
