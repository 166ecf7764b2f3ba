// SPDX-License-Identifier: Apache-2.0
//
// Uniform mid-rise b-bit quantizer over [-sqrt(b)/2, +sqrt(b)/2], applied
// separately to the real and imaginary part of every sample.
#pragma once

#include <cstdint>
#include <vector>

#include "quantmimo/random.hpp"
#include "quantmimo/types.hpp"

namespace quantmimo {

inline constexpr int kMaxQuantizerBits = 16;
inline constexpr std::int64_t kMinCalibrationSamples = 1'000'000;
inline constexpr std::uint64_t kCalibrationSeed = 0x0adc0adc2024ULL;

struct Quantizer {
  int bits = 0;
  double step = 0.0;        // Delta = sqrt(b) / 2^b
  double half_range = 0.0;  // sqrt(b) / 2
  std::vector<double> levels;  // ascending, 2^b entries, no zero level
  // Standard deviation (per real dimension) of a Gaussian input for which
  // this quantizer is MSE-optimal, i.e. E[Q(u)(Q(u) - u)] = 0. Front ends
  // scale their signals to this level before quantizing.
  double reference_std = 0.0;
  // E[(Q(u)-u)^2] / E[u^2] for u ~ N(0, reference_std^2).
  double rho_q = 0.0;

  double clip_level() const { return levels.back(); }
};

// Geometry plus reference loading, rho_q left at 0.
Quantizer make_quantizer_geometry(int bits);

// Geometry, reference loading, and a Monte Carlo rho_q from
// kMinCalibrationSamples draws with the fixed calibration seed.
Quantizer build_quantizer(int bits);

// Nearest level; boundaries round away from zero, |u| beyond the range
// saturates to the extreme level. -0.0 maps to the negative innermost level.
double quantize(double u, const Quantizer& q);
Complex quantize(Complex z, const Quantizer& q);
CVector quantize(const CVector& z, const Quantizer& q);
CMatrix quantize(const CMatrix& z, const Quantizer& q);

// Monte Carlo distortion factor at the reference loading; stores the estimate
// into q.rho_q and returns it. Captures both granular and overload error.
double calibrate_rho(Quantizer& q, std::int64_t n_samples, RandomStream& rng);

// Solves E[Q(u)(Q(u)-u)] = 0 for the Gaussian standard deviation, using
// exact per-cell Gaussian integrals.
double reference_loading(const Quantizer& q);

// E[Q(u)(Q(u)-u)] for u ~ N(0, sigma^2). Positive when underloaded.
double output_error_correlation(const Quantizer& q, double sigma);

}  // namespace quantmimo
