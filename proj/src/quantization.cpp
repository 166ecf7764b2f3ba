// SPDX-License-Identifier: Apache-2.0
#include "quantmimo/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/normal.hpp>

#include "quantmimo/errors.hpp"

namespace quantmimo {
namespace {

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// P(Z > x)
double std_normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

}  // namespace

Quantizer make_quantizer_geometry(int bits) {
  if (bits < 1 || bits > kMaxQuantizerBits) {
    throw DomainError("quantizer bits must be in [1, " + std::to_string(kMaxQuantizerBits) +
                      "], got " + std::to_string(bits));
  }
  Quantizer q;
  q.bits = bits;
  const double n_levels = std::ldexp(1.0, bits);
  q.half_range = std::sqrt(static_cast<double>(bits)) / 2.0;
  q.step = 2.0 * q.half_range / n_levels;

  const auto half = static_cast<std::size_t>(1) << (bits - 1);
  q.levels.resize(2 * half);
  for (std::size_t k = 0; k < half; ++k) {
    const double level = (static_cast<double>(k) + 0.5) * q.step;
    q.levels[half + k] = level;
    q.levels[half - 1 - k] = -level;
  }
  q.reference_std = reference_loading(q);
  return q;
}

Quantizer build_quantizer(int bits) {
  Quantizer q = make_quantizer_geometry(bits);
  RandomStream rng(mix_seed(kCalibrationSeed, static_cast<std::uint64_t>(bits)));
  calibrate_rho(q, kMinCalibrationSamples, rng);
  return q;
}

double quantize(double u, const Quantizer& q) {
  const double m = std::fabs(u);
  const double max_index = std::ldexp(1.0, q.bits - 1) - 1.0;
  double k = std::floor(m / q.step);
  // repair rounding in m / step so that exact boundaries go outward
  if ((k + 1.0) * q.step <= m) {
    k += 1.0;
  } else if (k * q.step > m) {
    k -= 1.0;
  }
  k = std::min(k, max_index);
  return std::copysign((k + 0.5) * q.step, u);
}

Complex quantize(Complex z, const Quantizer& q) { return {quantize(z.real(), q), quantize(z.imag(), q)}; }

CVector quantize(const CVector& z, const Quantizer& q) {
  CVector out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) out(i) = quantize(z(i), q);
  return out;
}

CMatrix quantize(const CMatrix& z, const Quantizer& q) {
  CMatrix out(z.rows(), z.cols());
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    for (Eigen::Index r = 0; r < z.rows(); ++r) out(r, c) = quantize(z(r, c), q);
  }
  return out;
}

double calibrate_rho(Quantizer& q, std::int64_t n_samples, RandomStream& rng) {
  if (n_samples < kMinCalibrationSamples) {
    throw DomainError("calibrate_rho needs at least 1e6 samples, got " + std::to_string(n_samples));
  }
  // Stratified: one uniformly jittered draw per probability stratum, so the
  // overload tails are sampled in proportion instead of by a handful of hits.
  const boost::math::normal_distribution<double> input(0.0, q.reference_std);
  const auto n = static_cast<double>(n_samples);
  double err = 0.0;
  double power = 0.0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const double u = boost::math::quantile(input, (static_cast<double>(i) + std::max(rng.uniform(), 1e-12)) / n);
    const double e = quantize(u, q) - u;
    err += e * e;
    power += u * u;
  }
  q.rho_q = err / power;
  return q.rho_q;
}

double output_error_correlation(const Quantizer& q, double sigma) {
  // Sum over the positive half; the integrand is even.
  const auto half = q.levels.size() / 2;
  double total = 0.0;
  for (std::size_t k = 0; k < half; ++k) {
    const double level = q.levels[half + k];
    const double lo = static_cast<double>(k) * q.step / sigma;
    const bool outer = k + 1 == half;
    const double hi = static_cast<double>(k + 1) * q.step / sigma;
    const double prob = outer ? std_normal_sf(lo) : std_normal_sf(lo) - std_normal_sf(hi);
    const double mean_part = sigma * (std_normal_pdf(lo) - (outer ? 0.0 : std_normal_pdf(hi)));
    total += level * (level * prob - mean_part);
  }
  return 2.0 * total;
}

double reference_loading(const Quantizer& q) {
  // Bracket in log(sigma): underloaded at range/1e3, overloaded at 10*range.
  double lo = std::log(q.half_range * 1e-3);
  double hi = std::log(q.half_range * 10.0);
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (output_error_correlation(q, std::exp(mid)) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace quantmimo
