// SPDX-License-Identifier: Apache-2.0
//
// Achievable-rate lower bound log2 det(R_xx) / det(R_ee) for Gaussian
// inputs, with R_ee the error covariance of the linear estimate under the
// quantization model.
#pragma once

#include "quantmimo/receivers.hpp"
#include "quantmimo/statistics.hpp"
#include "quantmimo/types.hpp"

namespace quantmimo {

inline constexpr double kPsdTolerance = -1e-10;
inline constexpr double kEigenFloor = 1e-12;

struct RateReport {
  double sum_rate = 0.0;  // bits per channel use, all K*N_T streams
  CMatrix error_cov;
  double det_ratio = 1.0;  // det(R_xx) / det(R_ee); may overflow to +inf for large systems
};

// E[(x - x_hat)(x - x_hat)^H] for x_hat = W (G y + q), G real diagonal.
// Hermitian-symmetrized; records a warning when an eigenvalue falls below -1e-10.
CMatrix error_covariance(const ReceiverFilter& w, const CMatrix& g, const CorrelationSet& c);
CMatrix error_covariance(const ReceiverFilter& w, const RVector& gain, const CorrelationSet& c);

// log2(det R_xx / det R_ee) via eigenvalue log-determinants. Not clamped:
// an estimator worse than the prior yields a negative value. Eigenvalues of
// R_ee below 1e-12 are raised to 1e-12 with a warning.
double achievable_rate(const CMatrix& r_xx, const CMatrix& r_ee);

// Rate report with the sum rate clamped at 0 (warning when clamped).
RateReport rate_report(const ReceiverFilter& w, const RVector& gain, const CorrelationSet& c);

}  // namespace quantmimo
