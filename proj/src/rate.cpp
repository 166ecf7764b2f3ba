// SPDX-License-Identifier: Apache-2.0
#include "quantmimo/rate.hpp"

#include <cmath>
#include <sstream>

#include "quantmimo/diagnostics.hpp"
#include "quantmimo/errors.hpp"
#include "quantmimo/linalg.hpp"

namespace quantmimo {

CMatrix error_covariance(const ReceiverFilter& w, const CMatrix& g, const CorrelationSet& c) {
  const CMatrix& wm = w.matrix;
  if (!is_real_diagonal(g)) throw DomainError("error_covariance: G must be real and diagonal");
  if (g.rows() != c.r_yy.rows() || wm.cols() != c.r_yy.rows() || wm.rows() != c.r_xx.rows()) {
    throw InvalidDimensionError("error_covariance: dimension mismatch");
  }
  const CMatrix wh = wm.adjoint();
  const CMatrix gw = g * wh;  // G W^H
  CMatrix ree = c.r_xx;
  ree -= c.r_xy * gw;
  ree -= c.r_xq * wh;
  ree -= gw.adjoint() * c.r_xy.adjoint();
  ree += gw.adjoint() * c.r_yy * gw;
  ree += gw.adjoint() * c.r_yq * wh;
  ree -= wm * c.r_xq.adjoint();
  ree += wm * c.r_yq.adjoint() * gw;
  ree += wm * c.r_qq * wh;
  ree = hermitian_part(ree);

  const double min_ev = min_eigenvalue_hermitian(ree);
  if (min_ev < kPsdTolerance) {
    std::ostringstream msg;
    msg << "error covariance has eigenvalue " << min_ev << " (linear quantization model breakdown)";
    record_warning(Warning::ErrorCovIndefinite, msg.str());
  }
  return ree;
}

CMatrix error_covariance(const ReceiverFilter& w, const RVector& gain, const CorrelationSet& c) {
  return error_covariance(w, diagonal_gain(gain), c);
}

double achievable_rate(const CMatrix& r_xx, const CMatrix& r_ee) {
  if (r_xx.rows() != r_ee.rows() || r_xx.rows() != r_xx.cols() || r_ee.rows() != r_ee.cols()) {
    throw InvalidDimensionError("achievable_rate: dimension mismatch");
  }
  const double logdet_xx = log2_det_hermitian(hermitian_part(r_xx), 0.0);
  int clamped = 0;
  const double logdet_ee = log2_det_hermitian(hermitian_part(r_ee), kEigenFloor, &clamped);
  if (clamped > 0) {
    record_warning(Warning::EigenvalueClamped,
                   std::to_string(clamped) + " error-covariance eigenvalue(s) raised to 1e-12");
  }
  const double rate = logdet_xx - logdet_ee;
  if (!std::isfinite(rate)) throw NumericalError("achievable_rate: non-finite log-det");
  return rate;
}

RateReport rate_report(const ReceiverFilter& w, const RVector& gain, const CorrelationSet& c) {
  RateReport r;
  r.error_cov = error_covariance(w, gain, c);
  double rate = achievable_rate(c.r_xx, r.error_cov);
  if (rate < 0.0) {
    record_warning(Warning::RateClamped, "sum rate " + std::to_string(rate) + " clamped to 0");
    rate = 0.0;
  }
  r.sum_rate = rate;
  r.det_ratio = std::exp2(rate);
  return r;
}

}  // namespace quantmimo
