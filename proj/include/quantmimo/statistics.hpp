// SPDX-License-Identifier: Apache-2.0
//
// Second-order statistics of the quantized uplink under the linear model
// r = y + q, built symbolically from the channel (receiver CSI is perfect).
#pragma once

#include "quantmimo/system_model.hpp"
#include "quantmimo/types.hpp"

namespace quantmimo {

struct CorrelationSet {
  CMatrix r_xx;  // K*N_T square, sigma_x^2 I
  CMatrix r_yy;  // N_R square
  CMatrix r_xy;  // K*N_T x N_R
  CMatrix r_yq;
  CMatrix r_qq;
  CMatrix r_xq;
  CMatrix r_xr;
  CMatrix r_rr;
  // AGC-aware pair for z = G y + q; equal to (r_rr, r_xr) until a gain is applied.
  CMatrix r_zz;
  CMatrix r_xz;
  double rho_q = 0.0;
};

struct BaseCorrelations {
  CMatrix r_yy;
  CMatrix r_xy;
};

struct QuantCorrelations {
  CMatrix r_yq;
  CMatrix r_qq;
  CMatrix r_xq;
  CMatrix r_xr;
  CMatrix r_rr;
};

struct AgcCorrelations {
  CMatrix r_zz;
  CMatrix r_xz;
};

// R_yy = sigma_x^2 H H^H + sigma_n^2 I, R_xy = sigma_x^2 H^H.
BaseCorrelations base_correlations(const ChannelMatrix& h, const SystemConfig& cfg);

// R_yq = -rho R_yy, R_qq = rho R_yy - (1-rho) rho nondiag(R_yy),
// R_xq = -rho R_xy, R_xr = (1-rho) R_xy, R_rr = (1-rho)(R_yy - rho nondiag(R_yy)).
// Throws DomainError for rho outside [0, 1).
QuantCorrelations quant_correlations(const CMatrix& r_yy, const CMatrix& r_xy, double rho_q);

// R_zz = G R_yy G + G R_yq + R_yq^H G + R_qq, R_xz = R_xy G + R_xq.
// G must be real and diagonal.
AgcCorrelations agc_correlations(const CMatrix& r_yy, const CMatrix& r_yq, const CMatrix& r_qq,
                                 const CMatrix& r_xy, const CMatrix& r_xq, const CMatrix& g);

CorrelationSet correlation_set(const ChannelMatrix& h, const SystemConfig& cfg, double rho_q);

// Copy of c with r_zz / r_xz rebuilt for the effective gain vector gain (G = diag(gain)).
CorrelationSet with_gain(const CorrelationSet& c, const RVector& gain);

CMatrix diagonal_gain(const RVector& gain);

}  // namespace quantmimo
