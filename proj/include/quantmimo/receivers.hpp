// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include "quantmimo/system_model.hpp"
#include "quantmimo/types.hpp"

namespace quantmimo {

enum class FilterKind { Zf, Mmse, LraMmse, LraMmseAgc };

std::string_view to_string(FilterKind kind);

// Linear estimator x_hat = matrix * input, K*N_T x N_R.
struct ReceiverFilter {
  CMatrix matrix;
  FilterKind kind = FilterKind::Mmse;

  CVector apply(const CVector& input) const { return matrix * input; }
};

// (H^H H)^{-1} H^H. Throws SingularMatrixError when cond(H)^2 > 1e12.
ReceiverFilter zf_filter(const ChannelMatrix& h);

// R_xy R_yy^{-1}.
ReceiverFilter mmse_filter(const CMatrix& r_xy, const CMatrix& r_yy);

// R_xy (R_yy - rho nondiag(R_yy))^{-1}; the (1 - rho) factors of R_xr and
// R_rr cancel.
ReceiverFilter lra_mmse_filter(const CMatrix& r_xy, const CMatrix& r_yy, double rho_q);

// L = R_xz R_zz^{-1}. A non-positive-definite R_zz means the linear
// quantization model broke down for the chosen gains.
ReceiverFilter lra_mmse_agc_filter(const CMatrix& r_xz, const CMatrix& r_zz);

// Hard decision to the nearest constellation point. BPSK slices the real
// part only; QPSK slices real and imaginary parts independently. Zero goes to
// the positive point.
SymbolVector detect(const CVector& filtered, Modulation modulation, double symbol_energy = 1.0);

}  // namespace quantmimo
