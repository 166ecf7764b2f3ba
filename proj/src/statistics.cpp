// SPDX-License-Identifier: Apache-2.0
#include "quantmimo/statistics.hpp"

#include "quantmimo/errors.hpp"
#include "quantmimo/linalg.hpp"

namespace quantmimo {

BaseCorrelations base_correlations(const ChannelMatrix& h, const SystemConfig& cfg) {
  if (h.rows() != cfg.rx_antennas || h.cols() != cfg.streams()) {
    throw InvalidDimensionError("base_correlations: channel does not match the configuration");
  }
  const CMatrix& hm = h.entries;
  BaseCorrelations b;
  b.r_yy = cfg.symbol_energy * (hm * hm.adjoint());
  b.r_yy.diagonal().array() += cfg.noise_variance;
  b.r_yy = hermitian_part(b.r_yy);
  b.r_xy = cfg.symbol_energy * hm.adjoint();
  return b;
}

QuantCorrelations quant_correlations(const CMatrix& r_yy, const CMatrix& r_xy, double rho_q) {
  if (!(rho_q >= 0.0 && rho_q < 1.0)) {
    throw DomainError("rho_q must lie in [0, 1), got " + std::to_string(rho_q));
  }
  if (r_yy.rows() != r_yy.cols() || r_xy.cols() != r_yy.rows()) {
    throw InvalidDimensionError("quant_correlations: dimension mismatch");
  }
  const CMatrix off = nondiag(r_yy);
  QuantCorrelations qc;
  qc.r_yq = -rho_q * r_yy;
  qc.r_qq = hermitian_part(rho_q * r_yy - (1.0 - rho_q) * rho_q * off);
  qc.r_xq = -rho_q * r_xy;
  qc.r_xr = (1.0 - rho_q) * r_xy;
  qc.r_rr = hermitian_part((1.0 - rho_q) * (r_yy - rho_q * off));
  return qc;
}

AgcCorrelations agc_correlations(const CMatrix& r_yy, const CMatrix& r_yq, const CMatrix& r_qq,
                                 const CMatrix& r_xy, const CMatrix& r_xq, const CMatrix& g) {
  if (!is_real_diagonal(g)) throw DomainError("agc_correlations: G must be real and diagonal");
  if (g.rows() != r_yy.rows()) throw InvalidDimensionError("agc_correlations: G has wrong size");
  const CVector gain = g.diagonal().real().cast<Complex>();
  const auto gd = gain.asDiagonal();
  AgcCorrelations a;
  a.r_zz = hermitian_part(gd * r_yy * gd + gd * r_yq + r_yq.adjoint() * gd + r_qq);
  a.r_xz = r_xy * gd + r_xq;
  return a;
}

CorrelationSet correlation_set(const ChannelMatrix& h, const SystemConfig& cfg, double rho_q) {
  const BaseCorrelations b = base_correlations(h, cfg);
  const QuantCorrelations q = quant_correlations(b.r_yy, b.r_xy, rho_q);
  CorrelationSet c;
  c.r_xx = CMatrix::Identity(cfg.streams(), cfg.streams()) * cfg.symbol_energy;
  c.r_yy = b.r_yy;
  c.r_xy = b.r_xy;
  c.r_yq = q.r_yq;
  c.r_qq = q.r_qq;
  c.r_xq = q.r_xq;
  c.r_xr = q.r_xr;
  c.r_rr = q.r_rr;
  c.r_zz = q.r_rr;
  c.r_xz = q.r_xr;
  c.rho_q = rho_q;
  return c;
}

CMatrix diagonal_gain(const RVector& gain) {
  CMatrix g = CMatrix::Zero(gain.size(), gain.size());
  g.diagonal() = gain.cast<Complex>();
  return g;
}

CorrelationSet with_gain(const CorrelationSet& c, const RVector& gain) {
  CorrelationSet out = c;
  const AgcCorrelations a = agc_correlations(c.r_yy, c.r_yq, c.r_qq, c.r_xy, c.r_xq, diagonal_gain(gain));
  out.r_zz = a.r_zz;
  out.r_xz = a.r_xz;
  return out;
}

}  // namespace quantmimo
