// SPDX-License-Identifier: Apache-2.0
#include "quantmimo/receivers.hpp"

#include <cmath>
#include <sstream>

#include "quantmimo/errors.hpp"
#include "quantmimo/linalg.hpp"

namespace quantmimo {

std::string_view to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::Zf: return "zf";
    case FilterKind::Mmse: return "mmse";
    case FilterKind::LraMmse: return "lra-mmse";
    case FilterKind::LraMmseAgc: return "lra-mmse-agc";
  }
  return "unknown";
}

ReceiverFilter zf_filter(const ChannelMatrix& h) {
  const CMatrix& hm = h.entries;
  if (hm.rows() < hm.cols()) throw InvalidDimensionError("zf_filter: H must be tall");
  Eigen::JacobiSVD<CMatrix> svd(hm, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  const double cond = smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
  // the Gram matrix H^H H carries cond^2
  if (!(cond * cond <= kSingularCondition)) {
    std::ostringstream msg;
    msg << "zf_filter: H^H H is singular (cond(H) = " << cond << ")";
    throw SingularMatrixError(msg.str(), cond * cond);
  }
  // pseudo-inverse V S^{-1} U^H, numerically equivalent to (H^H H)^{-1} H^H
  const CMatrix w = svd.matrixV() * s.cwiseInverse().cast<Complex>().asDiagonal() *
                    svd.matrixU().adjoint();
  return {w, FilterKind::Zf};
}

ReceiverFilter mmse_filter(const CMatrix& r_xy, const CMatrix& r_yy) {
  return {right_solve_hpd(r_xy, r_yy, "mmse_filter: R_yy"), FilterKind::Mmse};
}

ReceiverFilter lra_mmse_filter(const CMatrix& r_xy, const CMatrix& r_yy, double rho_q) {
  if (!(rho_q >= 0.0 && rho_q < 1.0)) throw DomainError("lra_mmse_filter: rho_q outside [0, 1)");
  const CMatrix modified = hermitian_part(r_yy - rho_q * nondiag(r_yy));
  try {
    return {right_solve_hpd(r_xy, modified, "lra_mmse_filter"), FilterKind::LraMmse};
  } catch (const SingularMatrixError& e) {
    std::ostringstream msg;
    msg << e.what() << " [rho_q = " << rho_q << "]";
    throw SingularMatrixError(msg.str(), e.condition_number());
  }
}

ReceiverFilter lra_mmse_agc_filter(const CMatrix& r_xz, const CMatrix& r_zz) {
  return {right_solve_hpd(r_xz, r_zz, "lra_mmse_agc_filter: R_zz"), FilterKind::LraMmseAgc};
}

SymbolVector detect(const CVector& filtered, Modulation modulation, double symbol_energy) {
  const double a = std::sqrt(symbol_energy);
  SymbolVector out(filtered.size());
  if (modulation == Modulation::Bpsk) {
    for (Eigen::Index i = 0; i < filtered.size(); ++i) {
      out(i) = Complex(filtered(i).real() >= 0.0 ? a : -a, 0.0);
    }
  } else {
    const double b = a / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < filtered.size(); ++i) {
      out(i) = Complex(filtered(i).real() >= 0.0 ? b : -b, filtered(i).imag() >= 0.0 ? b : -b);
    }
  }
  return out;
}

}  // namespace quantmimo
