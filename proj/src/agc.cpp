// SPDX-License-Identifier: Apache-2.0
#include "quantmimo/agc.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "quantmimo/diagnostics.hpp"
#include "quantmimo/errors.hpp"
#include "quantmimo/linalg.hpp"

namespace quantmimo {

double default_beta(int bits) { return std::sqrt(static_cast<double>(bits)); }

double clip_factor(const CMatrix& r_yy, const CMatrix& r_yq, const CMatrix& r_qq, int n_rx, double beta) {
  if (n_rx <= 0) throw DomainError("clip_factor: N_R must be positive");
  if (!(beta > 0.0)) throw DomainError("clip_factor: beta must be positive");
  const double power = (r_yy + r_yq + r_yq.adjoint() + r_qq).trace().real();
  if (!(power > 0.0) || !std::isfinite(power)) {
    throw NumericalError("clip_factor: received power trace is not positive (" +
                         std::to_string(power) + ")");
  }
  return beta * std::sqrt(power / n_rx);
}

double mse_cost(const RVector& g, double alpha, const ReceiverFilter& w, const CorrelationSet& c) {
  const CMatrix& wm = w.matrix;
  if (g.size() != c.r_yy.rows() || wm.cols() != c.r_yy.rows() || wm.rows() != c.r_xx.rows()) {
    throw InvalidDimensionError("mse_cost: dimension mismatch");
  }
  const CVector gain = (alpha * g).cast<Complex>();
  const auto gd = gain.asDiagonal();
  const CMatrix wg = wm * gd;  // W diag(alpha g)
  const CMatrix wh = wm.adjoint();

  Complex eps = c.r_xx.trace();
  eps -= (c.r_xy * gd * wh).trace();
  eps -= (c.r_xq * wh).trace();
  eps -= (wg * c.r_xy.adjoint()).trace();
  eps += (wg * c.r_yy * wg.adjoint()).trace();
  eps += (wg * c.r_yq * wh).trace();
  eps -= (wm * c.r_xq.adjoint()).trace();
  eps += (wm * c.r_yq.adjoint() * wg.adjoint()).trace();
  eps += (wm * c.r_qq * wh).trace();

  if (std::abs(eps.imag()) > kImagResidueTol * (1.0 + std::abs(eps.real()))) {
    std::ostringstream msg;
    msg << "mse_cost: imaginary residue " << eps.imag() << " exceeds tolerance";
    throw NumericalError(msg.str());
  }
  return eps.real();
}

CVector diag_trace_gradient(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.cols() || a.cols() != b.rows()) {
    throw InvalidDimensionError("diag_trace_gradient: A must be m x n and B n x m");
  }
  return a.transpose().cwiseProduct(b).rowwise().sum();
}

CMatrix gain_system_matrix(const CMatrix& w, const CMatrix& r_yy) {
  return (w.transpose() * w.conjugate()).cwiseProduct(r_yy) +
         (w.adjoint() * w).cwiseProduct(r_yy.transpose());
}

namespace {

// Eigen's estimate skips exact zero pivots, so fold in the pivot spread too.
double ldlt_rcond(const Eigen::LDLT<RMatrix>& ldlt) {
  if (ldlt.info() != Eigen::Success) return 0.0;
  const RVector d = ldlt.vectorD().cwiseAbs();
  const double dmax = d.maxCoeff();
  if (!(dmax > 0.0)) return 0.0;
  return std::min(ldlt.rcond(), d.minCoeff() / dmax);
}

}  // namespace

RVector optimal_gain(const ReceiverFilter& w, const CorrelationSet& c, double alpha) {
  const CMatrix& wm = w.matrix;
  const Eigen::Index n = c.r_yy.rows();
  if (wm.cols() != n || wm.rows() != c.r_xy.rows()) {
    throw InvalidDimensionError("optimal_gain: filter does not match the correlation set");
  }
  if (!(alpha > 0.0)) throw DomainError("optimal_gain: alpha must be positive");

  const CMatrix system = gain_system_matrix(wm, c.r_yy);
  const double scale = system.cwiseAbs().maxCoeff();
  const double residue = system.imag().cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) {
    throw SingularMatrixError("optimal_gain: Hadamard-sum matrix is zero (degenerate W)",
                              std::numeric_limits<double>::infinity());
  }
  if (residue > kImagResidueTol * scale) {
    std::ostringstream msg;
    msg << "optimal_gain: Hadamard-sum matrix has imaginary residue " << residue / scale;
    throw NumericalError(msg.str());
  }
  RMatrix m = system.real();
  m = 0.5 * (m + m.transpose());

  const CMatrix wh = wm.adjoint();
  const RVector cross = diag_trace_gradient(c.r_xy, wh).real();
  const RVector distortion = diag_trace_gradient(wm, c.r_yq * wh).real();
  const RVector rhs = (2.0 / alpha) * (cross - distortion);

  Eigen::LDLT<RMatrix> ldlt(m);
  double rcond = ldlt_rcond(ldlt);
  if (!(rcond > 0.0) || 1.0 / rcond > kSingularCondition) {
    const double ridge = 1e-10 * m.trace() / static_cast<double>(n);
    std::ostringstream msg;
    msg << "optimal_gain: ill-conditioned gain system (rcond " << rcond << "), ridge " << ridge;
    record_warning(Warning::GainRidge, msg.str());
    m.diagonal().array() += ridge;
    ldlt.compute(m);
    rcond = ldlt_rcond(ldlt);
    if (!(rcond > 0.0)) {
      throw SingularMatrixError("optimal_gain: Hadamard-sum matrix is singular",
                                std::numeric_limits<double>::infinity());
    }
  }
  RVector g = ldlt.solve(rhs);
  if (!g.allFinite()) throw NumericalError("optimal_gain: non-finite gain");
  return g;
}

namespace {

[[noreturn]] void rethrow_with_round(int round) {
  const std::string prefix = "joint_optimize round " + std::to_string(round) + ": ";
  try {
    throw;
  } catch (const SingularMatrixError& e) {
    throw SingularMatrixError(prefix + e.what(), e.condition_number());
  } catch (const NotPositiveDefiniteError& e) {
    throw NotPositiveDefiniteError(prefix + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(prefix + e.what());
  }
}

}  // namespace

JointDesign joint_optimize(const CorrelationSet& c, int rounds, double beta) {
  if (rounds < 1) throw DomainError("joint_optimize: rounds must be >= 1");
  const auto n_rx = static_cast<int>(c.r_yy.rows());
  JointDesign d;
  int round = 0;
  try {
    d.initial = lra_mmse_filter(c.r_xy, c.r_yy, c.rho_q);
    const double alpha = clip_factor(c.r_yy, c.r_yq, c.r_qq, n_rx, beta);
    d.mse.push_back(mse_cost(RVector::Constant(n_rx, 1.0 / alpha), alpha, d.initial, c));

    ReceiverFilter current = d.initial;
    RVector g;
    CorrelationSet cg = c;
    for (round = 1; round <= rounds; ++round) {
      g = optimal_gain(current, c, alpha);
      cg = with_gain(c, alpha * g);
      current = lra_mmse_agc_filter(cg.r_xz, cg.r_zz);
      d.mse.push_back(mse_cost(g, alpha, current, c));
    }
    d.agc = AgcState{g, alpha, beta};
    d.filter = current;
    d.correlations = cg;
  } catch (const NumericalError&) {
    rethrow_with_round(round);
  }
  return d;
}

JointDesign joint_optimize(const ChannelMatrix& h, const SystemConfig& cfg, const Quantizer& q,
                           int rounds, std::optional<double> beta) {
  const CorrelationSet c = correlation_set(h, cfg, q.rho_q);
  return joint_optimize(c, rounds, beta.value_or(default_beta(q.bits)));
}

}  // namespace quantmimo
