// SPDX-License-Identifier: Apache-2.0
//
// Joint design of the automatic gain control and the low-resolution-aware
// MMSE filter.
//
// The cost is eps(g) = E||x - W(alpha diag(g) y + q)||^2 under the linear
// quantization model. It is quadratic in g and has the closed-form
// minimizer
//
//   g = [(W^T W*) o R_yy + (W^H W) o R_yy^T]^{-1}
//       (2/alpha) (Re[(R_xy^T o W^H) 1] - Re[(W^T o (R_yq W^H)) 1])
//
// where o is the Hadamard product. The gain that reaches the signal is
// alpha * g, which does not depend on alpha.
#pragma once

#include <optional>
#include <vector>

#include "quantmimo/quantization.hpp"
#include "quantmimo/receivers.hpp"
#include "quantmimo/statistics.hpp"
#include "quantmimo/system_model.hpp"

namespace quantmimo {

inline constexpr double kImagResidueTol = 1e-10;

struct AgcState {
  RVector g;           // per receive antenna, real
  double alpha = 1.0;  // clip factor
  double beta = 1.0;   // clip calibration

  // alpha * g, the diagonal of the gain actually applied to y.
  RVector effective_gain() const { return alpha * g; }
};

// alpha = beta * sqrt(tr(R_yy + R_yq + R_yq^H + R_qq) / N_R).
double clip_factor(const CMatrix& r_yy, const CMatrix& r_yq, const CMatrix& r_qq, int n_rx, double beta);

// Nine-term trace expansion of the cost for filter W and gain alpha*diag(g).
double mse_cost(const RVector& g, double alpha, const ReceiverFilter& w, const CorrelationSet& c);

// Stationary point of mse_cost in g for fixed W and alpha.
RVector optimal_gain(const ReceiverFilter& w, const CorrelationSet& c, double alpha);

// d tr[A diag(g) B] / dg = (A^T o B) 1. A is m x n, B is n x m.
CVector diag_trace_gradient(const CMatrix& a, const CMatrix& b);

// The Hadamard-sum matrix (W^T W*) o R_yy + (W^H W) o R_yy^T, still complex.
CMatrix gain_system_matrix(const CMatrix& w, const CMatrix& r_yy);

struct JointDesign {
  AgcState agc;
  ReceiverFilter filter;        // final L
  ReceiverFilter initial;       // the no-AGC LRA-MMSE filter W
  CorrelationSet correlations;  // r_zz / r_xz built with the final gain
  std::vector<double> mse;      // mse[0]: W with unit gain; mse[r]: after round r
};

// One round: W (LRA-MMSE), alpha, g against W, then L = R_xz R_zz^{-1}.
// Further rounds re-solve g against the current L and rebuild L. beta
// defaults to sqrt(b).
JointDesign joint_optimize(const ChannelMatrix& h, const SystemConfig& cfg, const Quantizer& q,
                           int rounds, std::optional<double> beta = std::nullopt);

JointDesign joint_optimize(const CorrelationSet& c, int rounds, double beta);

double default_beta(int bits);

}  // namespace quantmimo
