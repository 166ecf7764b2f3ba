// SPDX-License-Identifier: Apache-2.0
#include "quantmimo/linalg.hpp"

#include <cmath>
#include <sstream>

#include "quantmimo/errors.hpp"

namespace quantmimo {

CMatrix nondiag(const CMatrix& a) {
  CMatrix out = a;
  out.diagonal().setZero();
  return out;
}

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

double hermitian_deviation(const CMatrix& a) {
  const double n = a.norm();
  if (n == 0.0) return 0.0;
  return (a - a.adjoint()).norm() / n;
}

double condition_number(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

CMatrix right_solve_hpd(const CMatrix& b, const CMatrix& a, std::string_view what) {
  if (a.rows() != a.cols() || b.cols() != a.rows()) {
    throw InvalidDimensionError(std::string(what) + ": dimension mismatch");
  }
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError(std::string(what) + ": matrix is not positive definite");
  }
  const double rcond = llt.rcond();
  if (!(rcond > 0.0) || 1.0 / rcond > kSingularCondition) {
    const double cond = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    std::ostringstream msg;
    msg << what << ": matrix is numerically singular (condition ~ " << cond << ")";
    throw SingularMatrixError(msg.str(), cond);
  }
  // A Hermitian: B A^{-1} = (A^{-1} B^H)^H
  return llt.solve(b.adjoint()).adjoint();
}

double log2_det_hermitian(const CMatrix& a, double floor, int* clamped) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("log-det: eigen decomposition failed");
  double acc = 0.0;
  int n_clamped = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double ev = es.eigenvalues()(i);
    if (ev < floor) {
      ev = floor;
      ++n_clamped;
    }
    acc += std::log2(ev);
  }
  if (clamped != nullptr) *clamped = n_clamped;
  if (!std::isfinite(acc)) throw NumericalError("log-det is not finite");
  return acc;
}

double min_eigenvalue_hermitian(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_real_diagonal(const CMatrix& g, double tol) {
  if (g.rows() != g.cols()) return false;
  for (Eigen::Index c = 0; c < g.cols(); ++c) {
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      const Complex v = g(r, c);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
      if (r != c && std::abs(v) > tol) return false;
      if (r == c && std::abs(v.imag()) > tol) return false;
    }
  }
  return true;
}

}  // namespace quantmimo
