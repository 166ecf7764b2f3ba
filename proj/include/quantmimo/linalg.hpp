// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include "quantmimo/types.hpp"

namespace quantmimo {

// Systems with an estimated condition number above this are treated as singular.
inline constexpr double kSingularCondition = 1e12;

CMatrix nondiag(const CMatrix& a);
CMatrix hermitian_part(const CMatrix& a);
// ||A - A^H||_F / ||A||_F (0 for the zero matrix).
double hermitian_deviation(const CMatrix& a);

// B * A^{-1} for Hermitian positive definite A, via Cholesky. Throws
// NotPositiveDefiniteError, or SingularMatrixError when cond(A) > 1e12.
CMatrix right_solve_hpd(const CMatrix& b, const CMatrix& a, std::string_view what);

// 2-norm condition number from the singular values.
double condition_number(const CMatrix& a);

// log2 det(A) for Hermitian A. Eigenvalues below floor are raised to floor;
// the number raised is written to *clamped when given.
double log2_det_hermitian(const CMatrix& a, double floor, int* clamped = nullptr);

double min_eigenvalue_hermitian(const CMatrix& a);

bool is_real_diagonal(const CMatrix& g, double tol = 0.0);

}  // namespace quantmimo
