// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

// Right preconditioners built from low-precision singular vector
// information. Both return a working-precision matrix with orthonormal
// columns to working accuracy such that A * v_tilde has nearly orthogonal
// columns.

#pragma once

#include <vector>

#include "mpjacobi/jacobi.hpp"
#include "mpjacobi/matrix.hpp"
#include "mpjacobi/precision.hpp"

namespace mpjacobi {

enum class PrecondMethod {
  /// Jacobi SVD at low precision, then Householder QR of V at working
  /// precision.
  orthogonalized_low_svd,
  /// Bidiagonalization at low precision, reflectors promoted, Jacobi SVD of
  /// the bidiagonal factor at working precision.
  low_bidiagonalization,
};

std::string_view to_string(PrecondMethod m) noexcept;

template <Scalar Work>
struct Preconditioner {
  Matrix<Work> v_tilde;  // n x n
  PrecondMethod method = PrecondMethod::orthogonalized_low_svd;
  /// ||v_tilde^T v_tilde - I||_F, evaluated one precision above Work.
  double orth_residual = 0.0;
  /// Singular values from the low-precision stage (orthogonalized_low_svd)
  /// or of the bidiagonal factor (low_bidiagonalization).
  std::vector<double> sigma_low;
  bool inner_converged = true;
  int inner_sweeps = 0;
};

/// Where the orthonormal factor is assembled.
enum class Assembly {
  /// In wider_t<Work>, rounded to Work once: ||V^T V - I||_F ~ sqrt(n) u.
  extended,
  /// Entirely in Work: ||V^T V - I||_F grows like n u (QR) and faster for
  /// accumulated rotations.
  working,
};

/// Householder QR of V_low with diag(R) >= 0. low_opts configure the
/// low-precision Jacobi run; accumulate_v is forced on. Non-convergence of
/// that run is recorded, not thrown.
template <Scalar Low, Scalar Work>
Preconditioner<Work> precond_orth_method(const Matrix<Work>& a, const JacobiOptions& low_opts = {},
                                         Assembly assembly = Assembly::extended);

/// v_tilde = P * V_B where P holds the promoted right reflectors and V_B
/// the right singular vectors of the bidiagonal factor from a
/// working-precision Jacobi run. With Assembly::extended, V_B is
/// re-orthonormalized (QR, diag(R) >= 0) and the reflectors applied in the
/// wider precision. Requires cols >= 2.
template <Scalar Low, Scalar Work>
Preconditioner<Work> precond_bidiag_method(const Matrix<Work>& a, const JacobiOptions& work_opts = {},
                                           Assembly assembly = Assembly::extended);

/// ||V^T V - I||_F accumulated in the next wider precision.
template <Scalar T>
double orthogonality_residual(const Matrix<T>& v);

/// max_k |sigma_k(A D) - 1| with D scaling every column to unit norm; the
/// singular values come from a Jacobi run in the precision of T.
template <Scalar T>
double obliquity(const Matrix<T>& a);

}  // namespace mpjacobi
