// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

// One-sided Jacobi SVD with cyclic-by-rows sweeps and the relative
// stopping rule |a_p^T a_q| <= tol * ||a_p|| * ||a_q||.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mpjacobi/matrix.hpp"
#include "mpjacobi/precision.hpp"

namespace mpjacobi {

struct JacobiOptions {
  /// Relative orthogonality threshold. Defaults to sqrt(m) * u of the
  /// arithmetic the kernel runs in.
  std::optional<double> tol;
  int max_sweeps = 30;
  bool accumulate_v = true;
  bool sort_descending = true;
};

template <Scalar T>
struct SvdResult {
  Matrix<T> u;                 // m x n
  std::vector<T> sigma;        // length n, descending when sorted
  std::optional<Matrix<T>> v;  // n x n when accumulated
  /// Sweeps that applied at least one rotation. The confirming sweep that
  /// finds every pair orthogonal is not counted.
  int sweeps = 0;
  std::int64_t rotations = 0;
  bool converged = false;
};

template <Scalar T>
struct JacobiRotation {
  T cs;
  T sn;
};

/// Rotation [cs sn; -sn cs] annihilating the off-diagonal of the Gram
/// block [[gpp, gpq], [gpq, gqq]] (smaller-angle root).
template <Scalar T>
JacobiRotation<T> jacobi_rotation(T gpp, T gqq, T gpq);

/// Throws Error(zero_column) for an all-zero column and
/// Error(invalid_argument) when rows < cols. Exhausting max_sweeps is not
/// an error: the partial result comes back with converged == false.
template <Scalar T>
SvdResult<T> one_sided_jacobi(Matrix<T> a, const JacobiOptions& opts = {});

/// Effective tolerance for an m-row input at the precision of T.
template <Scalar T>
double default_jacobi_tol(std::size_t rows) noexcept;

}  // namespace mpjacobi
