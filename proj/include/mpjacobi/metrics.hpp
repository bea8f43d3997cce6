// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

// Condition numbers, off quantities, forward errors and the
// extended-precision reference SVD used as ground truth.

#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "mpjacobi/double_double.hpp"
#include "mpjacobi/matrix.hpp"
#include "mpjacobi/precision.hpp"

namespace mpjacobi {

/// Frobenius norm of the off-diagonal part of a square matrix.
template <Scalar T>
double off_quantity(const Matrix<T>& g);

/// A^T A with double-double accumulation.
template <Scalar T>
Matrix<DoubleDouble> gram_extended(const Matrix<T>& a);

struct ReferenceSvd {
  std::vector<DoubleDouble> sigma;  // descending
  int sweeps = 0;
  bool converged = false;
};

/// Singular values by double-double one-sided Jacobi (tol sqrt(m) 2^-106).
/// The input is first multiplied by an orthonormal basis obtained from a
/// binary64 Jacobi run and re-orthogonalized by double-double Householder
/// QR; this leaves the singular values unchanged to O(n 2^-106) and cuts
/// the extended-precision sweeps to a handful. Throws non_convergence.
ReferenceSvd reference_svd_full(const Matrix<DoubleDouble>& a);

std::vector<DoubleDouble> reference_svd(const Matrix<DoubleDouble>& a);
std::vector<DoubleDouble> reference_svd(const Matrix<double>& a);
std::vector<DoubleDouble> reference_svd(const Matrix<float>& a);

/// sigma_max / sigma_min. Throws rank_deficient when sigma_min <= 10 *
/// sigma_max * 2^-106 or sigma is empty.
double condition_from_sigma(const std::vector<DoubleDouble>& sigma);

/// kappa_2 from the reference SVD.
template <Scalar T>
double kappa2(const Matrix<T>& a);

/// kappa_2(A D) with D normalizing the columns; throws zero_column.
template <Scalar T>
double kappa2_scaled(const Matrix<T>& a);

/// Cheap estimate of kappa_2 in binary64: power iteration on A^T A for
/// sigma_max and inverse iteration through the R factor of A for sigma_min.
/// Returns +inf for a numerically singular R.
template <Scalar T>
double estimate_kappa2(const Matrix<T>& a, bool scale_columns = false);

enum class TruthSource { closed_form, construction, reference };

std::string_view to_string(TruthSource s) noexcept;

struct ErrorReport {
  std::vector<double> per_k;
  double max_forward_error = 0.0;
  std::optional<double> bound_value;
  bool bound_satisfied = true;
  TruthSource truth = TruthSource::reference;
};

/// |computed_k - truth_k| / truth_k evaluated in double-double. Throws
/// dimension_mismatch on length mismatch and invalid_argument when a true
/// value is not positive.
ErrorReport forward_errors(const std::vector<double>& computed, const std::vector<DoubleDouble>& truth,
                           TruthSource source = TruthSource::reference);

/// n u + sqrt(m n) u kappa, the first-order forward error bound for the
/// preconditioned algorithm.
double forward_error_bound(std::size_t m, std::size_t n, double u, double kappa2d_preconditioned);

/// Fills bound_value and bound_satisfied.
void attach_bound(ErrorReport& report, std::size_t m, std::size_t n, double u, double kappa2d_preconditioned);

}  // namespace mpjacobi
