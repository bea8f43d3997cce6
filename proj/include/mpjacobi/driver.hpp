// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

// Mixed-precision preconditioned one-sided Jacobi SVD.
//
//   1. v_tilde <- preconditioner built at low precision.
//   2. a_tilde <- A * v_tilde at high precision, rounded once to working.
//   3. If 6m >= 11n, QR-reduce a_tilde at working precision and iterate on R.
//   4. One-sided Jacobi at working precision; V = v_tilde * V_J.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mpjacobi/jacobi.hpp"
#include "mpjacobi/matrix.hpp"
#include "mpjacobi/precision.hpp"
#include "mpjacobi/precond.hpp"

namespace mpjacobi {

struct PrecisionConfig {
  Format low = Format::binary32;
  Format working = Format::binary64;
  Format high = Format::double_double;
  std::string name = "sdq";
};

/// binary32 / binary64 / double-double.
PrecisionConfig sdq_config();
/// binary32 / binary32 / binary64. Low and working coincide.
PrecisionConfig ssd_config();
/// "sdq" or "ssd", case-insensitive.
PrecisionConfig parse_config(std::string_view name);

enum class QrMode { automatic, never, always };

enum class DiagnosticsLevel {
  /// Sweeps, rotations and convergence only.
  none,
  /// Adds off quantities, obliquity, orthogonality and binary64 condition
  /// estimates (power and inverse iteration).
  estimated,
  /// Replaces the estimates with condition numbers from the
  /// double-double reference SVD.
  reference,
};

struct Mp3Options {
  PrecondMethod method = PrecondMethod::orthogonalized_low_svd;
  Assembly assembly = Assembly::extended;
  /// Working-precision Jacobi on the preconditioned matrix.
  JacobiOptions jacobi;
  /// Low-precision Jacobi inside the orthogonalized preconditioner.
  JacobiOptions low_jacobi;
  QrMode qr = QrMode::automatic;
  /// Replaces the automatic QR trigger 6m >= 11n by m >= ratio * n.
  std::optional<double> qr_ratio;
  /// Negative control: QR-reduce A first and precondition R instead.
  bool qr_before_preconditioning = false;
  DiagnosticsLevel diagnostics = DiagnosticsLevel::estimated;
  /// Keep a_tilde (high and working) and the QR factor R in the result.
  bool keep_intermediates = false;
};

struct AssumptionFlags {
  bool a1 = false;  // 6 n u kappa(A) / (1 - n u) < 1
  bool a2 = false;  // gamma_h < (1 - n u) u / (4 (1 + n u) kappa(A))
  bool a3 = false;  // 4 sqrt(m) u < 1 and 16 m sqrt(n) u kappa_D(a_tilde) < 1
  double kappa2_estimate = 0.0;
  double kappa2d_tilde_estimate = 0.0;
};

struct Mp3Diagnostics {
  double orth_residual = 0.0;
  /// off(A^T A) / ||A^T A||_F.
  double off_before = 0.0;
  /// off(a_tilde^T a_tilde) / ||A^T A||_F with a_tilde at high precision.
  double off_after = 0.0;
  /// off(R^T R) / ||A^T A||_F when QR was used.
  std::optional<double> off_qr;
  double obliq_after = 0.0;
  double kappa2d_before = 0.0;
  double kappa2d_after = 0.0;
  /// ||U_J diag(sigma) V_J^T - X||_F / ||X||_F where X is the matrix the
  /// working-precision Jacobi ran on.
  double composition_residual = 0.0;
  bool used_qr = false;
  int jacobi_sweeps = 0;
  std::int64_t jacobi_rotations = 0;
  bool converged = false;
  bool preconditioner_converged = true;
  int preconditioner_sweeps = 0;
  AssumptionFlags assumptions;
  DiagnosticsLevel level = DiagnosticsLevel::none;
};

template <Scalar Work, Scalar High>
struct Mp3Intermediates {
  Matrix<Work> v_tilde;
  Matrix<High> a_tilde_high;
  Matrix<Work> a_tilde;
  std::optional<Matrix<Work>> r_hat;
};

template <Scalar Work, Scalar High>
struct Mp3Result {
  SvdResult<Work> svd;
  Mp3Diagnostics diag;
  std::optional<Mp3Intermediates<Work, High>> intermediates;
};

/// Throws invalid_argument (shape, non-finite entries), zero_column.
/// Exhausting the sweep budget returns the partial result with
/// svd.converged == false.
template <Scalar Low, Scalar Work, Scalar High>
Mp3Result<Work, High> mp3_svd(const Matrix<Work>& a, const Mp3Options& opts = {});

/// Unpreconditioned one-sided Jacobi at working precision, optionally after
/// a QR reduction. Diagnostics carry off_before and kappa2d_before.
template <Scalar Work>
Mp3Result<Work, wider_t<Work>> plain_jacobi_svd(const Matrix<Work>& a, const JacobiOptions& opts = {},
                                                QrMode qr = QrMode::never,
                                                std::optional<double> qr_ratio = std::nullopt,
                                                DiagnosticsLevel level = DiagnosticsLevel::estimated);

/// Automatic QR trigger: 6m >= 11n, or m >= ratio * n when overridden.
bool qr_triggered(std::size_t m, std::size_t n, std::optional<double> ratio = std::nullopt) noexcept;

/// Algorithms selectable at run time.
enum class Algorithm { mp3_orth, mp3_bidiag, plain, plain_qr_first, mp3_qr_before };

std::string_view to_string(Algorithm a) noexcept;
/// Accepts the canonical names (mp3-orth, mp3-bidiag, plain-jacobi,
/// plain-jacobi-qr-first, mp3-qr-before) and the short forms orth, bidiag,
/// plain.
Algorithm parse_algorithm(std::string_view name);

struct SvdRequest {
  Algorithm algorithm = Algorithm::mp3_orth;
  PrecisionConfig config = sdq_config();
  JacobiOptions jacobi;
  std::optional<double> qr_ratio;
  DiagnosticsLevel diagnostics = DiagnosticsLevel::estimated;
};

/// Results widened to binary64 regardless of the working format.
struct SvdOutput {
  std::vector<double> sigma;
  Matrix<double> u;
  Matrix<double> v;
  Mp3Diagnostics diag;
  double working_unit_roundoff = 0.0;
};

/// Runs the requested algorithm on a binary64 input. Under the ssd
/// configuration the input is rounded to binary32 first.
SvdOutput run_svd(const Matrix<double>& a, const SvdRequest& req);

}  // namespace mpjacobi
