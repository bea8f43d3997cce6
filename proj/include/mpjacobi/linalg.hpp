// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

// Precision-generic dense kernels: norms, products, Householder QR,
// Householder bidiagonalization and reflector application.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mpjacobi/matrix.hpp"
#include "mpjacobi/precision.hpp"

namespace mpjacobi {

template <Scalar T>
T dot(std::span<const T> x, std::span<const T> y);

/// 2-norm with LAPACK-style scaling, immune to over/underflow of squares.
template <Scalar T>
T norm2(std::span<const T> x);

/// Entry j is the 2-norm of column j.
template <Scalar T>
std::vector<T> column_norms(const Matrix<T>& a);

template <Scalar T>
Matrix<T> transpose(const Matrix<T>& a);

/// Plain product at the precision of T.
template <Scalar T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b);

template <Scalar T>
double frobenius_norm(const Matrix<T>& a);

/// One Householder reflector H = I - tau v v^T acting on rows
/// [offset, offset + v.size()). v[0] == 1.
template <Scalar T>
struct Reflector {
  std::size_t offset = 0;
  std::vector<T> v;
  T tau{};
};

enum class ReflectorSide { left, right };

template <Scalar T>
struct HouseholderSeq {
  std::size_t dim = 0;  // order of the space the reflectors act on
  ReflectorSide side = ReflectorSide::right;
  std::vector<Reflector<T>> reflectors;

  std::size_t size() const noexcept { return reflectors.size(); }

  /// Converts the vectors exactly (or rounded when narrowing) and
  /// recomputes tau = 2 / (v^T v) at the target precision so each
  /// reflector is orthogonal to that precision.
  template <Scalar U>
  HouseholderSeq<U> convert_to() const {
    HouseholderSeq<U> out;
    out.dim = dim;
    out.side = side;
    out.reflectors.reserve(reflectors.size());
    for (const auto& r : reflectors) {
      Reflector<U> q;
      q.offset = r.offset;
      q.v.reserve(r.v.size());
      U vv{};
      for (const auto& x : r.v) {
        q.v.push_back(convert_scalar<U>(x));
        vv += q.v.back() * q.v.back();
      }
      q.tau = r.tau == T{} ? U{} : U(2) / vv;
      out.reflectors.push_back(std::move(q));
    }
    return out;
  }
};

template <Scalar T>
struct QrFactors {
  Matrix<T> q;  // m x n, orthonormal columns
  Matrix<T> r;  // n x n, upper triangular with non-negative diagonal
};

/// Reduced Householder QR of a tall matrix (rows >= cols).
template <Scalar T>
QrFactors<T> householder_qr(const Matrix<T>& a);

template <Scalar T>
struct Bidiagonalization {
  Matrix<T> b;                 // n x n upper bidiagonal
  HouseholderSeq<T> right;     // n - 2 reflectors (none for n <= 2)
  std::optional<HouseholderSeq<T>> left;  // kept only on request
};

/// Golub-Kahan Householder bidiagonalization, A = Q_L B P^T with
/// P = right[0] * right[1] * ... Left reflectors are discarded unless
/// keep_left is set.
template <Scalar T>
Bidiagonalization<T> bidiagonalize(const Matrix<T>& a, bool keep_left = false);

/// Returns H_0 H_1 ... H_{k-1} X, or its transpose applied to X.
template <Scalar T>
Matrix<T> apply_householder_seq(const HouseholderSeq<T>& h, Matrix<T> x, bool transpose = false);

/// Explicit m x n matrix with the first n columns of H_0 ... H_{k-1}.
template <Scalar T>
Matrix<T> form_q(const HouseholderSeq<T>& h, std::size_t cols);

enum class NormMethod { jacobi, power_iteration, zero };

struct SpectralNorm {
  double value = 0.0;
  NormMethod method = NormMethod::zero;
  int iterations = 0;
};

/// Largest singular value. Exact one-sided Jacobi for small matrices,
/// otherwise power iteration on A^T A (relative tolerance 1e-6, at most 500
/// iterations).
SpectralNorm spectral_norm(const Matrix<double>& a);

/// Size threshold (max(rows, cols)) up to which spectral_norm uses Jacobi.
inline constexpr std::size_t kSpectralNormJacobiLimit = 128;

}  // namespace mpjacobi
