// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

// Deterministic test matrices with ground-truth singular values.
//
// randsvd synthesizes A = U diag(sigma) V^T with Haar orthogonal factors
// entirely in double-double and rounds to binary64 once. The prescribed
// sigma are the exact singular values of the double-double matrix
// (a_extended); the stored binary64 matrix differs from it by one rounding
// per entry, which moves its singular values by up to about u * kappa_D
// relative. Accuracy experiments therefore measure against
// reference_svd(a) unless the caller explicitly asks for the prescribed
// values.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mpjacobi/double_double.hpp"
#include "mpjacobi/matrix.hpp"

namespace mpjacobi {

/// Standard normal stream: std::mt19937_64 (bit-identical on every
/// conforming platform) feeding the Box-Muller transform. Uniforms are
/// built from the top 53 bits of each draw.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on (0, 1].
  double uniform() noexcept {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1p-53;
  }

  double next() noexcept;

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Mixes a master seed with a stream index (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

enum class GalleryKind { randsvd, kahan, lauchli_gram, identity, file };

std::string_view to_string(GalleryKind k) noexcept;

using GalleryParams = std::map<std::string, double, std::less<>>;

struct GalleryMatrix {
  Matrix<double> a;
  /// Descending, strictly positive; absent when no closed form exists.
  std::optional<std::vector<DoubleDouble>> sigma_true;
  /// Unrounded synthesis, when the generator works in extended precision.
  std::optional<Matrix<DoubleDouble>> a_extended;
  GalleryKind kind = GalleryKind::file;
  GalleryParams params;
  std::uint64_t seed = 0;
};

/// Prescribed singular values for the five randsvd modes.
/// 1: one large (sigma_1 = 1, rest 1/kappa); 2: one small (sigma_n =
/// 1/kappa, rest 1); 3: geometric kappa^{-(i-1)/(n-1)}; 4: arithmetic
/// 1 - (1 - 1/kappa)(i-1)/(n-1); 5: exp(-r ln kappa), r uniform, sorted.
std::vector<double> randsvd_sigma(std::size_t n, double kappa, int mode, GaussianStream& rng);

/// Mode 5 draws its n uniforms first; then the m x n Gaussian for U, then
/// the n x n Gaussian for V, all column-major.
GalleryMatrix randsvd(std::size_t m, std::size_t n, double kappa, int mode, std::uint64_t seed);

/// Upper triangular Kahan matrix diag(1, s, ..., s^{n-1}) * (I - c * strict
/// upper ones) with s = sin(theta), c = cos(theta), plus the diagonal
/// perturbation pert * 2^-52 * (n, n-1, ..., 1) of the classic gallery
/// generator.
GalleryMatrix kahan(std::size_t n, double theta, double pert = 25.0);

/// Gram matrix of the Lauchli matrix: mu^2 I + ones * ones^T, built from
/// the closed form. The stored diagonal is d = fl(1 + fl(mu^2)), so the
/// exact singular values of the stored matrix are n + (d - 1) and d - 1
/// (n - 1 times), both exactly representable as double-double.
GalleryMatrix lauchli_gram(std::size_t n, double mu);

GalleryMatrix identity_matrix(std::size_t n);

/// Builds a matrix of the named kind (randsvd, kahan, lauchli-gram,
/// identity). Missing optional parameters take the defaults mode = 3,
/// m = n, theta = 1.2, pert = 25, mu = 1e-3.
GalleryMatrix make_gallery(std::string_view kind, const GalleryParams& params, std::uint64_t seed);

/// Parses "kind:key=value,..." e.g. "randsvd:m=200,n=150,kappa=1e8,mode=3",
/// "kahan:n=50,theta=1e-2", "lauchli-gram:n=10,mu=1e-3", "identity:n=5".
GalleryMatrix gallery_from_spec(std::string_view spec, std::uint64_t seed);

}  // namespace mpjacobi
