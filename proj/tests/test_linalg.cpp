// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "mpjacobi/linalg.hpp"
#include "mpjacobi/precond.hpp"

namespace mpjacobi {
namespace {

template <class T>
Matrix<T> gaussian(std::size_t m, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix<T> a(m, n);
  for (auto& x : a.data()) x = static_cast<T>(g(rng));
  return a;
}

double max_abs_diff(const Matrix<double>& a, const Matrix<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

TEST(ColumnNorms, Identity) {
  const auto n = column_norms(Matrix<double>::identity(3));
  EXPECT_EQ(n, (std::vector<double>{1.0, 1.0, 1.0}));
}

TEST(ColumnNorms, PythagoreanPair) {
  Matrix<double> a(2, 1, {3.0, 4.0});
  EXPECT_EQ(column_norms(a)[0], 5.0);
}

TEST(ColumnNorms, TinyEntriesDoNotUnderflow) {
  const std::vector<double> x(1000000, 1e-200);
  const double r = norm2<double>(x);
  EXPECT_NEAR(r / 1e-197, 1.0, 1e-12);
}

TEST(ColumnNorms, HugeEntriesDoNotOverflow) {
  const std::vector<double> x(4, 1e300);
  EXPECT_NEAR(norm2<double>(x) / 2e300, 1.0, 1e-15);
}

TEST(HouseholderQr, UpperTriangularInputGivesIdentityQ) {
  Matrix<double> a(3, 3, {2.0, 0.0, 0.0, 1.0, 3.0, 0.0, -1.0, 0.5, 4.0});
  const auto f = householder_qr(a);
  EXPECT_LE(max_abs_diff(f.q, Matrix<double>::identity(3)), 4e-16);
  EXPECT_LE(max_abs_diff(f.r, a), 4 * 4e-16);
}

TEST(HouseholderQr, OrthonormalColumnsGiveIdentityR) {
  const auto q0 = householder_qr(gaussian<double>(8, 4, 1)).q;
  const auto f = householder_qr(q0);
  EXPECT_LE(max_abs_diff(f.r, Matrix<double>::identity(4)), 1e-14);
}

TEST(HouseholderQr, RandomTallResiduals) {
  const auto a = gaussian<double>(20, 5, 2);
  const auto f = householder_qr(a);
  Matrix<double> diff = matmul(f.q, f.r);
  for (std::size_t i = 0; i < diff.data().size(); ++i) diff.data()[i] -= a.data()[i];
  EXPECT_LE(frobenius_norm(diff) / frobenius_norm(a), 1e-14);
  EXPECT_LE(orthogonality_residual(f.q), 1e-14);
  for (std::size_t j = 0; j < 5; ++j) {
    EXPECT_GE(f.r(j, j), 0.0);
    for (std::size_t i = j + 1; i < 5; ++i) EXPECT_EQ(f.r(i, j), 0.0);
  }
}

TEST(HouseholderQr, ExtendedPrecisionOrthogonality) {
  const auto f = householder_qr(convert<DoubleDouble>(gaussian<double>(30, 20, 3)));
  EXPECT_LE(orthogonality_residual(f.q), 20 * 0x1p-106);
}

TEST(Bidiagonalize, BidiagonalInputIsReproduced) {
  Matrix<float> a(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    a(i, i) = static_cast<float>(i + 2);
    if (i + 1 < 4) a(i, i + 1) = 0.5f;
  }
  const auto bd = bidiagonalize(a);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(bd.b(i, j)), std::abs(a(i, j)), 1e-6f);
  const auto p = form_q(bd.right, 4);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(p(i, j)), i == j ? 1.0f : 0.0f, 1e-6f);
}

TEST(Bidiagonalize, ReconstructsInputWithBothSides) {
  const auto a = gaussian<float>(6, 4, 4);
  const auto bd = bidiagonalize(a, true);
  ASSERT_TRUE(bd.left.has_value());
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 4; ++i)
      if (i != j && i + 1 != j) EXPECT_EQ(bd.b(i, j), 0.0f);
  const auto ql = form_q(*bd.left, 4);
  const auto p = form_q(bd.right, 4);
  const auto back = matmul(matmul(ql, bd.b), transpose(p));
  Matrix<float> diff = back;
  for (std::size_t i = 0; i < diff.data().size(); ++i) diff.data()[i] -= a.data()[i];
  EXPECT_LE(frobenius_norm(diff), 50 * 0x1p-24 * frobenius_norm(a));
}

TEST(Bidiagonalize, TwoColumnsNeedNoRightReflectors) {
  const auto a = gaussian<float>(5, 2, 5);
  const auto bd = bidiagonalize(a);
  EXPECT_EQ(bd.right.size(), 0u);
  const auto r = householder_qr(a).r;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(std::abs(bd.b(i, j)), std::abs(r(i, j)), 1e-5f);
}

TEST(HouseholderSeq, EmptySequenceIsIdentity) {
  HouseholderSeq<double> h;
  h.dim = 3;
  const auto x = gaussian<double>(3, 2, 6);
  EXPECT_EQ(apply_householder_seq(h, x), x);
}

TEST(HouseholderSeq, SingleReflectorIsInvolution) {
  HouseholderSeq<double> h;
  h.dim = 3;
  Reflector<double> r;
  r.v = {1.0, -1.0};
  r.tau = 1.0;  // 2 / (v^T v)
  h.reflectors.push_back(r);
  const auto x = gaussian<double>(3, 3, 7);
  const auto once = apply_householder_seq(h, x);
  EXPECT_GT(max_abs_diff(once, x), 1e-3);
  EXPECT_LE(max_abs_diff(apply_householder_seq(h, once), x), 1e-15);
}

TEST(HouseholderSeq, BidiagonalizationReflectorsAreOrthogonal) {
  const std::size_t n = 12;
  const auto bd = bidiagonalize(gaussian<double>(20, n, 8));
  const auto v = apply_householder_seq(bd.right, Matrix<double>::identity(n));
  EXPECT_LE(orthogonality_residual(v), 10.0 * n * 0x1p-53);
}

TEST(HouseholderSeq, PromotionRecomputesScale) {
  const auto bd = bidiagonalize(gaussian<float>(20, 12, 9));
  const auto promoted = bd.right.convert_to<double>();
  const auto v = apply_householder_seq(promoted, Matrix<double>::identity(12));
  EXPECT_LE(orthogonality_residual(v), 12 * 0x1p-53);
}

TEST(SpectralNorm, Diagonal) {
  Matrix<double> a(2, 2, {3.0, 0.0, 0.0, 1.0});
  EXPECT_DOUBLE_EQ(spectral_norm(a).value, 3.0);
}

TEST(SpectralNorm, ZeroMatrix) {
  const auto r = spectral_norm(Matrix<double>(3, 2));
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.method, NormMethod::zero);
}

TEST(SpectralNorm, RankOneIsProductOfNorms) {
  for (std::size_t n : {5u, 200u}) {
    std::vector<double> u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = 1.0 + static_cast<double>(i % 7);
      v[i] = 0.5 - static_cast<double>(i % 3);
    }
    Matrix<double> a(n, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) a(i, j) = u[i] * v[j];
    const double expected = norm2<double>(u) * norm2<double>(v);
    EXPECT_NEAR(spectral_norm(a).value / expected, 1.0, 1e-6) << n;
  }
}

}  // namespace
}  // namespace mpjacobi
