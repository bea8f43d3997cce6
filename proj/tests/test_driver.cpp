// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "mpjacobi/driver.hpp"
#include "mpjacobi/gallery.hpp"
#include "mpjacobi/linalg.hpp"
#include "mpjacobi/metrics.hpp"
#include "mpjacobi/precond.hpp"

namespace mpjacobi {
namespace {

constexpr double kU = 0x1p-53;

double max_error(const std::vector<double>& got, const std::vector<DoubleDouble>& truth) {
  return forward_errors(got, truth).max_forward_error;
}

std::vector<double> sigma_of(const Mp3Result<double, DoubleDouble>& r) {
  return {r.svd.sigma.begin(), r.svd.sigma.end()};
}

Mp3Options with_method(PrecondMethod m) {
  Mp3Options o;
  o.method = m;
  return o;
}

class Mp3Methods : public ::testing::TestWithParam<PrecondMethod> {};

TEST_P(Mp3Methods, OrthogonalInput) {
  // All singular values are equal, so any orthogonal V is valid; check the
  // factorization instead of a particular basis.
  const auto q = randsvd(10, 10, 1.0, 3, 51).a;
  const auto r = mp3_svd<float, double, DoubleDouble>(q, with_method(GetParam()));
  for (double s : r.svd.sigma) EXPECT_NEAR(s, 1.0, 10 * kU);
  EXPECT_LE(orthogonality_residual(*r.svd.v), 10 * kU);
  const auto qv = matmul(q, *r.svd.v);
  for (std::size_t i = 0; i < qv.data().size(); ++i) EXPECT_NEAR(qv.data()[i], r.svd.u.data()[i], 10 * kU);
}

TEST_P(Mp3Methods, OrthogonalInputSingleWorking) {
  const auto q = convert<float>(randsvd(10, 10, 1.0, 3, 52).a);
  const auto r = mp3_svd<float, float, double>(q, with_method(GetParam()));
  for (float s : r.svd.sigma) EXPECT_NEAR(s, 1.0f, 10 * 0x1p-24);
}

TEST_P(Mp3Methods, LauchliGramClosedForm) {
  const auto g = lauchli_gram(100, 1e-3);
  const auto r = mp3_svd<float, double, DoubleDouble>(g.a, with_method(GetParam()));
  EXPECT_TRUE(r.diag.converged);
  EXPECT_LE(max_error(sigma_of(r), *g.sigma_true), 1e-12);
}

TEST_P(Mp3Methods, HighConditionWithinBoundAndAheadOfPlain) {
  const auto g = randsvd(100, 80, 1e12, 3, 53);
  Mp3Options opts = with_method(GetParam());
  opts.keep_intermediates = true;
  const auto r = mp3_svd<float, double, DoubleDouble>(g.a, opts);
  const auto truth = reference_svd(g.a);
  const double err = max_error(sigma_of(r), truth);
  const double kd = kappa2_scaled(r.intermediates->a_tilde_high);
  EXPECT_LE(err, forward_error_bound(100, 80, kU, kd));
  const auto plain = plain_jacobi_svd<double>(g.a);
  EXPECT_GE(max_error(sigma_of(plain), truth), 1e3 * err);
}

TEST_P(Mp3Methods, DiagnosticsAreConsistent) {
  const auto g = randsvd(60, 40, 1e8, 3, 54);
  const auto r = mp3_svd<float, double, DoubleDouble>(g.a, with_method(GetParam()));
  const auto& d = r.diag;
  EXPECT_EQ(d.level, DiagnosticsLevel::estimated);
  EXPECT_LE(d.orth_residual, 40 * kU);
  EXPECT_LT(d.off_after, 1e-4 * d.off_before);
  ASSERT_LT(d.obliq_after, 1.0);
  EXPECT_LT(d.kappa2d_after, 1e-4 * d.kappa2d_before);
  EXPECT_GT(d.kappa2d_before, 1e4);
  EXPECT_LE(d.composition_residual, 1e-14);
  EXPECT_TRUE(d.converged);
  EXPECT_GE(d.jacobi_sweeps, 1);
  EXPECT_TRUE(d.assumptions.a1 && d.assumptions.a2 && d.assumptions.a3);
  EXPECT_FALSE(r.intermediates.has_value());
}

TEST_P(Mp3Methods, TallInputTakesQrPath) {
  const auto g = randsvd(300, 100, 1e8, 3, 55);
  Mp3Options opts = with_method(GetParam());
  opts.keep_intermediates = true;
  const auto r = mp3_svd<float, double, DoubleDouble>(g.a, opts);
  EXPECT_TRUE(r.diag.used_qr);
  ASSERT_TRUE(r.diag.off_qr.has_value());
  ASSERT_TRUE(r.intermediates->r_hat.has_value());
  EXPECT_EQ(r.intermediates->r_hat->rows(), 100u);
  EXPECT_LE(max_error(sigma_of(r), *g.sigma_true), 1e-9);
}

TEST_P(Mp3Methods, QrModesOverrideRatio) {
  const auto g = randsvd(300, 100, 1e4, 3, 56);
  Mp3Options never = with_method(GetParam());
  never.qr = QrMode::never;
  EXPECT_FALSE((mp3_svd<float, double, DoubleDouble>(g.a, never).diag.used_qr));
  const auto sq = randsvd(40, 40, 1e4, 3, 57);
  Mp3Options always = with_method(GetParam());
  always.qr = QrMode::always;
  EXPECT_TRUE((mp3_svd<float, double, DoubleDouble>(sq.a, always).diag.used_qr));
}

TEST_P(Mp3Methods, QrBeforePreconditioning) {
  // A working-precision QR of A itself is only column-wise backward stable,
  // so accuracy falls back to the scaled condition of A.
  const auto g = randsvd(200, 60, 1e10, 3, 58);
  Mp3Options opts = with_method(GetParam());
  opts.qr_before_preconditioning = true;
  const auto r = mp3_svd<float, double, DoubleDouble>(g.a, opts);
  EXPECT_EQ(r.svd.u.rows(), 200u);
  EXPECT_LE(max_error(sigma_of(r), reference_svd(g.a)), forward_error_bound(200, 60, kU, kappa2_scaled(g.a)));
}

TEST_P(Mp3Methods, ReferenceDiagnostics) {
  const auto g = randsvd(30, 20, 1e6, 3, 59);
  Mp3Options opts = with_method(GetParam());
  opts.diagnostics = DiagnosticsLevel::reference;
  const auto r = mp3_svd<float, double, DoubleDouble>(g.a, opts);
  EXPECT_EQ(r.diag.level, DiagnosticsLevel::reference);
  EXPECT_NEAR(r.diag.assumptions.kappa2_estimate / kappa2(g.a), 1.0, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Methods, Mp3Methods,
                         ::testing::Values(PrecondMethod::orthogonalized_low_svd,
                                           PrecondMethod::low_bidiagonalization),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Mp3, RejectsBadInput) {
  Matrix<double> a = Matrix<double>::identity(3);
  a(1, 1) = NAN;
  EXPECT_THROW((mp3_svd<float, double, DoubleDouble>(a)), Error);
  Matrix<double> z = Matrix<double>::identity(3);
  z(2, 2) = 0.0;
  try {
    mp3_svd<float, double, DoubleDouble>(z);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::zero_column);
  }
  EXPECT_THROW((mp3_svd<float, double, DoubleDouble>(Matrix<double>(2, 3))), Error);
}

TEST(Mp3, SingleColumn) {
  Matrix<double> a(3, 1, {3.0, 0.0, 4.0});
  const auto r = mp3_svd<float, double, DoubleDouble>(a);
  EXPECT_DOUBLE_EQ(r.svd.sigma[0], 5.0);
}

TEST(PlainJacobi, Identity) {
  const auto r = plain_jacobi_svd<double>(Matrix<double>::identity(4));
  for (double s : r.svd.sigma) EXPECT_EQ(s, 1.0);
}

TEST(PlainJacobi, DiagonalNeedsNoSweeps) {
  Matrix<double> a(2, 2, {1.0, 0.0, 0.0, 1e-8});
  const auto r = plain_jacobi_svd<double>(a);
  EXPECT_EQ(r.svd.sigma, (std::vector<double>{1.0, 1e-8}));
  EXPECT_EQ(r.diag.jacobi_sweeps, 0);
  EXPECT_TRUE(std::isnan(r.diag.off_after));
}

TEST(PlainJacobi, QrFirstVariant) {
  const auto g = randsvd(120, 40, 1e4, 3, 60);
  const auto r = plain_jacobi_svd<double>(g.a, {}, QrMode::automatic);
  EXPECT_TRUE(r.diag.used_qr);
  EXPECT_LE(max_error(sigma_of(r), *g.sigma_true), 1e-10);
}

TEST(QrTrigger, RowColumnRatio) {
  EXPECT_TRUE(qr_triggered(11, 6));
  EXPECT_FALSE(qr_triggered(10, 6));
  EXPECT_TRUE(qr_triggered(300, 100));
  EXPECT_FALSE(qr_triggered(200, 150));
  EXPECT_TRUE(qr_triggered(10, 9, 1.1));
}

TEST(Names, ConfigAndAlgorithmRoundTrip) {
  EXPECT_EQ(parse_config("SDQ").name, "sdq");
  EXPECT_EQ(parse_config("ssd").working, Format::binary32);
  EXPECT_THROW(parse_config("qqq"), Error);
  for (auto a : {Algorithm::mp3_orth, Algorithm::mp3_bidiag, Algorithm::plain, Algorithm::plain_qr_first,
                 Algorithm::mp3_qr_before}) {
    EXPECT_EQ(parse_algorithm(to_string(a)), a);
  }
  EXPECT_EQ(parse_algorithm("orth"), Algorithm::mp3_orth);
  EXPECT_EQ(parse_algorithm("bidiag"), Algorithm::mp3_bidiag);
  EXPECT_EQ(parse_algorithm("plain"), Algorithm::plain);
  EXPECT_THROW(parse_algorithm("svd"), Error);
}

TEST(RunSvd, DispatchesConfigs) {
  const auto g = randsvd(40, 30, 1e3, 3, 61);
  SvdRequest req;
  const auto sdq = run_svd(g.a, req);
  EXPECT_EQ(sdq.working_unit_roundoff, kU);
  EXPECT_LE(max_error(sdq.sigma, *g.sigma_true), 1e-12);
  req.config = ssd_config();
  const auto ssd = run_svd(g.a, req);
  EXPECT_EQ(ssd.working_unit_roundoff, 0x1p-24);
  EXPECT_LE(max_error(ssd.sigma, *g.sigma_true), 1e-4);
  EXPECT_EQ(ssd.v.rows(), 30u);
}

TEST(RunSvd, Deterministic) {
  const auto g = randsvd(50, 30, 1e6, 5, 62);
  SvdRequest req;
  req.algorithm = Algorithm::mp3_bidiag;
  const auto a = run_svd(g.a, req), b = run_svd(g.a, req);
  EXPECT_EQ(a.sigma, b.sigma);
  EXPECT_EQ(a.u, b.u);
  EXPECT_EQ(a.v, b.v);
}

}  // namespace
}  // namespace mpjacobi
