// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpjacobi/driver.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "mpjacobi/error.hpp"
#include "mpjacobi/linalg.hpp"
#include "mpjacobi/metrics.hpp"

namespace mpjacobi {

PrecisionConfig sdq_config() { return {Format::binary32, Format::binary64, Format::double_double, "sdq"}; }
PrecisionConfig ssd_config() { return {Format::binary32, Format::binary32, Format::binary64, "ssd"}; }

PrecisionConfig parse_config(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "sdq") return sdq_config();
  if (lower == "ssd") return ssd_config();
  throw Error(ErrorCode::invalid_argument, "unknown precision configuration '" + std::string(name) + "'");
}

bool qr_triggered(std::size_t m, std::size_t n, std::optional<double> ratio) noexcept {
  if (ratio) return static_cast<double>(m) >= *ratio * static_cast<double>(n);
  return 6 * m >= 11 * n;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <Scalar T>
void validate(const Matrix<T>& a, const char* who) {
  if (a.rows() < a.cols()) throw Error(ErrorCode::invalid_argument, std::string(who) + ": requires rows >= cols");
  for (const auto& x : a.data()) {
    if (!std::isfinite(to_double(x))) throw Error(ErrorCode::invalid_argument, std::string(who) + ": non-finite entry");
  }
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const auto c = a.col(j);
    if (std::all_of(c.begin(), c.end(), [](const T& x) { return x == T{}; })) {
      throw Error(ErrorCode::zero_column, std::string(who) + ": column " + std::to_string(j) + " is zero");
    }
  }
}

template <Scalar T>
double relative_off(const Matrix<T>& x, double gram_norm) {
  return off_quantity(gram_extended(x)) / gram_norm;
}

/// ||U diag(sigma) V^T - X||_F / ||X||_F one precision above T.
template <Scalar T>
double composition_residual(const Matrix<T>& x, const SvdResult<T>& j) {
  using W = wider_t<T>;
  auto us = convert<W>(j.u);
  for (std::size_t c = 0; c < us.cols(); ++c) {
    const W s(j.sigma[c]);
    for (auto& e : us.col(c)) e = e * s;
  }
  const auto rec = matmul(us, transpose(convert<W>(*j.v)));
  W num{}, den{};
  for (std::size_t c = 0; c < x.cols(); ++c) {
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const W xe(x(r, c));
      const W d = rec(r, c) - xe;
      num += d * d;
      den += xe * xe;
    }
  }
  return std::sqrt(to_double(num)) / std::sqrt(to_double(den));
}

template <Scalar T>
double safe_kappa2_scaled(const Matrix<T>& a, bool scaled = true) {
  try {
    return scaled ? kappa2_scaled(a) : kappa2(a);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::rank_deficient) return std::numeric_limits<double>::infinity();
    throw;
  }
}

template <Scalar Work, Scalar High>
AssumptionFlags evaluate_assumptions(std::size_t m, std::size_t n, double kappa, double kappa_d_tilde) {
  const double u = unit_roundoff_of<Work>();
  const double nd = static_cast<double>(n), md = static_cast<double>(m);
  const double p1u = nd * u;
  const double gamma_h = gamma(nd, unit_roundoff_of<High>());
  AssumptionFlags f;
  f.kappa2_estimate = kappa;
  f.kappa2d_tilde_estimate = kappa_d_tilde;
  f.a1 = 6.0 * nd * u / (1.0 - p1u) * kappa < 1.0;
  f.a2 = gamma_h < (1.0 - p1u) * u / (4.0 * (1.0 + p1u) * kappa);
  f.a3 = 4.0 * std::sqrt(md) * u < 1.0 && 16.0 * md * std::sqrt(nd) * u * kappa_d_tilde < 1.0;
  return f;
}

}  // namespace

template <Scalar Low, Scalar Work, Scalar High>
Mp3Result<Work, High> mp3_svd(const Matrix<Work>& a, const Mp3Options& opts) {
  validate(a, "mp3_svd");
  const std::size_t m = a.rows(), n = a.cols();

  if (opts.qr_before_preconditioning && qr_triggered(m, n, opts.qr_ratio)) {
    auto f = householder_qr(a);
    Mp3Options inner = opts;
    inner.qr_before_preconditioning = false;
    inner.qr = QrMode::never;
    auto res = mp3_svd<Low, Work, High>(f.r, inner);
    res.svd.u = matmul(f.q, res.svd.u);
    res.diag.used_qr = true;
    return res;
  }

  const auto pre = opts.method == PrecondMethod::orthogonalized_low_svd
                       ? precond_orth_method<Low, Work>(a, opts.low_jacobi, opts.assembly)
                       : precond_bidiag_method<Low, Work>(a, {}, opts.assembly);
  auto a_high = matmul_extended<High, Work>(a, pre.v_tilde);
  auto a_tilde = convert<Work>(a_high);

  const bool use_qr =
      opts.qr == QrMode::always || (opts.qr == QrMode::automatic && qr_triggered(m, n, opts.qr_ratio));
  std::optional<QrFactors<Work>> qr;
  if (use_qr) qr = householder_qr(a_tilde);
  const Matrix<Work>& x = use_qr ? qr->r : a_tilde;

  JacobiOptions jopts = opts.jacobi;
  jopts.accumulate_v = true;
  jopts.sort_descending = true;
  auto j = one_sided_jacobi(x, jopts);

  Mp3Result<Work, High> out;
  Mp3Diagnostics& d = out.diag;
  d.used_qr = use_qr;
  d.jacobi_sweeps = j.sweeps;
  d.jacobi_rotations = j.rotations;
  d.converged = j.converged;
  d.preconditioner_converged = pre.inner_converged;
  d.preconditioner_sweeps = pre.inner_sweeps;
  d.orth_residual = pre.orth_residual;
  d.level = opts.diagnostics;
  d.off_before = d.off_after = d.obliq_after = d.kappa2d_before = d.kappa2d_after = kNaN;
  d.composition_residual = kNaN;

  if (opts.diagnostics != DiagnosticsLevel::none) {
    const auto g = gram_extended(a);
    const double gram_norm = frobenius_norm(g);
    d.off_before = off_quantity(g) / gram_norm;
    d.off_after = relative_off(a_high, gram_norm);
    if (use_qr) d.off_qr = relative_off(qr->r, gram_norm);
    d.obliq_after = obliquity(a_tilde);
    d.composition_residual = composition_residual(x, j);
    double kappa = 0.0;
    if (opts.diagnostics == DiagnosticsLevel::reference) {
      kappa = safe_kappa2_scaled(a, false);
      d.kappa2d_before = safe_kappa2_scaled(a);
      d.kappa2d_after = safe_kappa2_scaled(a_high);
    } else {
      kappa = estimate_kappa2(a);
      d.kappa2d_before = estimate_kappa2(a, true);
      d.kappa2d_after = estimate_kappa2(a_tilde, true);
    }
    d.assumptions = evaluate_assumptions<Work, High>(m, n, kappa, d.kappa2d_after);
  }

  out.svd.sigma = std::move(j.sigma);
  out.svd.u = use_qr ? matmul(qr->q, j.u) : std::move(j.u);
  out.svd.v = matmul(pre.v_tilde, *j.v);
  out.svd.sweeps = j.sweeps;
  out.svd.rotations = j.rotations;
  out.svd.converged = j.converged;

  if (opts.keep_intermediates) {
    std::optional<Matrix<Work>> r_hat;
    if (use_qr) r_hat = std::move(qr->r);
    out.intermediates = Mp3Intermediates<Work, High>{pre.v_tilde, std::move(a_high), std::move(a_tilde),
                                                     std::move(r_hat)};
  }
  return out;
}

template <Scalar Work>
Mp3Result<Work, wider_t<Work>> plain_jacobi_svd(const Matrix<Work>& a, const JacobiOptions& opts, QrMode qr_mode,
                                                std::optional<double> qr_ratio, DiagnosticsLevel level) {
  validate(a, "plain_jacobi_svd");
  const std::size_t m = a.rows(), n = a.cols();
  const bool use_qr = qr_mode == QrMode::always || (qr_mode == QrMode::automatic && qr_triggered(m, n, qr_ratio));
  std::optional<QrFactors<Work>> qr;
  if (use_qr) qr = householder_qr(a);
  const Matrix<Work>& x = use_qr ? qr->r : a;

  JacobiOptions jopts = opts;
  jopts.accumulate_v = true;
  jopts.sort_descending = true;
  auto j = one_sided_jacobi(x, jopts);

  Mp3Result<Work, wider_t<Work>> out;
  Mp3Diagnostics& d = out.diag;
  d.used_qr = use_qr;
  d.jacobi_sweeps = j.sweeps;
  d.jacobi_rotations = j.rotations;
  d.converged = j.converged;
  d.level = level;
  d.off_before = d.off_after = d.obliq_after = d.kappa2d_before = d.kappa2d_after = kNaN;
  d.composition_residual = kNaN;
  d.orth_residual = kNaN;
  if (level != DiagnosticsLevel::none) {
    const auto g = gram_extended(a);
    d.off_before = off_quantity(g) / frobenius_norm(g);
    d.composition_residual = composition_residual(x, j);
    d.kappa2d_before = level == DiagnosticsLevel::reference ? safe_kappa2_scaled(a) : estimate_kappa2(a, true);
  }

  out.svd.sigma = std::move(j.sigma);
  out.svd.u = use_qr ? matmul(qr->q, j.u) : std::move(j.u);
  out.svd.v = std::move(j.v);
  out.svd.sweeps = j.sweeps;
  out.svd.rotations = j.rotations;
  out.svd.converged = j.converged;
  return out;
}

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::mp3_orth:
      return "mp3-orth";
    case Algorithm::mp3_bidiag:
      return "mp3-bidiag";
    case Algorithm::plain:
      return "plain-jacobi";
    case Algorithm::plain_qr_first:
      return "plain-jacobi-qr-first";
    case Algorithm::mp3_qr_before:
      return "mp3-qr-before";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "mp3-orth" || name == "orth") return Algorithm::mp3_orth;
  if (name == "mp3-bidiag" || name == "bidiag") return Algorithm::mp3_bidiag;
  if (name == "plain-jacobi" || name == "plain") return Algorithm::plain;
  if (name == "plain-jacobi-qr-first") return Algorithm::plain_qr_first;
  if (name == "mp3-qr-before") return Algorithm::mp3_qr_before;
  throw Error(ErrorCode::invalid_argument, "unknown method '" + std::string(name) + "'");
}

namespace {

template <Scalar Low, Scalar Work, Scalar High>
SvdOutput run_typed(const Matrix<Work>& a, const SvdRequest& req) {
  Mp3Result<Work, High> r;
  switch (req.algorithm) {
    case Algorithm::plain:
    case Algorithm::plain_qr_first: {
      const auto mode = req.algorithm == Algorithm::plain ? QrMode::never : QrMode::automatic;
      auto p = plain_jacobi_svd<Work>(a, req.jacobi, mode, req.qr_ratio, req.diagnostics);
      r.svd = std::move(p.svd);
      r.diag = p.diag;
      break;
    }
    default: {
      Mp3Options o;
      o.method = req.algorithm == Algorithm::mp3_bidiag ? PrecondMethod::low_bidiagonalization
                                                        : PrecondMethod::orthogonalized_low_svd;
      o.jacobi = req.jacobi;
      o.qr_ratio = req.qr_ratio;
      o.qr_before_preconditioning = req.algorithm == Algorithm::mp3_qr_before;
      o.diagnostics = req.diagnostics;
      r = mp3_svd<Low, Work, High>(a, o);
    }
  }
  SvdOutput out;
  out.sigma.reserve(r.svd.sigma.size());
  for (const auto& s : r.svd.sigma) out.sigma.push_back(to_double(s));
  out.u = convert<double>(r.svd.u);
  out.v = convert<double>(*r.svd.v);
  out.diag = r.diag;
  out.working_unit_roundoff = unit_roundoff_of<Work>();
  return out;
}

}  // namespace

SvdOutput run_svd(const Matrix<double>& a, const SvdRequest& req) {
  const auto& c = req.config;
  if (c.low == Format::binary32 && c.working == Format::binary64 && c.high == Format::double_double) {
    return run_typed<float, double, DoubleDouble>(a, req);
  }
  if (c.low == Format::binary32 && c.working == Format::binary32 && c.high == Format::binary64) {
    return run_typed<float, float, double>(convert<float>(a), req);
  }
  throw Error(ErrorCode::invalid_argument, "unsupported precision configuration '" + c.name + "'");
}

template Mp3Result<double, DoubleDouble> mp3_svd<float, double, DoubleDouble>(const Matrix<double>&,
                                                                              const Mp3Options&);
template Mp3Result<float, double> mp3_svd<float, float, double>(const Matrix<float>&, const Mp3Options&);
template Mp3Result<double, DoubleDouble> plain_jacobi_svd<double>(const Matrix<double>&, const JacobiOptions&,
                                                                  QrMode, std::optional<double>, DiagnosticsLevel);
template Mp3Result<float, double> plain_jacobi_svd<float>(const Matrix<float>&, const JacobiOptions&, QrMode,
                                                          std::optional<double>, DiagnosticsLevel);

}  // namespace mpjacobi
