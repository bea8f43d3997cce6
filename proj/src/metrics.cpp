// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpjacobi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mpjacobi/error.hpp"
#include "mpjacobi/jacobi.hpp"
#include "mpjacobi/linalg.hpp"

namespace mpjacobi {

template <Scalar T>
double off_quantity(const Matrix<T>& g) {
  if (g.rows() != g.cols()) throw Error(ErrorCode::dimension_mismatch, "off_quantity: matrix is not square");
  using W = wider_t<T>;
  W sum{};
  for (std::size_t j = 0; j < g.cols(); ++j) {
    for (std::size_t i = 0; i < g.rows(); ++i) {
      if (i == j) continue;
      const W x(g(i, j));
      sum += x * x;
    }
  }
  return std::sqrt(to_double(sum));
}

template <Scalar T>
Matrix<DoubleDouble> gram_extended(const Matrix<T>& a) {
  if constexpr (std::is_same_v<T, double>) {
    return matmul_extended<DoubleDouble, double>(transpose(a), a);
  } else {
    const auto x = convert<DoubleDouble>(a);
    return matmul(transpose(x), x);
  }
}

ReferenceSvd reference_svd_full(const Matrix<DoubleDouble>& a) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m < n) throw Error(ErrorCode::invalid_argument, "reference_svd: requires rows >= cols");

  Matrix<DoubleDouble> work = a;
  const auto a64 = convert<double>(a);
  const auto norms = column_norms(a64);
  if (n > 1 && std::none_of(norms.begin(), norms.end(), [](double x) { return x == 0.0; })) {
    JacobiOptions pre;
    pre.max_sweeps = 30;
    const auto v0 = one_sided_jacobi(a64, pre).v;
    const auto q = householder_qr(convert<DoubleDouble>(*v0)).q;
    work = matmul(a, q);
  }

  JacobiOptions opts;
  opts.accumulate_v = false;
  opts.max_sweeps = 60;
  auto r = one_sided_jacobi(std::move(work), opts);
  if (!r.converged) {
    throw Error(ErrorCode::non_convergence, "reference_svd: no convergence in " +
                                                std::to_string(opts.max_sweeps) + " sweeps");
  }
  return {std::move(r.sigma), r.sweeps, r.converged};
}

std::vector<DoubleDouble> reference_svd(const Matrix<DoubleDouble>& a) { return reference_svd_full(a).sigma; }
std::vector<DoubleDouble> reference_svd(const Matrix<double>& a) { return reference_svd(convert<DoubleDouble>(a)); }
std::vector<DoubleDouble> reference_svd(const Matrix<float>& a) { return reference_svd(convert<DoubleDouble>(a)); }

double condition_from_sigma(const std::vector<DoubleDouble>& sigma) {
  if (sigma.empty()) throw Error(ErrorCode::rank_deficient, "condition number of an empty spectrum");
  const auto [lo, hi] = std::minmax_element(sigma.begin(), sigma.end());
  if (!(*lo > DoubleDouble(10.0) * *hi * DoubleDouble(unit_roundoff(Format::double_double)))) {
    throw Error(ErrorCode::rank_deficient, "matrix is numerically rank deficient");
  }
  return to_double(*hi / *lo);
}

template <Scalar T>
double kappa2(const Matrix<T>& a) {
  return condition_from_sigma(reference_svd(convert<DoubleDouble>(a)));
}

namespace {

template <Scalar T>
void normalize_columns(Matrix<T>& a) {
  const auto norms = column_norms(a);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (norms[j] == T{}) throw Error(ErrorCode::zero_column, "column " + std::to_string(j) + " is zero");
    const T inv = T(1) / norms[j];
    for (auto& x : a.col(j)) x = x * inv;
  }
}

/// Solves R^T y = b then R x = y in place.
void normal_solve(const Matrix<double>& r, std::vector<double>& x) {
  const std::size_t n = r.cols();
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= r(k, i) * x[k];
    x[i] = s / r(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= r(i, k) * x[k];
    x[i] = s / r(i, i);
  }
}

double normalize(std::vector<double>& x) {
  const double nrm = norm2<double>(x);
  for (auto& v : x) v /= nrm;
  return nrm;
}

}  // namespace

template <Scalar T>
double kappa2_scaled(const Matrix<T>& a) {
  auto x = convert<DoubleDouble>(a);
  normalize_columns(x);
  return condition_from_sigma(reference_svd(x));
}

template <Scalar T>
double estimate_kappa2(const Matrix<T>& a_in, bool scale_columns) {
  auto a = convert<double>(a_in);
  if (scale_columns) normalize_columns(a);
  const std::size_t n = a.cols();
  const double smax = spectral_norm(a).value;
  if (smax == 0.0) return std::numeric_limits<double>::infinity();

  const auto r = householder_qr(a).r;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::abs(r(i, i)) > smax * 0x1p-53 * static_cast<double>(n))) {
      return std::numeric_limits<double>::infinity();
    }
  }
  // Inverse iteration on (R^T R)^{-1}, whose largest eigenvalue is 1 / sigma_min^2.
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(static_cast<double>(i) + 1.0);
  normalize(x);
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    normal_solve(r, x);
    const double next = normalize(x);
    if (!std::isfinite(next)) return std::numeric_limits<double>::infinity();
    const bool done = it > 0 && std::abs(next - lambda) <= 1e-6 * next;
    lambda = next;
    if (done) break;
  }
  return smax * std::sqrt(lambda);
}

std::string_view to_string(TruthSource s) noexcept {
  switch (s) {
    case TruthSource::closed_form:
      return "closed-form";
    case TruthSource::construction:
      return "construction";
    case TruthSource::reference:
      return "reference";
  }
  return "?";
}

ErrorReport forward_errors(const std::vector<double>& computed, const std::vector<DoubleDouble>& truth,
                           TruthSource source) {
  if (computed.size() != truth.size()) {
    throw Error(ErrorCode::dimension_mismatch, "forward_errors: " + std::to_string(computed.size()) +
                                                   " computed vs " + std::to_string(truth.size()) + " true values");
  }
  ErrorReport rep;
  rep.truth = source;
  rep.per_k.reserve(truth.size());
  for (std::size_t k = 0; k < truth.size(); ++k) {
    if (!(truth[k] > DoubleDouble(0.0))) {
      throw Error(ErrorCode::invalid_argument, "forward_errors: true value " + std::to_string(k) + " is not positive");
    }
    const double e = to_double(abs((DoubleDouble(computed[k]) - truth[k]) / truth[k]));
    rep.per_k.push_back(e);
    // NaN must dominate the maximum.
    if (!std::isnan(rep.max_forward_error) && !(e <= rep.max_forward_error)) rep.max_forward_error = e;
  }
  return rep;
}

double forward_error_bound(std::size_t m, std::size_t n, double u, double kappa2d_preconditioned) {
  const double nd = static_cast<double>(n);
  return nd * u + std::sqrt(static_cast<double>(m) * nd) * u * kappa2d_preconditioned;
}

void attach_bound(ErrorReport& report, std::size_t m, std::size_t n, double u, double kappa2d_preconditioned) {
  report.bound_value = forward_error_bound(m, n, u, kappa2d_preconditioned);
  report.bound_satisfied = report.max_forward_error <= *report.bound_value;
}

#define MPJACOBI_INSTANTIATE_METRICS(T)                                  \
  template double off_quantity<T>(const Matrix<T>&);                     \
  template Matrix<DoubleDouble> gram_extended<T>(const Matrix<T>&);      \
  template double kappa2<T>(const Matrix<T>&);                           \
  template double kappa2_scaled<T>(const Matrix<T>&);

MPJACOBI_INSTANTIATE_METRICS(float)
MPJACOBI_INSTANTIATE_METRICS(double)
MPJACOBI_INSTANTIATE_METRICS(DoubleDouble)

#undef MPJACOBI_INSTANTIATE_METRICS

template double estimate_kappa2<float>(const Matrix<float>&, bool);
template double estimate_kappa2<double>(const Matrix<double>&, bool);

}  // namespace mpjacobi
