// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpjacobi/precond.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mpjacobi/error.hpp"
#include "mpjacobi/linalg.hpp"

namespace mpjacobi {

std::string_view to_string(PrecondMethod m) noexcept {
  switch (m) {
    case PrecondMethod::orthogonalized_low_svd:
      return "orth";
    case PrecondMethod::low_bidiagonalization:
      return "bidiag";
  }
  return "?";
}

namespace {

template <Scalar T>
void check_shape(const Matrix<T>& a, const char* who) {
  if (a.rows() < a.cols()) throw Error(ErrorCode::invalid_argument, std::string(who) + ": requires rows >= cols");
}

template <Scalar T>
std::vector<double> to_doubles(const std::vector<T>& x) {
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [](const T& v) { return to_double(v); });
  return out;
}

}  // namespace

template <Scalar Low, Scalar Work>
Preconditioner<Work> precond_orth_method(const Matrix<Work>& a, const JacobiOptions& low_opts, Assembly assembly) {
  check_shape(a, "precond_orth_method");
  JacobiOptions opts = low_opts;
  opts.accumulate_v = true;
  auto low = one_sided_jacobi(convert<Low>(a), opts);

  Preconditioner<Work> p;
  if (assembly == Assembly::extended) {
    p.v_tilde = convert<Work>(householder_qr(convert<wider_t<Work>>(*low.v)).q);
  } else {
    p.v_tilde = householder_qr(convert<Work>(*low.v)).q;
  }
  p.method = PrecondMethod::orthogonalized_low_svd;
  p.orth_residual = orthogonality_residual(p.v_tilde);
  p.sigma_low = to_doubles(low.sigma);
  p.inner_converged = low.converged;
  p.inner_sweeps = low.sweeps;
  return p;
}

template <Scalar Low, Scalar Work>
Preconditioner<Work> precond_bidiag_method(const Matrix<Work>& a, const JacobiOptions& work_opts, Assembly assembly) {
  check_shape(a, "precond_bidiag_method");
  if (a.cols() < 2) throw Error(ErrorCode::invalid_argument, "precond_bidiag_method: requires cols >= 2");
  const auto bd = bidiagonalize(convert<Low>(a));

  JacobiOptions opts = work_opts;
  opts.accumulate_v = true;
  auto inner = one_sided_jacobi(convert<Work>(bd.b), opts);

  Preconditioner<Work> p;
  if (assembly == Assembly::extended) {
    using W = wider_t<Work>;
    const auto right = bd.right.template convert_to<W>();
    auto vb = householder_qr(convert<W>(*inner.v)).q;
    p.v_tilde = convert<Work>(apply_householder_seq(right, std::move(vb)));
  } else {
    const auto right = bd.right.template convert_to<Work>();
    p.v_tilde = apply_householder_seq(right, std::move(*inner.v));
  }
  p.method = PrecondMethod::low_bidiagonalization;
  p.orth_residual = orthogonality_residual(p.v_tilde);
  p.sigma_low = to_doubles(inner.sigma);
  p.inner_converged = inner.converged;
  p.inner_sweeps = inner.sweeps;
  return p;
}

template <Scalar T>
double orthogonality_residual(const Matrix<T>& v) {
  using W = wider_t<T>;
  const auto g = matmul_extended<W, T>(transpose(v), v);
  W sum{};
  for (std::size_t j = 0; j < g.cols(); ++j) {
    for (std::size_t i = 0; i < g.rows(); ++i) {
      const W e = i == j ? g(i, j) - W(1) : g(i, j);
      sum += e * e;
    }
  }
  return std::sqrt(to_double(sum));
}

template <Scalar T>
double obliquity(const Matrix<T>& a) {
  Matrix<T> ad = a;
  const auto norms = column_norms(a);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (norms[j] == T{}) {
      throw Error(ErrorCode::zero_column, "obliquity: column " + std::to_string(j) + " is zero");
    }
    const T inv = T(1) / norms[j];
    for (auto& x : ad.col(j)) x = x * inv;
  }
  JacobiOptions opts;
  opts.accumulate_v = false;
  opts.max_sweeps = 60;
  const auto r = one_sided_jacobi(std::move(ad), opts);
  double worst = 0.0;
  for (const auto& s : r.sigma) worst = std::max(worst, std::abs(to_double(s - T(1))));
  return worst;
}

template Preconditioner<double> precond_orth_method<float, double>(const Matrix<double>&, const JacobiOptions&,
                                                                  Assembly);
template Preconditioner<float> precond_orth_method<float, float>(const Matrix<float>&, const JacobiOptions&, Assembly);
template Preconditioner<double> precond_bidiag_method<float, double>(const Matrix<double>&, const JacobiOptions&,
                                                                    Assembly);
template Preconditioner<float> precond_bidiag_method<float, float>(const Matrix<float>&, const JacobiOptions&,
                                                                  Assembly);

template double orthogonality_residual<float>(const Matrix<float>&);
template double orthogonality_residual<double>(const Matrix<double>&);
template double orthogonality_residual<DoubleDouble>(const Matrix<DoubleDouble>&);
template double obliquity<float>(const Matrix<float>&);
template double obliquity<double>(const Matrix<double>&);
template double obliquity<DoubleDouble>(const Matrix<DoubleDouble>&);

}  // namespace mpjacobi
