// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpjacobi/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mpjacobi/linalg.hpp"

namespace mpjacobi {

namespace {

/// The three Gram entries of a column pair, accumulated in one pass.
template <Scalar T>
struct PairGram {
  T pp{}, qq{}, pq{};
};

template <Scalar T>
PairGram<T> pair_gram(std::span<const T> p, std::span<const T> q) {
  PairGram<T> g;
  for (std::size_t i = 0; i < p.size(); ++i) {
    g.pp += p[i] * p[i];
    g.qq += q[i] * q[i];
    g.pq += p[i] * q[i];
  }
  return g;
}

template <Scalar T>
void rotate(std::span<T> p, std::span<T> q, const JacobiRotation<T>& r) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const T x = p[i];
    const T y = q[i];
    p[i] = r.cs * x - r.sn * y;
    q[i] = r.sn * x + r.cs * y;
  }
}

template <Scalar T>
bool finite(T x) {
  using std::isfinite;
  return isfinite(x);
}

}  // namespace

template <Scalar T>
double default_jacobi_tol(std::size_t rows) noexcept {
  return std::sqrt(static_cast<double>(rows)) * unit_roundoff_of<T>();
}

template <Scalar T>
JacobiRotation<T> jacobi_rotation(T gpp, T gqq, T gpq) {
  using std::abs;
  using std::sqrt;
  if (!finite(gpp) || !finite(gqq) || !finite(gpq)) {
    throw Error(ErrorCode::invalid_argument, "jacobi_rotation: non-finite Gram entry");
  }
  const T tau = (gqq - gpp) / (T(2) * gpq);
  const T sign = tau < T{} ? T(-1) : T(1);
  const T atau = abs(tau);
  T t;
  // Past 1/sqrt(u) the square would overflow or lose 1; t ~ 1 / (2 tau).
  if (to_double(atau) > 1.0 / std::sqrt(unit_roundoff_of<T>())) {
    t = sign / (T(2) * atau);
  } else {
    t = sign / (atau + sqrt(T(1) + tau * tau));
  }
  const T cs = T(1) / sqrt(T(1) + t * t);
  return {cs, t * cs};
}

template <Scalar T>
SvdResult<T> one_sided_jacobi(Matrix<T> a, const JacobiOptions& opts) {
  using std::abs;
  using std::sqrt;
  const std::size_t m = a.rows(), n = a.cols();
  if (m < n) throw Error(ErrorCode::invalid_argument, "one_sided_jacobi: requires rows >= cols");
  if (opts.max_sweeps < 1) throw Error(ErrorCode::invalid_argument, "one_sided_jacobi: max_sweeps < 1");
  const double tol_d = opts.tol.value_or(default_jacobi_tol<T>(m));
  if (!(tol_d > 0.0 && tol_d < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "one_sided_jacobi: tol must lie in (0, 1)");
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto c = a.col(j);
    if (std::all_of(c.begin(), c.end(), [](const T& x) { return x == T{}; })) {
      throw Error(ErrorCode::zero_column, "one_sided_jacobi: column " + std::to_string(j) + " is zero");
    }
  }
  const T tol(tol_d);

  SvdResult<T> out;
  if (opts.accumulate_v) out.v = Matrix<T>::identity(n);

  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    std::int64_t applied = 0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const auto g = pair_gram<T>(a.col(p), a.col(q));
        if (g.pp == T{} || g.qq == T{} || g.pq == T{}) continue;
        if (!(abs(g.pq) > tol * (sqrt(g.pp) * sqrt(g.qq)))) continue;
        const auto rot = jacobi_rotation(g.pp, g.qq, g.pq);
        rotate(a.col(p), a.col(q), rot);
        if (out.v) rotate(out.v->col(p), out.v->col(q), rot);
        ++applied;
      }
    }
    out.rotations += applied;
    if (applied == 0) {
      out.converged = true;
      break;
    }
    ++out.sweeps;
  }

  out.sigma = column_norms(a);
  for (std::size_t j = 0; j < n; ++j) {
    if (out.sigma[j] == T{}) continue;
    const T inv = T(1) / out.sigma[j];
    for (auto& x : a.col(j)) x = x * inv;
  }

  if (opts.sort_descending) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return out.sigma[j] < out.sigma[i]; });
    std::vector<T> sigma(n);
    Matrix<T> u(m, n);
    std::optional<Matrix<T>> v;
    if (out.v) v = Matrix<T>(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      sigma[j] = out.sigma[order[j]];
      std::copy_n(a.col(order[j]).begin(), m, u.col(j).begin());
      if (v) std::copy_n(out.v->col(order[j]).begin(), n, v->col(j).begin());
    }
    out.sigma = std::move(sigma);
    out.u = std::move(u);
    out.v = std::move(v);
  } else {
    out.u = std::move(a);
  }
  return out;
}

#define MPJACOBI_INSTANTIATE_JACOBI(T)                                           \
  template double default_jacobi_tol<T>(std::size_t) noexcept;                   \
  template JacobiRotation<T> jacobi_rotation<T>(T, T, T);                        \
  template SvdResult<T> one_sided_jacobi<T>(Matrix<T>, const JacobiOptions&);

MPJACOBI_INSTANTIATE_JACOBI(float)
MPJACOBI_INSTANTIATE_JACOBI(double)
MPJACOBI_INSTANTIATE_JACOBI(DoubleDouble)

#undef MPJACOBI_INSTANTIATE_JACOBI

}  // namespace mpjacobi
