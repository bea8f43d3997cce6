// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpjacobi/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mpjacobi/jacobi.hpp"

namespace mpjacobi {

namespace {

template <Scalar T>
T hypot2(T a, T b) {
  using std::abs;
  using std::sqrt;
  a = abs(a);
  b = abs(b);
  const T mx = a < b ? b : a;
  const T mn = a < b ? a : b;
  if (mx == T{}) return T{};
  const T r = mn / mx;
  return mx * sqrt(T(1) + r * r);
}

/// LAPACK xLARFG: overwrites x[1..] with the reflector tail (v[0] = 1
/// implied) and returns beta, the value H x places in x[0].
template <Scalar T>
T make_reflector(std::span<T> x, T& tau) {
  const T alpha = x[0];
  const T xnorm = x.size() > 1 ? norm2<T>(std::span<const T>(x.subspan(1))) : T{};
  if (xnorm == T{}) {
    tau = T{};
    return alpha;
  }
  const T h = hypot2(alpha, xnorm);
  const T beta = alpha < T{} ? h : -h;
  tau = (beta - alpha) / beta;
  const T scale = T(1) / (alpha - beta);
  for (std::size_t i = 1; i < x.size(); ++i) x[i] = x[i] * scale;
  return beta;
}

/// Applies H = I - tau v v^T to rows [r0, r0 + v.size()) of column `col`.
template <Scalar T>
void reflect_column(std::span<const T> v, T tau, std::span<T> col, std::size_t r0) {
  if (tau == T{}) return;
  T w{};
  for (std::size_t i = 0; i < v.size(); ++i) w += v[i] * col[r0 + i];
  w = tau * w;
  for (std::size_t i = 0; i < v.size(); ++i) col[r0 + i] -= w * v[i];
}

/// Applies H from the right to rows [r0, rows) and columns
/// [c0, c0 + v.size()) of a.
template <Scalar T>
void reflect_rows(std::span<const T> v, T tau, Matrix<T>& a, std::size_t r0, std::size_t c0) {
  if (tau == T{}) return;
  const std::size_t m = a.rows();
  std::vector<T> w(m - r0);
  for (std::size_t j = 0; j < v.size(); ++j) {
    const auto col = a.col(c0 + j);
    for (std::size_t i = r0; i < m; ++i) w[i - r0] += v[j] * col[i];
  }
  for (std::size_t j = 0; j < v.size(); ++j) {
    auto col = a.col(c0 + j);
    const T f = tau * v[j];
    for (std::size_t i = r0; i < m; ++i) col[i] -= f * w[i - r0];
  }
}

}  // namespace

template <Scalar T>
T dot(std::span<const T> x, std::span<const T> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::dimension_mismatch, "dot: length mismatch");
  T acc{};
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

template <Scalar T>
T norm2(std::span<const T> x) {
  using std::abs;
  using std::sqrt;
  T scale{};
  T ssq(1);
  for (const T& xi : x) {
    if (xi == T{}) continue;
    const T ax = abs(xi);
    if (scale < ax) {
      const T r = scale / ax;
      ssq = T(1) + ssq * r * r;
      scale = ax;
    } else {
      const T r = ax / scale;
      ssq += r * r;
    }
  }
  return scale * sqrt(ssq);
}

template <Scalar T>
std::vector<T> column_norms(const Matrix<T>& a) {
  std::vector<T> out(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) out[j] = norm2<T>(a.col(j));
  return out;
}

template <Scalar T>
Matrix<T> transpose(const Matrix<T>& a) {
  Matrix<T> t(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
  return t;
}

template <Scalar T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::dimension_mismatch, "matmul: inner dimensions differ");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto cj = c.col(j);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T bkj = b(k, j);
      if (bkj == T{}) continue;
      const auto ak = a.col(k);
      for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bkj;
    }
  }
  return c;
}

template <Scalar T>
double frobenius_norm(const Matrix<T>& a) {
  return to_double(norm2<T>(a.data()));
}

template <Scalar T>
QrFactors<T> householder_qr(const Matrix<T>& a) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m < n) throw Error(ErrorCode::invalid_argument, "householder_qr: requires rows >= cols");
  Matrix<T> w = a;
  HouseholderSeq<T> seq;
  seq.dim = m;
  seq.side = ReflectorSide::left;
  for (std::size_t k = 0; k < n; ++k) {
    auto x = w.col(k).subspan(k);
    Reflector<T> r;
    r.offset = k;
    const T beta = make_reflector(x, r.tau);
    r.v.assign(x.begin(), x.end());
    r.v[0] = T(1);
    x[0] = beta;
    for (std::size_t i = 1; i < x.size(); ++i) x[i] = T{};
    for (std::size_t j = k + 1; j < n; ++j) reflect_column<T>(r.v, r.tau, w.col(j), k);
    seq.reflectors.push_back(std::move(r));
  }
  QrFactors<T> out{form_q(seq, n), Matrix<T>(n, n)};
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j; ++i) out.r(i, j) = w(i, j);
  for (std::size_t k = 0; k < n; ++k) {
    if (out.r(k, k) < T{}) {
      for (std::size_t j = k; j < n; ++j) out.r(k, j) = -out.r(k, j);
      for (auto& x : out.q.col(k)) x = -x;
    }
  }
  return out;
}

template <Scalar T>
Bidiagonalization<T> bidiagonalize(const Matrix<T>& a, bool keep_left) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m < n) throw Error(ErrorCode::invalid_argument, "bidiagonalize: requires rows >= cols");
  Matrix<T> w = a;
  Bidiagonalization<T> out{Matrix<T>(n, n), {}, std::nullopt};
  out.right.dim = n;
  out.right.side = ReflectorSide::right;
  HouseholderSeq<T> left;
  left.dim = m;
  left.side = ReflectorSide::left;

  for (std::size_t k = 0; k < n; ++k) {
    {
      auto x = w.col(k).subspan(k);
      Reflector<T> r;
      r.offset = k;
      const T beta = make_reflector(x, r.tau);
      r.v.assign(x.begin(), x.end());
      r.v[0] = T(1);
      x[0] = beta;
      for (std::size_t i = 1; i < x.size(); ++i) x[i] = T{};
      for (std::size_t j = k + 1; j < n; ++j) reflect_column<T>(r.v, r.tau, w.col(j), k);
      out.b(k, k) = beta;
      if (keep_left) left.reflectors.push_back(std::move(r));
    }
    if (k + 2 < n) {
      std::vector<T> x(n - k - 1);
      for (std::size_t j = 0; j < x.size(); ++j) x[j] = w(k, k + 1 + j);
      Reflector<T> r;
      r.offset = k + 1;
      const T beta = make_reflector(std::span<T>(x), r.tau);
      r.v = std::move(x);
      r.v[0] = T(1);
      w(k, k + 1) = beta;
      for (std::size_t j = k + 2; j < n; ++j) w(k, j) = T{};
      reflect_rows<T>(r.v, r.tau, w, k + 1, k + 1);
      out.b(k, k + 1) = beta;
      out.right.reflectors.push_back(std::move(r));
    } else if (k + 1 < n) {
      out.b(k, k + 1) = w(k, k + 1);
    }
  }
  if (keep_left) out.left = std::move(left);
  return out;
}

template <Scalar T>
Matrix<T> apply_householder_seq(const HouseholderSeq<T>& h, Matrix<T> x, bool transpose) {
  if (x.rows() != h.dim) {
    throw Error(ErrorCode::dimension_mismatch,
                "apply_householder_seq: reflectors act on dimension " + std::to_string(h.dim) +
                    " but X has " + std::to_string(x.rows()) + " rows");
  }
  const std::size_t k = h.size();
  for (std::size_t step = 0; step < k; ++step) {
    const auto& r = h.reflectors[transpose ? step : k - 1 - step];
    for (std::size_t j = 0; j < x.cols(); ++j) reflect_column<T>(r.v, r.tau, x.col(j), r.offset);
  }
  return x;
}

template <Scalar T>
Matrix<T> form_q(const HouseholderSeq<T>& h, std::size_t cols) {
  Matrix<T> q(h.dim, cols);
  for (std::size_t i = 0; i < std::min(h.dim, cols); ++i) q(i, i) = T(1);
  return apply_householder_seq(h, std::move(q));
}

SpectralNorm spectral_norm(const Matrix<double>& a) {
  SpectralNorm out;
  std::vector<std::size_t> nonzero;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const auto c = a.col(j);
    if (std::any_of(c.begin(), c.end(), [](double x) { return x != 0.0; })) nonzero.push_back(j);
  }
  if (nonzero.empty()) return out;

  if (std::max(a.rows(), a.cols()) <= kSpectralNormJacobiLimit) {
    Matrix<double> b(a.rows(), nonzero.size());
    for (std::size_t j = 0; j < nonzero.size(); ++j) {
      const auto src = a.col(nonzero[j]);
      std::copy(src.begin(), src.end(), b.col(j).begin());
    }
    if (b.rows() < b.cols()) b = transpose(b);
    // A wide input may still have zero columns after transposition.
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < b.cols(); ++j) {
      const auto c = b.col(j);
      if (std::any_of(c.begin(), c.end(), [](double x) { return x != 0.0; })) keep.push_back(j);
    }
    Matrix<double> c(b.rows(), keep.size());
    for (std::size_t j = 0; j < keep.size(); ++j) {
      const auto src = b.col(keep[j]);
      std::copy(src.begin(), src.end(), c.col(j).begin());
    }
    JacobiOptions opts;
    opts.accumulate_v = false;
    const auto svd = one_sided_jacobi(std::move(c), opts);
    out.value = svd.sigma.front();
    out.method = NormMethod::jacobi;
    out.iterations = svd.sweeps;
    return out;
  }

  const std::size_t n = a.cols();
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> ax(a.rows());
  double prev = 0.0;
  out.method = NormMethod::power_iteration;
  for (int it = 1; it <= 500; ++it) {
    std::fill(ax.begin(), ax.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const auto c = a.col(j);
      for (std::size_t i = 0; i < a.rows(); ++i) ax[i] += c[i] * x[j];
    }
    for (std::size_t j = 0; j < n; ++j) x[j] = dot<double>(a.col(j), ax);
    const double nx = norm2<double>(x);
    out.iterations = it;
    if (nx == 0.0) break;
    for (auto& xi : x) xi /= nx;
    const double sigma = std::sqrt(nx);
    out.value = sigma;
    if (it > 1 && std::abs(sigma - prev) <= 1e-6 * sigma) break;
    prev = sigma;
  }
  return out;
}

#define MPJACOBI_INSTANTIATE_LINALG(T)                                                   \
  template T dot<T>(std::span<const T>, std::span<const T>);                             \
  template T norm2<T>(std::span<const T>);                                               \
  template std::vector<T> column_norms<T>(const Matrix<T>&);                             \
  template Matrix<T> transpose<T>(const Matrix<T>&);                                     \
  template Matrix<T> matmul<T>(const Matrix<T>&, const Matrix<T>&);                      \
  template double frobenius_norm<T>(const Matrix<T>&);                                   \
  template QrFactors<T> householder_qr<T>(const Matrix<T>&);                             \
  template Bidiagonalization<T> bidiagonalize<T>(const Matrix<T>&, bool);                \
  template Matrix<T> apply_householder_seq<T>(const HouseholderSeq<T>&, Matrix<T>, bool); \
  template Matrix<T> form_q<T>(const HouseholderSeq<T>&, std::size_t);

MPJACOBI_INSTANTIATE_LINALG(float)
MPJACOBI_INSTANTIATE_LINALG(double)
MPJACOBI_INSTANTIATE_LINALG(DoubleDouble)

#undef MPJACOBI_INSTANTIATE_LINALG

}  // namespace mpjacobi
