// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpjacobi/precision.hpp"

#include <cstdio>
#include <string>

namespace mpjacobi {

std::string_view to_string(Format f) noexcept {
  switch (f) {
    case Format::binary32:
      return "binary32";
    case Format::binary64:
      return "binary64";
    case Format::double_double:
      return "double-double";
  }
  return "?";
}

std::ostream& operator<<(std::ostream& os, DoubleDouble x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g%+.17g", x.hi(), x.lo());
  return os << buf;
}

namespace {

template <class Work>
void check_inner(const Matrix<Work>& a, const Matrix<Work>& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::dimension_mismatch,
                "matmul_extended: inner dimensions " + std::to_string(a.cols()) + " and " +
                    std::to_string(b.rows()) + " differ");
  }
}

}  // namespace

template <Scalar High, Scalar Work>
Matrix<High> matmul_extended(const Matrix<Work>& a, const Matrix<Work>& b) {
  check_inner(a, b);
  const std::size_t m = a.rows(), n = b.cols(), inner = a.cols();
  Matrix<High> c(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      High acc{};
      for (std::size_t k = 0; k < inner; ++k) {
        if constexpr (std::is_same_v<High, DoubleDouble> && std::is_same_v<Work, double>) {
          acc += exact_product(a(i, k), b(k, j));
        } else {
          acc += High(a(i, k)) * High(b(k, j));
        }
      }
      c(i, j) = acc;
    }
  }
  return c;
}

template Matrix<DoubleDouble> matmul_extended<DoubleDouble, double>(const Matrix<double>&,
                                                                    const Matrix<double>&);
template Matrix<double> matmul_extended<double, float>(const Matrix<float>&, const Matrix<float>&);
template Matrix<DoubleDouble> matmul_extended<DoubleDouble, DoubleDouble>(
    const Matrix<DoubleDouble>&, const Matrix<DoubleDouble>&);
template Matrix<double> matmul_extended<double, double>(const Matrix<double>&,
                                                        const Matrix<double>&);
template Matrix<float> matmul_extended<float, float>(const Matrix<float>&, const Matrix<float>&);

}  // namespace mpjacobi
