// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

// Precision tiers, scalar traits, and exact/rounded conversion between them.

#pragma once

#include <cmath>
#include <string_view>
#include <type_traits>

#include "mpjacobi/double_double.hpp"
#include "mpjacobi/matrix.hpp"

namespace mpjacobi {

/// Storage format of one precision tier.
enum class Format { binary32, binary64, double_double };

/// Unit roundoff: 2^-24, 2^-53, 2^-106.
constexpr double unit_roundoff(Format f) noexcept {
  switch (f) {
    case Format::binary32:
      return 0x1p-24;
    case Format::binary64:
      return 0x1p-53;
    case Format::double_double:
      return 0x1p-106;
  }
  return 0.0;
}

std::string_view to_string(Format f) noexcept;

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<float> {
  static constexpr Format format = Format::binary32;
  static constexpr double unit_roundoff = 0x1p-24;
  using Wider = double;
};

template <>
struct ScalarTraits<double> {
  static constexpr Format format = Format::binary64;
  static constexpr double unit_roundoff = 0x1p-53;
  using Wider = DoubleDouble;
};

template <>
struct ScalarTraits<DoubleDouble> {
  static constexpr Format format = Format::double_double;
  static constexpr double unit_roundoff = 0x1p-106;
  using Wider = DoubleDouble;
};

template <class T>
concept Scalar = requires { ScalarTraits<T>::format; };

/// The next tier up, used for residual computations that must not be
/// polluted by the rounding they measure.
template <Scalar T>
using wider_t = typename ScalarTraits<T>::Wider;

template <Scalar T>
constexpr double unit_roundoff_of() noexcept {
  return ScalarTraits<T>::unit_roundoff;
}

/// Conversion between tiers: exact when widening, round-to-nearest when
/// narrowing.
template <Scalar To, Scalar From>
To convert_scalar(From x) noexcept {
  if constexpr (std::is_same_v<To, From>) {
    return x;
  } else if constexpr (std::is_same_v<From, DoubleDouble>) {
    return static_cast<To>(x);
  } else {
    return To(x);
  }
}

template <Scalar T>
double to_double(T x) noexcept {
  return convert_scalar<double>(x);
}

template <Scalar To, Scalar From>
Matrix<To> convert(const Matrix<From>& a) {
  if constexpr (std::is_same_v<To, From>) {
    return a;
  } else {
    Matrix<To> out(a.rows(), a.cols());
    auto src = a.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = convert_scalar<To>(src[i]);
    return out;
  }
}

inline Matrix<DoubleDouble> promote(const Matrix<double>& x) { return convert<DoubleDouble>(x); }
inline Matrix<double> demote(const Matrix<DoubleDouble>& x) { return convert<double>(x); }
inline Matrix<double> promote_low_to_working(const Matrix<float>& x) { return convert<double>(x); }
inline Matrix<float> demote_working_to_low(const Matrix<double>& x) { return convert<float>(x); }

/// C = A * B with every product and sum carried at the precision of High,
/// accumulating in ascending k. With High = DoubleDouble and binary64
/// inputs the partial products are exact (two_prod) and only the
/// double-double additions round.
template <Scalar High, Scalar Work>
Matrix<High> matmul_extended(const Matrix<Work>& a, const Matrix<Work>& b);

/// gamma_n = n u / (1 - n u) for the given unit roundoff.
constexpr double gamma(double n, double u) noexcept { return n * u / (1.0 - n * u); }

}  // namespace mpjacobi
