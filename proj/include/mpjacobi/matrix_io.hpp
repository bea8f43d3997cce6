// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

// Plain-text matrix files.
//
//   rows cols
//   a(0,0) a(0,1) ... a(0,cols-1)
//   ...
//
// Values are written with 17 significant digits, which round-trips every
// binary64. The optional sidecar "<file>.sigma" holds one singular value
// per line written as hi+lo of a double-double.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mpjacobi/double_double.hpp"
#include "mpjacobi/matrix.hpp"

namespace mpjacobi {

/// Throws Error(parse_error) with the offending line number.
Matrix<double> read_matrix(std::istream& in);
Matrix<double> read_matrix_file(const std::string& path);

void write_matrix(std::ostream& out, const Matrix<double>& a);
void write_matrix_file(const std::string& path, const Matrix<double>& a);

/// 33 significant digits of hi + lo, e.g. "1.00000000000000000000000000000000e+00".
std::string format_extended(DoubleDouble x);
/// Inverse of format_extended; accepts any decimal literal.
DoubleDouble parse_extended(const std::string& text);

void write_sigma_file(const std::string& path, const std::vector<DoubleDouble>& sigma);
std::vector<DoubleDouble> read_sigma_file(const std::string& path);

}  // namespace mpjacobi
