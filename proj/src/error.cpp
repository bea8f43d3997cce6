// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpjacobi/error.hpp"

namespace mpjacobi {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument:
      return "invalid argument";
    case ErrorCode::dimension_mismatch:
      return "dimension mismatch";
    case ErrorCode::zero_column:
      return "zero column";
    case ErrorCode::rank_deficient:
      return "rank deficient";
    case ErrorCode::non_convergence:
      return "no convergence";
    case ErrorCode::parse_error:
      return "parse error";
    case ErrorCode::io_error:
      return "i/o error";
  }
  return "unknown error";
}

}  // namespace mpjacobi
