// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace mpjacobi {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  zero_column,
  rank_deficient,
  non_convergence,
  parse_error,
  io_error,
};

const char* to_string(ErrorCode code) noexcept;

/// The single exception type thrown by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mpjacobi
