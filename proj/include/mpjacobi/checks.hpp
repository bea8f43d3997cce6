// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

// Quick self-checks of the numerical properties the library relies on,
// run by the `check` subcommand.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mpjacobi {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs every check; none throws. Deterministic for a given seed.
std::vector<CheckResult> run_property_checks(std::uint64_t seed = 1);

}  // namespace mpjacobi
