// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

// Batch experiments: a JSON description expands into a deterministic list
// of (matrix, seed, method) rows, each reported as one CSV line.
//
// {
//   "config": "sdq",                      // or "ssd"
//   "methods": ["mp3-orth", "plain-jacobi"],
//   "seeds": [1, 2, 3],
//   "truth": "reference",                 // or "construction"
//   "diagnostics": "estimated",           // or "reference"
//   "tol": 1e-14, "max_sweeps": 30, "qr_ratio": 1.8333,   // optional
//   "matrices": [
//     {"kind": "randsvd", "m": 200, "n": 150,
//      "kappa": {"logspace": [3, 12, 4]}, "mode": [1, 2, 3, 4, 5]},
//     {"kind": "kahan", "n": 50, "theta": 0.01},
//     {"kind": "file", "path": "a.txt"}
//   ]
// }
//
// Numeric parameters may be scalars, lists, or {"logspace": [lo, hi, count]}
// (powers of ten); lists expand as a Cartesian product in key order.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mpjacobi/driver.hpp"
#include "mpjacobi/gallery.hpp"
#include "mpjacobi/jacobi.hpp"

namespace mpjacobi {

enum class TruthChoice { reference, construction };

struct MatrixSpec {
  std::string kind;
  std::map<std::string, std::vector<double>, std::less<>> params;
  std::string path;  // kind == "file"
};

struct ExperimentSpec {
  PrecisionConfig config = sdq_config();
  std::vector<Algorithm> methods;
  std::vector<std::uint64_t> seeds{1};
  std::vector<MatrixSpec> matrices;
  TruthChoice truth = TruthChoice::reference;
  DiagnosticsLevel diagnostics = DiagnosticsLevel::estimated;
  JacobiOptions jacobi;
  std::optional<double> qr_ratio;
};

/// Throws Error(parse_error) for malformed JSON and
/// Error(invalid_argument) for empty axes, kappa < 1 or unknown names.
ExperimentSpec parse_experiment_spec(const std::string& json_text);

struct ExperimentRow {
  std::string kind;
  std::size_t m = 0, n = 0;
  std::optional<double> kappa_target;
  std::optional<int> mode;
  std::uint64_t seed = 0;
  std::string method;
  std::string config;
  double max_ferr = 0.0;
  double bound = 0.0;
  bool bound_ok = false;
  int sweeps = 0;
  std::int64_t rotations = 0;
  double off_before = 0.0, off_after = 0.0, obliq_after = 0.0;
  double kappa2d_before = 0.0, kappa2d_after = 0.0;
  bool used_qr = false;
  bool converged = false;
  double wall_ms = 0.0;
  std::string error;  // non-empty when the run threw
};

/// Thread count from MPJACOBI_THREADS, else the hardware concurrency.
unsigned default_thread_count();

/// Rows come back in expansion order: matrices, then parameter
/// combinations, then seeds, then methods. Matrix entropy is
/// derive_seed(seed, combination index).
std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec, unsigned threads = 0);

const std::string& csv_header();
void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);

}  // namespace mpjacobi
