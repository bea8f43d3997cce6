// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpjacobi/checks.hpp"

#include <cmath>
#include <cstdio>
#include <initializer_list>

#include "mpjacobi/double_double.hpp"
#include "mpjacobi/driver.hpp"
#include "mpjacobi/error.hpp"
#include "mpjacobi/gallery.hpp"
#include "mpjacobi/linalg.hpp"
#include "mpjacobi/metrics.hpp"
#include "mpjacobi/precond.hpp"

namespace mpjacobi {

namespace {

using Int = __int128;

struct Dyadic {
  std::int64_t mant;
  int exp;  // value = mant * 2^exp
};

Dyadic dyadic(double x) {
  if (x == 0.0) return {0, 0};
  int k = 0;
  const double f = std::frexp(x, &k);
  return {static_cast<std::int64_t>(std::ldexp(f, 53)), k - 53};
}

/// Exact test of sum(lhs) == sum(rhs); false when the scaled integers would
/// not fit in 125 bits.
bool dyadic_sums_equal(std::initializer_list<Dyadic> lhs, std::initializer_list<Dyadic> rhs, bool& representable) {
  int lo = 1 << 20;
  for (auto l : {lhs, rhs})
    for (const auto& d : l)
      if (d.mant != 0) lo = std::min(lo, d.exp);
  Int a = 0, b = 0;
  representable = true;
  auto add = [&](Int& acc, const Dyadic& d) {
    if (d.mant == 0) return;
    const int shift = d.exp - lo;
    if (shift > 125 - 54) {
      representable = false;
      return;
    }
    acc += static_cast<Int>(d.mant) << shift;
  };
  for (const auto& d : lhs) add(a, d);
  for (const auto& d : rhs) add(b, d);
  return representable && a == b;
}

CheckResult check_eft(std::uint64_t seed) {
  GaussianStream rng(seed);
  const int pairs = 100000;
  int bad = 0;
  for (int i = 0; i < pairs; ++i) {
    // Normalized operands; sum exponents stay within the 125-bit oracle window.
    auto draw = [&](int span) {
      const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
      return std::ldexp(sign * (1.0 + rng.uniform()), static_cast<int>(rng.uniform() * (2 * span + 1)) - span - 1);
    };
    const double sa = draw(8), sb = draw(8);
    const double a = draw(30), b = draw(30);
    const auto s = two_sum(sa, sb);
    const auto p = two_prod(a, b);
    bool ok1 = false, ok2 = false;
    const bool sum_ok = dyadic_sums_equal({dyadic(s.value), dyadic(s.error)}, {dyadic(sa), dyadic(sb)}, ok1);
    // a * b as a single dyadic: 106-bit mantissa split into two 53-bit halves.
    const Dyadic da = dyadic(a), db = dyadic(b);
    const Int prod = static_cast<Int>(da.mant) * db.mant;
    const Int hi_part = prod >> 53;
    const Int lo_part = prod - (hi_part << 53);
    const Dyadic ph{static_cast<std::int64_t>(hi_part), da.exp + db.exp + 53};
    const Dyadic pl{static_cast<std::int64_t>(lo_part), da.exp + db.exp};
    const bool prod_ok = dyadic_sums_equal({dyadic(p.value), dyadic(p.error)}, {ph, pl}, ok2);
    if (!sum_ok || !prod_ok || !ok1 || !ok2) ++bad;
  }
  return {"eft-exactness", bad == 0, std::to_string(pairs) + " pairs, " + std::to_string(bad) + " mismatches"};
}

CheckResult check_integer_matmul(std::uint64_t seed) {
  GaussianStream rng(seed + 1);
  Matrix<double> a(7, 5), b(5, 6);
  for (auto& x : a.data()) x = std::floor(rng.uniform() * 2048.0) - 1024.0;
  for (auto& x : b.data()) x = std::floor(rng.uniform() * 2048.0) - 1024.0;
  const auto c = matmul_extended<DoubleDouble, double>(a, b);
  bool ok = true;
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      long long exact = 0;
      for (std::size_t k = 0; k < 5; ++k) exact += static_cast<long long>(a(i, k)) * static_cast<long long>(b(k, j));
      ok = ok && c(i, j).hi() == static_cast<double>(exact) && c(i, j).lo() == 0.0;
    }
  }
  return {"extended-matmul-integer", ok, "7x5 times 5x6, entries in [-1024, 1023]"};
}

CheckResult check_preconditioners(std::uint64_t seed) {
  const auto g = randsvd(60, 40, 1e6, 3, derive_seed(seed, 2));
  const double u = 0x1p-53, ul = 0x1p-24;
  const auto gram = gram_extended(g.a);
  const double gnorm = frobenius_norm(gram);
  bool ok = true;
  char buf[160];
  std::string detail;
  for (auto method : {PrecondMethod::orthogonalized_low_svd, PrecondMethod::low_bidiagonalization}) {
    const auto p = method == PrecondMethod::orthogonalized_low_svd ? precond_orth_method<float, double>(g.a)
                                                                  : precond_bidiag_method<float, double>(g.a);
    const auto at = matmul_extended<DoubleDouble, double>(g.a, p.v_tilde);
    const double off = off_quantity(matmul(transpose(at), at));
    ok = ok && p.orth_residual <= 40 * u && off <= 100 * ul * gnorm;
    std::snprintf(buf, sizeof buf, "%s: orth %.2e (limit %.2e), off %.2e (limit %.2e); ", std::string(to_string(method)).c_str(),
                  p.orth_residual, 40 * u, off, 100 * ul * gnorm);
    detail += buf;
  }
  return {"preconditioner-orthogonality-and-off", ok, detail};
}

CheckResult check_lauchli(std::uint64_t) {
  const auto g = lauchli_gram(20, 1e-3);
  Mp3Options o;
  o.diagnostics = DiagnosticsLevel::none;
  const auto r = mp3_svd<float, double, DoubleDouble>(g.a, o);
  const auto rep = forward_errors(r.svd.sigma, *g.sigma_true, TruthSource::closed_form);
  char buf[96];
  std::snprintf(buf, sizeof buf, "max relative error %.2e (limit 1e-12)", rep.max_forward_error);
  return {"lauchli-gram-closed-form", rep.max_forward_error <= 1e-12, buf};
}

CheckResult check_accuracy(std::uint64_t seed) {
  const auto g = randsvd(80, 50, 1e10, 3, derive_seed(seed, 4));
  const auto truth = reference_svd(g.a);
  Mp3Options o;
  o.keep_intermediates = true;
  const auto r = mp3_svd<float, double, DoubleDouble>(g.a, o);
  const double kd = kappa2_scaled(r.intermediates->a_tilde_high);
  auto rep = forward_errors(r.svd.sigma, truth);
  attach_bound(rep, 80, 50, 0x1p-53, kd);
  char buf[128];
  std::snprintf(buf, sizeof buf, "max relative error %.2e, bound %.2e", rep.max_forward_error, *rep.bound_value);
  return {"mp3-forward-error-bound", rep.bound_satisfied && r.svd.converged, buf};
}

CheckResult check_determinism(std::uint64_t seed) {
  const auto g1 = randsvd(40, 30, 1e8, 5, seed);
  const auto g2 = randsvd(40, 30, 1e8, 5, seed);
  Mp3Options o;
  o.diagnostics = DiagnosticsLevel::none;
  const auto r1 = mp3_svd<float, double, DoubleDouble>(g1.a, o);
  const auto r2 = mp3_svd<float, double, DoubleDouble>(g2.a, o);
  const bool ok = g1.a == g2.a && r1.svd.sigma == r2.svd.sigma && r1.svd.u == r2.svd.u;
  return {"determinism", ok, "generation and factorization repeated bit for bit"};
}

}  // namespace

std::vector<CheckResult> run_property_checks(std::uint64_t seed) {
  struct Entry {
    const char* name;
    CheckResult (*run)(std::uint64_t);
  };
  const Entry checks[] = {
      {"eft-exactness", check_eft},
      {"extended-matmul-integer", check_integer_matmul},
      {"preconditioner-orthogonality-and-off", check_preconditioners},
      {"lauchli-gram-closed-form", check_lauchli},
      {"mp3-forward-error-bound", check_accuracy},
      {"determinism", check_determinism},
  };
  std::vector<CheckResult> out;
  for (const auto& c : checks) {
    try {
      out.push_back(c.run(seed));
    } catch (const std::exception& e) {
      out.push_back({c.name, false, std::string("threw: ") + e.what()});
    }
  }
  return out;
}

}  // namespace mpjacobi
