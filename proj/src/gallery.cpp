// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpjacobi/gallery.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>

#include "mpjacobi/error.hpp"
#include "mpjacobi/linalg.hpp"

namespace mpjacobi {

double GaussianStream::next() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string_view to_string(GalleryKind k) noexcept {
  switch (k) {
    case GalleryKind::randsvd:
      return "randsvd";
    case GalleryKind::kahan:
      return "kahan";
    case GalleryKind::lauchli_gram:
      return "lauchli-gram";
    case GalleryKind::identity:
      return "identity";
    case GalleryKind::file:
      return "file";
  }
  return "?";
}

namespace {

Matrix<DoubleDouble> haar_factor(std::size_t rows, std::size_t cols, GaussianStream& rng) {
  Matrix<DoubleDouble> g(rows, cols);
  for (auto& x : g.data()) x = DoubleDouble(rng.next());
  // diag(R) >= 0 makes Q Haar distributed.
  return householder_qr(g).q;
}

}  // namespace

std::vector<double> randsvd_sigma(std::size_t n, double kappa, int mode, GaussianStream& rng) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "randsvd: n must be positive");
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) {
    throw Error(ErrorCode::invalid_argument, "randsvd: kappa must be finite and >= 1");
  }
  std::vector<double> s(n, 1.0);
  const double inv = 1.0 / kappa;
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  switch (mode) {
    case 1:
      for (std::size_t i = 1; i < n; ++i) s[i] = inv;
      break;
    case 2:
      s[n - 1] = inv;
      break;
    case 3:
      for (std::size_t i = 0; i < n; ++i) s[i] = std::pow(kappa, -static_cast<double>(i) / denom);
      break;
    case 4:
      for (std::size_t i = 0; i < n; ++i) s[i] = 1.0 - (1.0 - inv) * static_cast<double>(i) / denom;
      break;
    case 5: {
      const double lk = std::log(kappa);
      for (auto& x : s) x = std::exp(-(1.0 - rng.uniform()) * lk);
      std::sort(s.begin(), s.end(), std::greater<>());
      break;
    }
    default:
      throw Error(ErrorCode::invalid_argument, "randsvd: mode must be in 1..5, got " + std::to_string(mode));
  }
  if (n == 1) s[0] = 1.0;
  return s;
}

GalleryMatrix randsvd(std::size_t m, std::size_t n, double kappa, int mode, std::uint64_t seed) {
  if (n < 2 || m < n) throw Error(ErrorCode::invalid_argument, "randsvd: requires m >= n >= 2");
  GaussianStream rng(seed);
  const auto sigma = randsvd_sigma(n, kappa, mode, rng);
  auto u = haar_factor(m, n, rng);
  const auto v = haar_factor(n, n, rng);
  for (std::size_t j = 0; j < n; ++j)
    for (auto& x : u.col(j)) x *= DoubleDouble(sigma[j]);
  auto a_ext = matmul(u, transpose(v));

  GalleryMatrix g;
  g.a = convert<double>(a_ext);
  g.a_extended = std::move(a_ext);
  g.sigma_true = std::vector<DoubleDouble>(sigma.begin(), sigma.end());
  g.kind = GalleryKind::randsvd;
  g.params = {{"m", double(m)}, {"n", double(n)}, {"kappa", kappa}, {"mode", double(mode)}};
  g.seed = seed;
  return g;
}

GalleryMatrix kahan(std::size_t n, double theta, double pert) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "kahan: requires n >= 2");
  const double s = std::sin(theta), c = std::cos(theta);
  Matrix<double> a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double si = std::pow(s, static_cast<double>(i));
    a(i, i) = si;
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = si * -c;
    a(i, i) += pert * 0x1p-52 * static_cast<double>(n - i);
  }
  GalleryMatrix g;
  g.a = std::move(a);
  g.kind = GalleryKind::kahan;
  g.params = {{"n", double(n)}, {"theta", theta}, {"pert", pert}};
  return g;
}

GalleryMatrix lauchli_gram(std::size_t n, double mu) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "lauchli_gram: requires n >= 2");
  if (!(mu > 0.0)) throw Error(ErrorCode::invalid_argument, "lauchli_gram: requires mu > 0");
  const double d = 1.0 + mu * mu;
  const double mu2 = d - 1.0;  // exact (Sterbenz)
  Matrix<double> a(n, n);
  for (auto& x : a.data()) x = 1.0;
  for (std::size_t i = 0; i < n; ++i) a(i, i) = d;
  std::vector<DoubleDouble> sigma(n, DoubleDouble(mu2));
  sigma[0] = DoubleDouble::from_sum(static_cast<double>(n), mu2);
  GalleryMatrix g;
  g.a = std::move(a);
  g.sigma_true = std::move(sigma);
  g.kind = GalleryKind::lauchli_gram;
  g.params = {{"n", double(n)}, {"mu", mu}};
  return g;
}

GalleryMatrix identity_matrix(std::size_t n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "identity: requires n >= 1");
  GalleryMatrix g;
  g.a = Matrix<double>::identity(n);
  g.sigma_true = std::vector<DoubleDouble>(n, DoubleDouble(1.0));
  g.kind = GalleryKind::identity;
  g.params = {{"n", double(n)}};
  return g;
}

namespace {

double parse_number(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::parse_error,
                "gallery spec: bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

std::size_t as_size(const GalleryParams& kv, std::string_view key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw Error(ErrorCode::parse_error, "gallery spec: missing " + std::string(key));
  const double v = it->second;
  if (!(v >= 1.0) || v != std::floor(v)) {
    throw Error(ErrorCode::parse_error, "gallery spec: " + std::string(key) + " must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

double as_double(const GalleryParams& kv, std::string_view key,
                 std::optional<double> fallback = std::nullopt) {
  const auto it = kv.find(key);
  if (it != kv.end()) return it->second;
  if (fallback) return *fallback;
  throw Error(ErrorCode::parse_error, "gallery spec: missing " + std::string(key));
}

}  // namespace

GalleryMatrix make_gallery(std::string_view kind, const GalleryParams& kv, std::uint64_t seed) {
  if (kind == "randsvd") {
    const auto n = as_size(kv, "n");
    const auto m = kv.count("m") ? as_size(kv, "m") : n;
    const double mode = as_double(kv, "mode", 3.0);
    if (mode != std::floor(mode)) throw Error(ErrorCode::parse_error, "gallery spec: mode must be an integer");
    return randsvd(m, n, as_double(kv, "kappa"), static_cast<int>(mode), seed);
  }
  if (kind == "kahan") return kahan(as_size(kv, "n"), as_double(kv, "theta", 1.2), as_double(kv, "pert", 25.0));
  if (kind == "lauchli-gram") return lauchli_gram(as_size(kv, "n"), as_double(kv, "mu", 1e-3));
  if (kind == "identity") return identity_matrix(as_size(kv, "n"));
  throw Error(ErrorCode::invalid_argument, "unknown gallery kind '" + std::string(kind) + "'");
}

GalleryMatrix gallery_from_spec(std::string_view spec, std::uint64_t seed) {
  const auto colon = spec.find(':');
  const std::string_view kind = spec.substr(0, colon);
  GalleryParams kv;
  if (colon != std::string_view::npos) {
    std::string_view rest = spec.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw Error(ErrorCode::parse_error, "gallery spec: expected key=value, got '" + std::string(item) + "'");
      }
      kv[std::string(item.substr(0, eq))] = parse_number(item.substr(0, eq), item.substr(eq + 1));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  return make_gallery(kind, kv, seed);
}

}  // namespace mpjacobi
