// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpjacobi/matrix_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mpjacobi/error.hpp"

namespace mpjacobi {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::parse_error, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

template <class T>
bool parse_token(std::string_view tok, T& value) {
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, value);
  return ec == std::errc() && ptr == end;
}

DoubleDouble pow10_dd(int k) {
  DoubleDouble result(1.0), base(10.0);
  unsigned e = static_cast<unsigned>(k < 0 ? -k : k);
  while (e != 0) {
    if (e & 1U) result *= base;
    base *= base;
    e >>= 1U;
  }
  return k < 0 ? DoubleDouble(1.0) / result : result;
}

constexpr int kExtendedDigits = 33;

}  // namespace

Matrix<double> read_matrix(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!split_ws(line).empty()) return true;
    }
    return false;
  };
  if (!next_line()) parse_fail(lineno + 1, "missing header 'rows cols'");
  const auto head = split_ws(line);
  std::size_t rows = 0, cols = 0;
  if (head.size() != 2 || !parse_token(head[0], rows) || !parse_token(head[1], cols) || rows == 0 || cols == 0) {
    parse_fail(lineno, "header must be two positive integers 'rows cols'");
  }
  Matrix<double> a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!next_line()) parse_fail(lineno + 1, "expected " + std::to_string(rows) + " rows, found " + std::to_string(i));
    const auto toks = split_ws(line);
    if (toks.size() != cols) {
      parse_fail(lineno, "expected " + std::to_string(cols) + " values, found " + std::to_string(toks.size()));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      double v = 0.0;
      if (!parse_token(toks[j], v) || !std::isfinite(v)) {
        parse_fail(lineno, "bad value '" + std::string(toks[j]) + "'");
      }
      a(i, j) = v;
    }
  }
  if (next_line()) parse_fail(lineno, "trailing data after " + std::to_string(rows) + " rows");
  return a;
}

Matrix<double> read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
  try {
    return read_matrix(in);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void write_matrix(std::ostream& out, const Matrix<double>& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  char buf[32];
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
      if (j != 0) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

void write_matrix_file(const std::string& path, const Matrix<double>& a) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write '" + path + "'");
  write_matrix(out, a);
  if (!out) throw Error(ErrorCode::io_error, "write failed for '" + path + "'");
}

std::string format_extended(DoubleDouble x) {
  if (!isfinite(x)) return std::isnan(x.hi()) ? "nan" : (x.hi() > 0 ? "inf" : "-inf");
  if (x.hi() == 0.0) return "0.00000000000000000000000000000000e+00";
  const bool neg = x.hi() < 0.0;
  DoubleDouble y = abs(x);
  int e10 = static_cast<int>(std::floor(std::log10(y.hi())));
  y = y * pow10_dd(-e10);
  if (y.hi() >= 10.0) {
    y = y / DoubleDouble(10.0);
    ++e10;
  } else if (y.hi() < 1.0) {
    y = y * DoubleDouble(10.0);
    --e10;
  }
  // One guard digit, then round half up.
  int digits[kExtendedDigits + 1];
  for (int& d : digits) {
    double f = std::floor(y.hi());
    if (f == y.hi() && y.lo() < 0.0) f -= 1.0;
    f = std::fmin(std::fmax(f, 0.0), 9.0);
    d = static_cast<int>(f);
    y = (y - DoubleDouble(f)) * DoubleDouble(10.0);
  }
  if (digits[kExtendedDigits] >= 5) {
    int i = kExtendedDigits - 1;
    while (i >= 0 && ++digits[i] == 10) digits[i--] = 0;
    if (i < 0) {
      digits[0] = 1;
      ++e10;
    }
  }
  std::string s = neg ? "-" : "";
  s += static_cast<char>('0' + digits[0]);
  s += '.';
  for (int i = 1; i < kExtendedDigits; ++i) s += static_cast<char>('0' + digits[i]);
  char exp[8];
  std::snprintf(exp, sizeof exp, "e%+03d", e10);
  return s + exp;
}

DoubleDouble parse_extended(const std::string& text) {
  std::size_t i = 0;
  const auto fail = [&] { throw Error(ErrorCode::parse_error, "bad extended-precision literal '" + text + "'"); };
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  bool neg = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
  DoubleDouble mant(0.0);
  int scale = 0;
  bool any = false, dot = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c >= '0' && c <= '9') {
      mant = mant * DoubleDouble(10.0) + DoubleDouble(c - '0');
      if (dot) --scale;
      any = true;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!any) fail();
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    int e = 0;
    const auto* end = text.data() + text.size();
    const char* begin = text.data() + i;
    if (begin < end && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, e);
    if (ec != std::errc()) fail();
    scale += e;
    i = static_cast<std::size_t>(ptr - text.data());
  }
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i != text.size()) fail();
  DoubleDouble v = scale >= 0 ? mant * pow10_dd(scale) : mant / pow10_dd(-scale);
  return neg ? -v : v;
}

void write_sigma_file(const std::string& path, const std::vector<DoubleDouble>& sigma) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write '" + path + "'");
  for (const auto& s : sigma) out << format_extended(s) << '\n';
  if (!out) throw Error(ErrorCode::io_error, "write failed for '" + path + "'");
}

std::vector<DoubleDouble> read_sigma_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
  std::vector<DoubleDouble> out;
  std::string line;
  while (std::getline(in, line)) {
    if (split_ws(line).empty()) continue;
    out.push_back(parse_extended(line));
  }
  return out;
}

}  // namespace mpjacobi
