// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

// mpjacobi command-line front end.
//
// Exit codes: 0 success, 1 usage, 2 bad input data, 3 no convergence,
// 4 a property check failed.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mpjacobi/mpjacobi.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitCheckFailed = 4;

struct MatrixDeleter {
  void operator()(mpj_matrix* m) const { mpj_matrix_destroy(m); }
};
struct ResultDeleter {
  void operator()(mpj_svd_result* r) const { mpj_svd_destroy(r); }
};
struct GalleryDeleter {
  void operator()(mpj_gallery* g) const { mpj_gallery_destroy(g); }
};
struct StringDeleter {
  void operator()(char* s) const { mpj_string_free(s); }
};

using MatrixPtr = std::unique_ptr<mpj_matrix, MatrixDeleter>;
using ResultPtr = std::unique_ptr<mpj_svd_result, ResultDeleter>;
using GalleryPtr = std::unique_ptr<mpj_gallery, GalleryDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

int report(mpj_status s, int code) {
  std::cerr << "error: " << mpj_status_string(s) << ": " << mpj_last_error() << '\n';
  return code;
}

/// Usage-level failures are bad names; everything else is about the data.
int data_or_usage(mpj_status s) { return s == MPJ_INVALID_ARGUMENT ? kExitUsage : kExitData; }

void print_matrix(std::ostream& out, const mpj_matrix* m) {
  const std::size_t rows = mpj_matrix_rows(m), cols = mpj_matrix_cols(m);
  const double* d = mpj_matrix_data(m);
  out << rows << ' ' << cols << '\n';
  char buf[32];
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", d[j * rows + i]);
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  }
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

struct SvdArgs {
  std::string file;
  std::string gallery;
  std::size_t identity = 0;
  std::uint64_t seed = 1;
  std::string config = "sdq";
  std::string method = "orth";
  double tol = 0.0;
  int max_sweeps = 0;
  double qr_ratio = 0.0;
  std::string diagnostics = "estimated";
  std::string out;
  bool reference = false;
};

int cmd_svd(const SvdArgs& a) {
  const int sources = !a.file.empty() + !a.gallery.empty() + (a.identity > 0);
  if (sources != 1) {
    std::cerr << "error: give exactly one of FILE, --gallery, --identity\n";
    return kExitUsage;
  }
  MatrixPtr owned;
  GalleryPtr gallery;
  const mpj_matrix* input = nullptr;
  if (!a.file.empty()) {
    mpj_matrix* m = nullptr;
    if (auto s = mpj_matrix_read(a.file.c_str(), &m); s != MPJ_OK) return report(s, kExitData);
    owned.reset(m);
    input = m;
  } else if (!a.gallery.empty()) {
    mpj_gallery* g = nullptr;
    if (auto s = mpj_gallery_create(a.gallery.c_str(), a.seed, &g); s != MPJ_OK) return report(s, data_or_usage(s));
    gallery.reset(g);
    input = mpj_gallery_matrix(g);
  } else {
    mpj_matrix* m = nullptr;
    if (auto s = mpj_matrix_identity(a.identity, &m); s != MPJ_OK) return report(s, kExitUsage);
    owned.reset(m);
    input = m;
  }

  mpj_svd_options o;
  mpj_svd_options_init(&o);
  o.method = a.method.c_str();
  o.config = a.config.c_str();
  o.tol = a.tol;
  o.max_sweeps = a.max_sweeps;
  o.qr_ratio = a.qr_ratio;
  o.diagnostics = a.diagnostics == "none"        ? MPJ_DIAGNOSTICS_NONE
                  : a.diagnostics == "reference" ? MPJ_DIAGNOSTICS_REFERENCE
                                                 : MPJ_DIAGNOSTICS_ESTIMATED;
  mpj_svd_result* r = nullptr;
  if (auto s = mpj_svd(input, &o, &r); s != MPJ_OK) {
    if (s == MPJ_NON_CONVERGENCE) return report(s, kExitNoConvergence);
    return report(s, kExitData);
  }
  ResultPtr result(r);

  const std::size_t n = mpj_svd_rank(r);
  const double* sigma = mpj_svd_sigma(r);
  char buf[32];
  for (std::size_t k = 0; k < n; ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", sigma[k]);
    std::cout << buf << '\n';
  }

  mpj_diagnostics d;
  mpj_svd_diagnostics(r, &d);
  std::cerr << "method: " << a.method << "\nconfig: " << a.config << "\nsweeps: " << d.jacobi_sweeps
            << "\nrotations: " << d.jacobi_rotations << "\nconverged: " << (d.converged ? "yes" : "no")
            << "\nused_qr: " << (d.used_qr ? "yes" : "no");
  if (a.diagnostics != "none") {
    std::cerr << "\noff_before: " << num(d.off_before) << "\noff_after: " << num(d.off_after)
              << "\nobliq_after: " << num(d.obliq_after) << "\nkappa2d_before: " << num(d.kappa2d_before)
              << "\nkappa2d_after: " << num(d.kappa2d_after) << "\northogonality: " << num(d.orth_residual)
              << "\nassumptions: A1=" << (d.assumption_a1 ? "yes" : "no") << " A2=" << (d.assumption_a2 ? "yes" : "no")
              << " A3=" << (d.assumption_a3 ? "yes" : "no");
  }
  std::cerr << '\n';

  auto max_error = [&](const std::vector<double>& hi, const std::vector<double>& lo) {
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double t = hi[k] + lo[k];
      worst = std::fmax(worst, std::fabs((sigma[k] - hi[k]) - lo[k]) / t);
    }
    return worst;
  };
  if (gallery && mpj_gallery_sigma_count(gallery.get()) == n) {
    std::vector<double> hi(n), lo(n);
    mpj_gallery_sigma(gallery.get(), hi.data(), lo.data());
    std::cerr << "max_rel_error_vs_exact: " << num(max_error(hi, lo)) << '\n';
  }
  if (a.reference) {
    std::vector<double> hi(n), lo(n);
    if (auto s = mpj_reference_svd(input, hi.data(), lo.data()); s != MPJ_OK) return report(s, kExitData);
    std::cerr << "max_rel_error_vs_reference: " << num(max_error(hi, lo)) << '\n';
  }

  if (!a.out.empty()) {
    mpj_matrix* s = nullptr;
    mpj_matrix_create(n, 1, sigma, &s);
    MatrixPtr sig(s);
    for (auto [suffix, m] : {std::pair{".u.txt", mpj_svd_u(r)}, std::pair{".sigma.txt", static_cast<const mpj_matrix*>(s)},
                             std::pair{".v.txt", mpj_svd_v(r)}}) {
      if (auto st = mpj_matrix_write(m, (a.out + suffix).c_str()); st != MPJ_OK) return report(st, kExitData);
    }
  }
  return d.converged ? 0 : kExitNoConvergence;
}

int cmd_experiment(const std::string& spec_path, const std::string& out, unsigned threads) {
  std::ifstream in(spec_path);
  if (!in) {
    std::cerr << "error: cannot open '" << spec_path << "'\n";
    return kExitData;
  }
  std::stringstream text;
  text << in.rdbuf();
  char* csv = nullptr;
  std::size_t failed = 0;
  if (auto s = mpj_experiment_run(text.str().c_str(), threads, &csv, &failed); s != MPJ_OK) return report(s, kExitData);
  StringPtr owned(csv);
  if (*mpj_last_error() != '\0') std::cerr << mpj_last_error();
  if (failed > 0) std::cerr << "warning: " << failed << " row(s) failed or did not converge\n";
  if (out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(out);
    f << csv;
    if (!f) {
      std::cerr << "error: cannot write '" << out << "'\n";
      return kExitData;
    }
  }
  return 0;
}

int cmd_gallery(const std::string& spec, std::uint64_t seed, const std::string& out) {
  mpj_gallery* g = nullptr;
  if (auto s = mpj_gallery_create(spec.c_str(), seed, &g); s != MPJ_OK) return report(s, data_or_usage(s));
  GalleryPtr owned(g);
  if (out.empty()) {
    print_matrix(std::cout, mpj_gallery_matrix(g));
    return 0;
  }
  if (auto s = mpj_gallery_export(g, out.c_str()); s != MPJ_OK) return report(s, kExitData);
  return 0;
}

int cmd_check(std::uint64_t seed) {
  char* text = nullptr;
  int failures = 0;
  if (auto s = mpj_check_run(seed, &text, &failures); s != MPJ_OK) return report(s, kExitCheckFailed);
  StringPtr owned(text);
  std::cout << text;
  return failures == 0 ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-precision preconditioned one-sided Jacobi SVD"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mpj_version());

  SvdArgs svd;
  auto* svd_cmd = app.add_subcommand("svd", "Singular values of one matrix");
  svd_cmd->add_option("file", svd.file, "Matrix file");
  svd_cmd->add_option("--gallery", svd.gallery, "Gallery spec, e.g. randsvd:m=200,n=150,kappa=1e8,mode=3");
  svd_cmd->add_option("--identity", svd.identity, "Use the n x n identity")->check(CLI::PositiveNumber);
  svd_cmd->add_option("--seed", svd.seed, "Gallery seed");
  svd_cmd->add_option("--config", svd.config, "Precision configuration")->check(CLI::IsMember({"sdq", "ssd"}));
  svd_cmd->add_option("--method", svd.method, "Algorithm")
      ->check(CLI::IsMember({"orth", "bidiag", "plain", "mp3-orth", "mp3-bidiag", "plain-jacobi",
                             "plain-jacobi-qr-first", "mp3-qr-before"}));
  svd_cmd->add_option("--tol", svd.tol, "Jacobi tolerance (default sqrt(m) u)")->check(CLI::Range(0.0, 1.0));
  svd_cmd->add_option("--max-sweeps", svd.max_sweeps, "Sweep budget")->check(CLI::PositiveNumber);
  svd_cmd->add_option("--qr-threshold-override", svd.qr_ratio, "Use QR when m >= ratio * n")
      ->check(CLI::PositiveNumber);
  svd_cmd->add_option("--diagnostics", svd.diagnostics, "Diagnostic detail")
      ->check(CLI::IsMember({"none", "estimated", "reference"}));
  svd_cmd->add_option("--out", svd.out, "Write PREFIX.u.txt, PREFIX.sigma.txt, PREFIX.v.txt");
  svd_cmd->add_flag("--reference", svd.reference, "Compare with the double-double reference SVD");

  std::string spec_path, exp_out;
  unsigned threads = 0;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a JSON experiment description and emit CSV");
  exp_cmd->add_option("spec", spec_path, "Experiment JSON")->required();
  exp_cmd->add_option("--out", exp_out, "CSV path (default stdout)");
  exp_cmd->add_option("--threads", threads, "Worker threads (default MPJACOBI_THREADS or all cores)");

  std::string gallery_spec, gallery_out;
  std::uint64_t gallery_seed = 1;
  auto* gal_cmd = app.add_subcommand("gallery", "Write a test matrix (and its exact singular values)");
  gal_cmd->add_option("spec", gallery_spec, "Gallery spec")->required();
  gal_cmd->add_option("--seed", gallery_seed, "Seed");
  gal_cmd->add_option("--out", gallery_out, "Matrix file; PATH.sigma gets the singular values");

  std::uint64_t check_seed = 1;
  auto* check_cmd = app.add_subcommand("check", "Run the numerical property self-checks");
  check_cmd->add_option("--seed", check_seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  if (*svd_cmd) return cmd_svd(svd);
  if (*exp_cmd) return cmd_experiment(spec_path, exp_out, threads);
  if (*gal_cmd) return cmd_gallery(gallery_spec, gallery_seed, gallery_out);
  if (*check_cmd) return cmd_check(check_seed);
  return kExitUsage;
}
