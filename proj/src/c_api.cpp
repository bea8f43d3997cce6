// Copyright 2026 The mpjacobi Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpjacobi/mpjacobi.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "mpjacobi/checks.hpp"
#include "mpjacobi/driver.hpp"
#include "mpjacobi/error.hpp"
#include "mpjacobi/experiment.hpp"
#include "mpjacobi/gallery.hpp"
#include "mpjacobi/matrix_io.hpp"
#include "mpjacobi/metrics.hpp"

struct mpj_matrix {
  mpjacobi::Matrix<double> m;
};

struct mpj_svd_result {
  mpjacobi::SvdOutput out;
  mpj_matrix u, v;
};

struct mpj_gallery {
  mpjacobi::GalleryMatrix g;
  mpj_matrix a;
};

namespace {

thread_local std::string last_error;

mpj_status status_of(mpjacobi::ErrorCode c) {
  using mpjacobi::ErrorCode;
  switch (c) {
    case ErrorCode::invalid_argument:
      return MPJ_INVALID_ARGUMENT;
    case ErrorCode::dimension_mismatch:
      return MPJ_DIMENSION_MISMATCH;
    case ErrorCode::zero_column:
      return MPJ_ZERO_COLUMN;
    case ErrorCode::rank_deficient:
      return MPJ_RANK_DEFICIENT;
    case ErrorCode::non_convergence:
      return MPJ_NON_CONVERGENCE;
    case ErrorCode::parse_error:
      return MPJ_PARSE_ERROR;
    case ErrorCode::io_error:
      return MPJ_IO_ERROR;
  }
  return MPJ_INTERNAL;
}

mpj_status fail(mpj_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
mpj_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const mpjacobi::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MPJ_OUT_OF_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(MPJ_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p == nullptr) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

#define MPJ_REQUIRE(cond, what) \
  if (!(cond)) return fail(MPJ_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* mpj_version(void) { return "0.1.0"; }

const char* mpj_status_string(mpj_status s) {
  switch (s) {
    case MPJ_OK:
      return "ok";
    case MPJ_INVALID_ARGUMENT:
      return "invalid argument";
    case MPJ_DIMENSION_MISMATCH:
      return "dimension mismatch";
    case MPJ_ZERO_COLUMN:
      return "zero column";
    case MPJ_RANK_DEFICIENT:
      return "rank deficient";
    case MPJ_NON_CONVERGENCE:
      return "no convergence";
    case MPJ_PARSE_ERROR:
      return "parse error";
    case MPJ_IO_ERROR:
      return "i/o error";
    case MPJ_OUT_OF_MEMORY:
      return "out of memory";
    case MPJ_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* mpj_last_error(void) { return last_error.c_str(); }

void mpj_string_free(char* s) { std::free(s); }

mpj_status mpj_matrix_create(size_t rows, size_t cols, const double* data, mpj_matrix** out) {
  MPJ_REQUIRE(out != nullptr, "mpj_matrix_create: out is NULL");
  return guarded([&] {
    mpjacobi::Matrix<double> m(rows, cols);
    if (data != nullptr) std::memcpy(m.data().data(), data, rows * cols * sizeof(double));
    *out = new mpj_matrix{std::move(m)};
    return MPJ_OK;
  });
}

mpj_status mpj_matrix_identity(size_t n, mpj_matrix** out) {
  MPJ_REQUIRE(out != nullptr, "mpj_matrix_identity: out is NULL");
  return guarded([&] {
    *out = new mpj_matrix{mpjacobi::Matrix<double>::identity(n)};
    return MPJ_OK;
  });
}

mpj_status mpj_matrix_read(const char* path, mpj_matrix** out) {
  MPJ_REQUIRE(path != nullptr && out != nullptr, "mpj_matrix_read: NULL argument");
  return guarded([&] {
    *out = new mpj_matrix{mpjacobi::read_matrix_file(path)};
    return MPJ_OK;
  });
}

mpj_status mpj_matrix_write(const mpj_matrix* m, const char* path) {
  MPJ_REQUIRE(m != nullptr && path != nullptr, "mpj_matrix_write: NULL argument");
  return guarded([&] {
    mpjacobi::write_matrix_file(path, m->m);
    return MPJ_OK;
  });
}

size_t mpj_matrix_rows(const mpj_matrix* m) { return m ? m->m.rows() : 0; }
size_t mpj_matrix_cols(const mpj_matrix* m) { return m ? m->m.cols() : 0; }
const double* mpj_matrix_data(const mpj_matrix* m) { return m ? m->m.data().data() : nullptr; }
void mpj_matrix_destroy(mpj_matrix* m) { delete m; }

void mpj_svd_options_init(mpj_svd_options* o) {
  if (o == nullptr) return;
  o->method = "mp3-orth";
  o->config = "sdq";
  o->tol = 0.0;
  o->max_sweeps = 0;
  o->qr_ratio = 0.0;
  o->diagnostics = MPJ_DIAGNOSTICS_ESTIMATED;
}

mpj_status mpj_svd(const mpj_matrix* a, const mpj_svd_options* opts, mpj_svd_result** out) {
  MPJ_REQUIRE(a != nullptr && out != nullptr, "mpj_svd: NULL argument");
  mpj_svd_options o;
  mpj_svd_options_init(&o);
  if (opts != nullptr) o = *opts;
  return guarded([&] {
    mpjacobi::SvdRequest req;
    req.algorithm = mpjacobi::parse_algorithm(o.method ? o.method : "mp3-orth");
    req.config = mpjacobi::parse_config(o.config ? o.config : "sdq");
    if (o.tol > 0.0) req.jacobi.tol = o.tol;
    if (o.max_sweeps > 0) req.jacobi.max_sweeps = o.max_sweeps;
    if (o.qr_ratio > 0.0) req.qr_ratio = o.qr_ratio;
    switch (o.diagnostics) {
      case MPJ_DIAGNOSTICS_NONE:
        req.diagnostics = mpjacobi::DiagnosticsLevel::none;
        break;
      case MPJ_DIAGNOSTICS_ESTIMATED:
        req.diagnostics = mpjacobi::DiagnosticsLevel::estimated;
        break;
      case MPJ_DIAGNOSTICS_REFERENCE:
        req.diagnostics = mpjacobi::DiagnosticsLevel::reference;
        break;
      default:
        return fail(MPJ_INVALID_ARGUMENT, "mpj_svd: unknown diagnostics level");
    }
    auto res = std::make_unique<mpj_svd_result>();
    res->out = mpjacobi::run_svd(a->m, req);
    res->u.m = std::move(res->out.u);
    res->v.m = std::move(res->out.v);
    *out = res.release();
    return MPJ_OK;
  });
}

size_t mpj_svd_rank(const mpj_svd_result* r) { return r ? r->out.sigma.size() : 0; }
int mpj_svd_converged(const mpj_svd_result* r) { return r && r->out.diag.converged ? 1 : 0; }
const double* mpj_svd_sigma(const mpj_svd_result* r) { return r ? r->out.sigma.data() : nullptr; }
const mpj_matrix* mpj_svd_u(const mpj_svd_result* r) { return r ? &r->u : nullptr; }
const mpj_matrix* mpj_svd_v(const mpj_svd_result* r) { return r ? &r->v : nullptr; }

mpj_status mpj_svd_diagnostics(const mpj_svd_result* r, mpj_diagnostics* out) {
  MPJ_REQUIRE(r != nullptr && out != nullptr, "mpj_svd_diagnostics: NULL argument");
  const auto& d = r->out.diag;
  *out = mpj_diagnostics{};
  out->orth_residual = d.orth_residual;
  out->off_before = d.off_before;
  out->off_after = d.off_after;
  out->off_qr = d.off_qr.value_or(std::numeric_limits<double>::quiet_NaN());
  out->obliq_after = d.obliq_after;
  out->kappa2d_before = d.kappa2d_before;
  out->kappa2d_after = d.kappa2d_after;
  out->kappa2_estimate = d.assumptions.kappa2_estimate;
  out->composition_residual = d.composition_residual;
  out->working_unit_roundoff = r->out.working_unit_roundoff;
  out->used_qr = d.used_qr;
  out->jacobi_sweeps = d.jacobi_sweeps;
  out->jacobi_rotations = d.jacobi_rotations;
  out->converged = d.converged;
  out->preconditioner_converged = d.preconditioner_converged;
  out->preconditioner_sweeps = d.preconditioner_sweeps;
  out->assumption_a1 = d.assumptions.a1;
  out->assumption_a2 = d.assumptions.a2;
  out->assumption_a3 = d.assumptions.a3;
  return MPJ_OK;
}

void mpj_svd_destroy(mpj_svd_result* r) { delete r; }

mpj_status mpj_reference_svd(const mpj_matrix* a, double* hi, double* lo) {
  MPJ_REQUIRE(a != nullptr && hi != nullptr && lo != nullptr, "mpj_reference_svd: NULL argument");
  return guarded([&] {
    const auto s = mpjacobi::reference_svd(a->m);
    for (std::size_t i = 0; i < s.size(); ++i) {
      hi[i] = s[i].hi();
      lo[i] = s[i].lo();
    }
    return MPJ_OK;
  });
}

mpj_status mpj_gallery_create(const char* spec, uint64_t seed, mpj_gallery** out) {
  MPJ_REQUIRE(spec != nullptr && out != nullptr, "mpj_gallery_create: NULL argument");
  return guarded([&] {
    auto g = std::make_unique<mpj_gallery>();
    g->g = mpjacobi::gallery_from_spec(spec, seed);
    g->a.m = g->g.a;
    *out = g.release();
    return MPJ_OK;
  });
}

const mpj_matrix* mpj_gallery_matrix(const mpj_gallery* g) { return g ? &g->a : nullptr; }

size_t mpj_gallery_sigma_count(const mpj_gallery* g) {
  return g && g->g.sigma_true ? g->g.sigma_true->size() : 0;
}

mpj_status mpj_gallery_sigma(const mpj_gallery* g, double* hi, double* lo) {
  MPJ_REQUIRE(g != nullptr && hi != nullptr && lo != nullptr, "mpj_gallery_sigma: NULL argument");
  if (!g->g.sigma_true) return fail(MPJ_INVALID_ARGUMENT, "no exact singular values for this matrix");
  const auto& s = *g->g.sigma_true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    hi[i] = s[i].hi();
    lo[i] = s[i].lo();
  }
  return MPJ_OK;
}

mpj_status mpj_gallery_export(const mpj_gallery* g, const char* path) {
  MPJ_REQUIRE(g != nullptr && path != nullptr, "mpj_gallery_export: NULL argument");
  return guarded([&] {
    mpjacobi::write_matrix_file(path, g->g.a);
    if (g->g.sigma_true) mpjacobi::write_sigma_file(std::string(path) + ".sigma", *g->g.sigma_true);
    return MPJ_OK;
  });
}

void mpj_gallery_destroy(mpj_gallery* g) { delete g; }

unsigned mpj_default_thread_count(void) { return mpjacobi::default_thread_count(); }

mpj_status mpj_experiment_run(const char* spec_json, unsigned threads, char** csv, size_t* failed_rows) {
  MPJ_REQUIRE(spec_json != nullptr && csv != nullptr, "mpj_experiment_run: NULL argument");
  return guarded([&] {
    const auto spec = mpjacobi::parse_experiment_spec(spec_json);
    const auto rows = mpjacobi::run_experiment(spec, threads);
    std::ostringstream os;
    mpjacobi::write_csv(os, rows);
    std::size_t failed = 0;
    std::string errors;
    for (const auto& r : rows) {
      if (!r.converged || !r.error.empty()) ++failed;
      if (!r.error.empty()) errors += r.kind + " seed " + std::to_string(r.seed) + " " + r.method + ": " + r.error + "\n";
    }
    *csv = copy_string(os.str());
    if (failed_rows != nullptr) *failed_rows = failed;
    last_error = errors;
    return MPJ_OK;
  });
}

mpj_status mpj_check_run(uint64_t seed, char** report, int* failures) {
  MPJ_REQUIRE(report != nullptr, "mpj_check_run: NULL argument");
  return guarded([&] {
    const auto results = mpjacobi::run_property_checks(seed);
    std::string text;
    int bad = 0;
    for (const auto& r : results) {
      text += (r.passed ? "PASS " : "FAIL ") + r.name + ": " + r.detail + "\n";
      if (!r.passed) ++bad;
    }
    *report = copy_string(text);
    if (failures != nullptr) *failures = bad;
    return MPJ_OK;
  });
}

}  // extern "C"
