/* Copyright 2026 The mpjacobi Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the mixed-precision preconditioned Jacobi SVD.
 *
 * Every function that can fail returns an mpj_status; on failure a
 * message for the calling thread is available from mpj_last_error().
 * Objects are opaque and owned by the caller once created; release them
 * with the matching *_destroy function. Matrices are column-major
 * binary64. */

#ifndef MPJACOBI_H_
#define MPJACOBI_H_

#include <stddef.h>
#include <stdint.h>

#if defined(MPJACOBI_BUILDING)
#define MPJ_API __attribute__((visibility("default")))
#else
#define MPJ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mpj_status {
  MPJ_OK = 0,
  MPJ_INVALID_ARGUMENT = 1,
  MPJ_DIMENSION_MISMATCH = 2,
  MPJ_ZERO_COLUMN = 3,
  MPJ_RANK_DEFICIENT = 4,
  MPJ_NON_CONVERGENCE = 5,
  MPJ_PARSE_ERROR = 6,
  MPJ_IO_ERROR = 7,
  MPJ_OUT_OF_MEMORY = 8,
  MPJ_INTERNAL = 9
} mpj_status;

typedef struct mpj_matrix mpj_matrix;
typedef struct mpj_svd_result mpj_svd_result;
typedef struct mpj_gallery mpj_gallery;

MPJ_API const char* mpj_version(void);
MPJ_API const char* mpj_status_string(mpj_status status);
/* Message of the last failed call on this thread; "" if none. */
MPJ_API const char* mpj_last_error(void);
/* Releases strings returned through char** out-parameters. */
MPJ_API void mpj_string_free(char* s);

/* ---- matrices ---- */

/* data may be NULL for a zero matrix. */
MPJ_API mpj_status mpj_matrix_create(size_t rows, size_t cols, const double* data, mpj_matrix** out);
MPJ_API mpj_status mpj_matrix_identity(size_t n, mpj_matrix** out);
MPJ_API mpj_status mpj_matrix_read(const char* path, mpj_matrix** out);
MPJ_API mpj_status mpj_matrix_write(const mpj_matrix* m, const char* path);
MPJ_API size_t mpj_matrix_rows(const mpj_matrix* m);
MPJ_API size_t mpj_matrix_cols(const mpj_matrix* m);
/* rows * cols values, valid until the matrix is destroyed. */
MPJ_API const double* mpj_matrix_data(const mpj_matrix* m);
MPJ_API void mpj_matrix_destroy(mpj_matrix* m);

/* ---- factorization ---- */

typedef enum mpj_diagnostics_level {
  MPJ_DIAGNOSTICS_NONE = 0,
  MPJ_DIAGNOSTICS_ESTIMATED = 1,
  MPJ_DIAGNOSTICS_REFERENCE = 2
} mpj_diagnostics_level;

typedef struct mpj_svd_options {
  /* mp3-orth (default), mp3-bidiag, plain-jacobi, plain-jacobi-qr-first,
   * mp3-qr-before; short forms orth, bidiag, plain. */
  const char* method;
  /* sdq (default) or ssd. */
  const char* config;
  /* Jacobi tolerance; <= 0 selects sqrt(m) * u. */
  double tol;
  /* <= 0 selects 30. */
  int max_sweeps;
  /* QR-reduce when m >= qr_ratio * n; <= 0 selects 6m >= 11n. */
  double qr_ratio;
  mpj_diagnostics_level diagnostics;
} mpj_svd_options;

MPJ_API void mpj_svd_options_init(mpj_svd_options* opts);

/* opts may be NULL for defaults. Running out of sweeps is not an error:
 * check mpj_svd_converged(). */
MPJ_API mpj_status mpj_svd(const mpj_matrix* a, const mpj_svd_options* opts, mpj_svd_result** out);

typedef struct mpj_diagnostics {
  double orth_residual;
  double off_before;
  double off_after;
  double off_qr; /* NaN unless QR was used */
  double obliq_after;
  double kappa2d_before;
  double kappa2d_after;
  double kappa2_estimate;
  double composition_residual;
  double working_unit_roundoff;
  int used_qr;
  int jacobi_sweeps;
  int64_t jacobi_rotations;
  int converged;
  int preconditioner_converged;
  int preconditioner_sweeps;
  int assumption_a1;
  int assumption_a2;
  int assumption_a3;
} mpj_diagnostics;

MPJ_API size_t mpj_svd_rank(const mpj_svd_result* r);
MPJ_API int mpj_svd_converged(const mpj_svd_result* r);
/* Descending singular values, mpj_svd_rank() of them. */
MPJ_API const double* mpj_svd_sigma(const mpj_svd_result* r);
/* Borrowed views, valid until the result is destroyed. */
MPJ_API const mpj_matrix* mpj_svd_u(const mpj_svd_result* r);
MPJ_API const mpj_matrix* mpj_svd_v(const mpj_svd_result* r);
MPJ_API mpj_status mpj_svd_diagnostics(const mpj_svd_result* r, mpj_diagnostics* out);
MPJ_API void mpj_svd_destroy(mpj_svd_result* r);

/* Double-double reference singular values as hi/lo pairs (n each). */
MPJ_API mpj_status mpj_reference_svd(const mpj_matrix* a, double* hi, double* lo);

/* ---- gallery ---- */

/* spec: "randsvd:m=200,n=150,kappa=1e8,mode=3", "kahan:n=50,theta=0.01",
 * "lauchli-gram:n=10,mu=1e-3", "identity:n=5". */
MPJ_API mpj_status mpj_gallery_create(const char* spec, uint64_t seed, mpj_gallery** out);
MPJ_API const mpj_matrix* mpj_gallery_matrix(const mpj_gallery* g);
/* 0 when no exact singular values are known. */
MPJ_API size_t mpj_gallery_sigma_count(const mpj_gallery* g);
MPJ_API mpj_status mpj_gallery_sigma(const mpj_gallery* g, double* hi, double* lo);
/* Writes the matrix file and, when known, "<path>.sigma". */
MPJ_API mpj_status mpj_gallery_export(const mpj_gallery* g, const char* path);
MPJ_API void mpj_gallery_destroy(mpj_gallery* g);

/* ---- batch runs ---- */

/* MPJACOBI_THREADS if set, else the hardware concurrency. */
MPJ_API unsigned mpj_default_thread_count(void);
/* Runs a JSON experiment description; *csv receives the full CSV text and
 * *failed_rows the number of rows that threw or did not converge.
 * threads == 0 selects mpj_default_thread_count(). */
MPJ_API mpj_status mpj_experiment_run(const char* spec_json, unsigned threads, char** csv, size_t* failed_rows);
/* Property self-checks; *report receives one line per check. */
MPJ_API mpj_status mpj_check_run(uint64_t seed, char** report, int* failures);

#ifdef __cplusplus
}
#endif

#endif /* MPJACOBI_H_ */
