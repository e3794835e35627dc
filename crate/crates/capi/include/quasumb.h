/* C ABI for the quasumb timelike-surface geometry library. */

#ifndef QUASUMB_H
#define QUASUMB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Algebraic type of the shape operator at a point.
 */
typedef enum QsmPointClass {
  QSM_POINT_CLASS_UMBILIC = 0,
  QSM_POINT_CLASS_QUASI_UMBILIC = 1,
  QSM_POINT_CLASS_REAL_DIAGONALIZABLE = 2,
  QSM_POINT_CLASS_COMPLEX_DIAGONALIZABLE = 3,
} QsmPointClass;

/**
 * Status codes returned by every fallible call.
 */
typedef enum QsmStatus {
  QSM_STATUS_OK = 0,
  QSM_STATUS_NULL_POINTER = 1,
  QSM_STATUS_UTF8 = 2,
  QSM_STATUS_PARSE = 3,
  QSM_STATUS_DOMAIN = 4,
  QSM_STATUS_NOT_TIMELIKE = 5,
  QSM_STATUS_NOT_REGULAR = 6,
  QSM_STATUS_DEGENERATE = 7,
  QSM_STATUS_INTEGRATION = 8,
  QSM_STATUS_UNSUPPORTED = 9,
  QSM_STATUS_INVALID_ARGUMENT = 10,
  QSM_STATUS_INTERNAL = 11,
} QsmStatus;

/**
 * Opaque surface handle.
 */
typedef struct QsmSurface QsmSurface;

/**
 * Curvatures and classification at one parameter point.
 */
typedef struct QsmPointReport {
  /**
   * Gauss curvature K.
   */
  double gauss;
  /**
   * Mean curvature H.
   */
  double mean;
  /**
   * Discriminant H^2 - K.
   */
  double disc;
  enum QsmPointClass class_;
  /**
   * Repeated eigenvalue; meaningful only when `has_lambda` is true.
   */
  double lambda;
  bool has_lambda;
} QsmPointReport;

/**
 * Entries of the shape operator in the coordinate basis; column j holds
 * the image of the j-th basis vector.
 */
typedef struct QsmShapeMatrix {
  double s11;
  double s12;
  double s21;
  double s22;
} QsmShapeMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version string; static storage, do not free.
 */
const char *qsm_version(void);

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread. Do not free.
 */
const char *qsm_last_error(void);

/**
 * Create a builtin example surface: "ex1", "ex2", "ex3", "ex4",
 * "hyperboloid", or "timelike-plane".
 *
 * # Safety
 * `id` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QsmStatus qsm_surface_builtin(const char *id, struct QsmSurface **out);

/**
 * Create a surface from three component expressions in u and v.
 *
 * # Safety
 * All strings must be NUL-terminated; `out` must be a valid pointer.
 */
enum QsmStatus qsm_surface_exprs(const char *x0,
                                 const char *x1,
                                 const char *x2,
                                 struct QsmSurface **out);

/**
 * Create a null ruled surface from two direction angles theta1(u),
 * theta2(u); the base curve starts at (base0, base1, base2).
 *
 * # Safety
 * Strings must be NUL-terminated; `out` must be a valid pointer.
 */
enum QsmStatus qsm_surface_ruled(const char *theta1,
                                 const char *theta2,
                                 double base0,
                                 double base1,
                                 double base2,
                                 struct QsmSurface **out);

/**
 * Create a flat cylinder from a profile function f(u), with the standard
 * initial frame at the origin.
 *
 * # Safety
 * `profile` must be NUL-terminated; `out` must be a valid pointer.
 */
enum QsmStatus qsm_surface_case1(const char *profile, struct QsmSurface **out);

/**
 * Release a surface handle. Passing NULL is a no-op.
 *
 * # Safety
 * `s` must be a pointer from one of the constructors, not yet freed.
 */
void qsm_surface_free(struct QsmSurface *s);

/**
 * Position of the surface at (u, v), written to `out[0..3]`.
 *
 * # Safety
 * `s` must be a live handle; `out` must point to three doubles.
 */
enum QsmStatus qsm_surface_point(const struct QsmSurface *s, double u, double v, double *out);

/**
 * Curvatures and pointwise classification at (u, v) with relative
 * tolerance `tol` (pass 0 for the default).
 *
 * # Safety
 * `s` must be a live handle; `out` must be a valid pointer.
 */
enum QsmStatus qsm_point_report(const struct QsmSurface *s,
                                double u,
                                double v,
                                double tol,
                                struct QsmPointReport *out);

/**
 * Shape-operator matrix in the coordinate basis at (u, v).
 *
 * # Safety
 * `s` must be a live handle; `out` must be a valid pointer.
 */
enum QsmStatus qsm_shape_matrix(const struct QsmSurface *s,
                                double u,
                                double v,
                                struct QsmShapeMatrix *out);

/**
 * Classify the surface over an evenly sampled grid and return the report
 * as a JSON string (free with `qsm_string_free`).
 *
 * # Safety
 * `s` must be a live handle; `out_json` must be a valid pointer.
 */
enum QsmStatus qsm_classify_json(const struct QsmSurface *s,
                                 double u_lo,
                                 double u_hi,
                                 size_t nu,
                                 double v_lo,
                                 double v_hi,
                                 size_t nv,
                                 double tol,
                                 char **out_json);

/**
 * Find umbilic points by bisection along v for `nu` u-samples; writes up
 * to `cap` (u, v) pairs into `out_uv` and the total found into `found`.
 *
 * # Safety
 * `s` must be a live handle; `out_uv` must have room for `2 * cap`
 * doubles; `found` must be a valid pointer.
 */
enum QsmStatus qsm_umbilic_locus(const struct QsmSurface *s,
                                 double u_lo,
                                 double u_hi,
                                 size_t nu,
                                 double v_lo,
                                 double v_hi,
                                 double tol,
                                 double *out_uv,
                                 size_t cap,
                                 size_t *found);

/**
 * Release a string returned by this library. Passing NULL is a no-op.
 *
 * # Safety
 * `s` must come from a `char **` output of this library, not yet freed.
 */
void qsm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUASUMB_H */
