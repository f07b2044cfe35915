#ifndef MINK_CENTERS_H
#define MINK_CENTERS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Point selector for [`mink_report_point`].
 */
typedef enum MinkCenter {
  MINK_CENTER_CIRCUMCENTER = 0,
  MINK_CENTER_CENTROID = 1,
  MINK_CENTER_MONGE_POINT = 2,
  MINK_CENTER_COMPLEMENTARY_POINT = 3,
  MINK_CENTER_FEUERBACH_CENTER = 4,
} MinkCenter;

/**
 * Result code of every fallible call.
 */
typedef enum MinkStatus {
  MINK_STATUS_OK = 0,
  /**
   * Invalid input: bad norm, degenerate simplex, dimension mismatch.
   */
  MINK_STATUS_INVALID_INPUT = 1,
  /**
   * No circumcenter was located at tolerance.
   */
  MINK_STATUS_NOT_FOUND = 2,
  MINK_STATUS_NULL_POINTER = 3,
  MINK_STATUS_BUFFER_TOO_SMALL = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  MINK_STATUS_INTERNAL = 5,
} MinkStatus;

typedef struct MinkNorm MinkNorm;

typedef struct MinkReport MinkReport;

typedef struct MinkSimplex MinkSimplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call into this library on the same thread.
 */
const char *mink_last_error_message(void);

/**
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum MinkStatus mink_norm_euclidean(struct MinkNorm **out);

/**
 * `l_p` norm for `p >= 1`; pass `INFINITY` for the maximum norm.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum MinkStatus mink_norm_lp(double p, struct MinkNorm **out);

/**
 * Polyhedral norm from the vertices of a centrally symmetric unit ball.
 *
 * # Safety
 * `coords` must hold `n_vertices * dim` doubles; `out` must be valid.
 */
enum MinkStatus mink_norm_polyhedral(const double *coords,
                                     size_t n_vertices,
                                     size_t dim,
                                     struct MinkNorm **out);

/**
 * # Safety
 * `norm` must come from a constructor above and `v` hold `dim` doubles.
 */
enum MinkStatus mink_norm_eval(const struct MinkNorm *norm,
                               const double *v,
                               size_t dim,
                               double *out);

/**
 * # Safety
 * `norm` must be NULL or a handle not yet freed.
 */
void mink_norm_free(struct MinkNorm *norm);

/**
 * Simplex from `dim + 1` points of dimension `dim`. `eps_geom <= 0` uses
 * the default tolerance.
 *
 * # Safety
 * `coords` must hold `n_vertices * dim` doubles; `out` must be valid.
 */
enum MinkStatus mink_simplex_new(const double *coords,
                                 size_t n_vertices,
                                 size_t dim,
                                 double eps_geom,
                                 struct MinkSimplex **out);

/**
 * Dimension `d` of the simplex, or 0 for NULL.
 *
 * # Safety
 * `simplex` must be NULL or a live handle.
 */
size_t mink_simplex_dim(const struct MinkSimplex *simplex);

/**
 * # Safety
 * `simplex` must be NULL or a handle not yet freed.
 */
void mink_simplex_free(struct MinkSimplex *simplex);

/**
 * Locates a circumcenter. Writes `dim` coordinates to `center` and the
 * radius to `radius`; returns `MINK_STATUS_NOT_FOUND` when none is located.
 *
 * # Safety
 * Handles must be live; `center` must hold `center_len` doubles.
 */
enum MinkStatus mink_solve_circumcenter(const struct MinkNorm *norm,
                                        const struct MinkSimplex *simplex,
                                        double eps_geom,
                                        uint64_t seed,
                                        double *center,
                                        size_t center_len,
                                        double *radius);

/**
 * Computes every center. `center` may be NULL to run the solver, or point
 * to `dim` coordinates of a circumcenter, which is then certified.
 *
 * # Safety
 * Handles must be live; `center` is NULL or holds `dim` doubles.
 */
enum MinkStatus mink_report_compute(const struct MinkNorm *norm,
                                    const struct MinkSimplex *simplex,
                                    const double *center,
                                    double eps_geom,
                                    struct MinkReport **out);

/**
 * Copies one center of the report into `out` (`len >= dim`).
 *
 * # Safety
 * `report` must be live and `out` hold `len` doubles.
 */
enum MinkStatus mink_report_point(const struct MinkReport *report,
                                  enum MinkCenter which,
                                  double *out,
                                  size_t len);

/**
 * Circumradius, or NaN for NULL.
 *
 * # Safety
 * `report` must be NULL or live.
 */
double mink_report_radius(const struct MinkReport *report);

/**
 * Feuerbach radius `R / d`, or NaN for NULL.
 *
 * # Safety
 * `report` must be NULL or live.
 */
double mink_report_feuerbach_radius(const struct MinkReport *report);

/**
 * 1 when all centers coincide, 0 otherwise or for NULL.
 *
 * # Safety
 * `report` must be NULL or live.
 */
int32_t mink_report_collapsed(const struct MinkReport *report);

/**
 * 1 when every checked identity held at tolerance.
 *
 * # Safety
 * `report` must be NULL or live.
 */
int32_t mink_report_all_passed(const struct MinkReport *report);

/**
 * Report as JSON; free the string with [`mink_string_free`].
 *
 * # Safety
 * `report` must be live and `out` valid.
 */
enum MinkStatus mink_report_to_json(const struct MinkReport *report, char **out);

/**
 * # Safety
 * `report` must be NULL or a handle not yet freed.
 */
void mink_report_free(struct MinkReport *report);

/**
 * Checks the cyclic polygon identities on `n_vertices` planar points on
 * `S(center, radius)`. Sets `all_passed` and, when `json` is not NULL,
 * the claim table as JSON.
 *
 * # Safety
 * `coords` holds `2 n_vertices` doubles, `center` two; outputs are valid or NULL.
 */
enum MinkStatus mink_polygon_verify(const struct MinkNorm *norm,
                                    const double *coords,
                                    size_t n_vertices,
                                    const double *center,
                                    double radius,
                                    double eps_geom,
                                    int32_t *all_passed,
                                    char **json);

/**
 * Runs a JSON instance file end to end, as `mink-centers centers` does,
 * and returns the report JSON.
 *
 * # Safety
 * `instance_json` must be a NUL-terminated string and `out` valid.
 */
enum MinkStatus mink_run_instance_json(const char *instance_json, char **out);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a string from this library not yet freed.
 */
void mink_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MINK_CENTERS_H */
