#ifndef RIGIDBOUND_H
#define RIGIDBOUND_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RbClass {
  RB_CLASS_H1 = 1,
  RB_CLASS_H2 = 2,
} RbClass;

typedef enum RbStatus {
  RB_STATUS_OK = 0,
  RB_STATUS_NULL_POINTER = 1,
  RB_STATUS_INVALID_INPUT = 2,
  RB_STATUS_NOT_LAMAN = 3,
  RB_STATUS_MV_DISAGREEMENT = 4,
  RB_STATUS_INTERNAL = 5,
  RB_STATUS_PANIC = 6,
} RbStatus;

typedef struct RbGraph RbGraph;

typedef struct RbReport RbReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an edge list ("n <count>" header, then one "u v" pair per line).
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum RbStatus rb_graph_from_edge_list(const char *text, struct RbGraph **out);

/**
 * Builds a graph on vertices `1..=n` from `m` edges stored as `2m`
 * consecutive endpoints.
 *
 * # Safety
 * `edges` must point to `2 * m` readable values (may be null when `m` is 0)
 * and `out` must be a valid pointer.
 */
enum RbStatus rb_graph_new(size_t n, const size_t *edges, size_t m, struct RbGraph **out);

/**
 * # Safety
 * `g` must come from a graph constructor and not be freed already.
 */
void rb_graph_free(struct RbGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle and `out` a valid pointer.
 */
enum RbStatus rb_is_laman(const struct RbGraph *g, bool *out);

/**
 * H1 if the graph has a construction using vertex additions only.
 * Returns `RB_STATUS_NOT_LAMAN` for non-Laman graphs.
 *
 * # Safety
 * `g` must be a live graph handle and `out` a valid pointer.
 */
enum RbStatus rb_classify(const struct RbGraph *g, enum RbClass *out);

/**
 * Full analysis. A non-Laman graph still yields a report, without a bound.
 *
 * # Safety
 * `g` must be a live graph handle and `out` a valid pointer.
 */
enum RbStatus rb_analyze(const struct RbGraph *g,
                         uint64_t seed,
                         bool verify,
                         bool allow_n2_conjecture,
                         struct RbReport **out);

/**
 * Bound on the number of embeddings modulo rigid motions.
 *
 * # Safety
 * `r` must be a live report handle and `out` a valid pointer.
 */
enum RbStatus rb_report_bound(const struct RbReport *r, uint64_t *out);

/**
 * Mixed volume of the chosen system; absent for H1 graphs unless cross
 * checked.
 *
 * # Safety
 * `r` must be a live report handle and `out` a valid pointer.
 */
enum RbStatus rb_report_mv(const struct RbReport *r, uint64_t *out);

/**
 * The report as JSON; release the string with [`rb_string_free`].
 *
 * # Safety
 * `r` must be a live report handle and `out` a valid pointer.
 */
enum RbStatus rb_report_to_json(const struct RbReport *r, char **out);

/**
 * # Safety
 * `r` must come from [`rb_analyze`] and not be freed already.
 */
void rb_report_free(struct RbReport *r);

/**
 * # Safety
 * `s` must come from this library and not be freed already.
 */
void rb_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *rb_last_error_message(void);

/**
 * Mixed volume of `dim` lattice polytopes in dimension `dim`. Polytope `i`
 * has `counts[i]` points; all coordinates are stored row by row in
 * `points`. Both algorithms run and must agree.
 *
 * # Safety
 * `counts` must hold `dim` values, `points` must hold `dim * sum(counts)`
 * values and `out` must be a valid pointer.
 */
enum RbStatus rb_mixed_volume(size_t dim,
                              const size_t *counts,
                              const int64_t *points,
                              uint64_t seed,
                              uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RIGIDBOUND_H */
