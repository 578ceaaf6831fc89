/* C interface to the qwt quantum-walk transport library. */

#ifndef QWT_H
#define QWT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum QwtStatus {
  QWT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  QWT_STATUS_NULL_POINTER,
  /**
   * Argument string was not valid UTF-8.
   */
  QWT_STATUS_INVALID_UTF8,
  /**
   * Sizes out of range for the requested family.
   */
  QWT_STATUS_SIZE_ERROR,
  /**
   * The named vertex pair is not an edge.
   */
  QWT_STATUS_TOPOLOGY_ERROR,
  /**
   * Vertex index out of range.
   */
  QWT_STATUS_INDEX_ERROR,
  /**
   * Dimension mismatch between inputs.
   */
  QWT_STATUS_DIMENSION_ERROR,
  /**
   * Invalid parameter value.
   */
  QWT_STATUS_VALUE_ERROR,
  /**
   * Non-finite numbers encountered.
   */
  QWT_STATUS_NON_FINITE,
  /**
   * State norm outside tolerance.
   */
  QWT_STATUS_NORM_ERROR,
  /**
   * Dynamics horizon reached without convergence.
   */
  QWT_STATUS_HORIZON_ERROR,
  /**
   * Flux/survival bookkeeping disagreed (integration fault).
   */
  QWT_STATUS_BOOKKEEPING_ERROR,
  /**
   * Scenario outside the closed-form catalog.
   */
  QWT_STATUS_UNCATALOGED,
  /**
   * Unparseable input text.
   */
  QWT_STATUS_PARSE_ERROR,
  /**
   * Filesystem failure.
   */
  QWT_STATUS_IO_ERROR,
  /**
   * A panic was caught at the boundary.
   */
  QWT_STATUS_PANIC,
} QwtStatus;

/**
 * Opaque graph handle.
 */
typedef struct QwtGraph QwtGraph;

/**
 * Result record for `qwt_efficiency`.
 */
typedef struct QwtReport {
  /**
   * Efficiency by Krylov-subspace overlap (always computed).
   */
  double eta_overlap;
  /**
   * Efficiency by trapped-flux integration; valid iff `has_numeric`.
   */
  double eta_numeric;
  /**
   * Integration horizon actually used; valid iff `has_numeric`.
   */
  double horizon;
  /**
   * Instantaneous flux at the horizon; valid iff `has_numeric`.
   */
  double flux_tail;
  /**
   * Krylov subspace dimension.
   */
  size_t krylov_dim;
  /**
   * Dynamics ran and converged.
   */
  bool has_numeric;
} QwtReport;

/**
 * Result record for `qwt_null_check`.
 */
typedef struct QwtNullReport {
  bool is_null;
  bool is_stationary;
  double eigenvalue_re;
  double eigenvalue_im;
  size_t krylov_dim;
} QwtNullReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Build a graph from the family mini-language: `complete:N`, `cbg:N1,N2`,
 * `star:N`, `star:N:outer`. On success writes a heap handle to `out`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QwtStatus qwt_graph_parse(const char *spec, struct QwtGraph **out);

/**
 * Build a graph from edge-list text: one `r s [lambda theta]` per line,
 * `#` comments ignored.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QwtStatus qwt_graph_from_edge_list(const char *text, struct QwtGraph **out);

/**
 * Release a graph handle. Null is ignored.
 *
 * # Safety
 * `graph` must have come from this library and not been freed before.
 */
void qwt_graph_free(struct QwtGraph *graph);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be a live handle or null.
 */
size_t qwt_graph_vertex_count(const struct QwtGraph *graph);

/**
 * Number of edges, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be a live handle or null.
 */
size_t qwt_graph_edge_count(const struct QwtGraph *graph);

/**
 * Record the extra weight `lambda*e^{i*theta}` on the ordered pair `(r,s)`
 * (the Hamiltonian element `(r,s)` receives the weight, `(s,r)` its
 * conjugate). `lambda = 0` removes any record on that edge.
 *
 * # Safety
 * `graph` must be a live, exclusively owned handle.
 */
enum QwtStatus qwt_graph_perturb_edge(struct QwtGraph *graph,
                                      size_t r,
                                      size_t s,
                                      double lambda,
                                      double theta);

/**
 * Transport efficiency of a scenario on `graph`.
 *
 * `initial_kind`: 0 localized at `l` (`k`, `gamma` ignored); 1 superposition
 * `(|l> + e^{i gamma}|k>)/sqrt(2)`. `method`: 0 overlap only, 1 dynamics,
 * 2 both. A horizon failure returns `QWT_STATUS_HORIZON_ERROR` and leaves
 * the overlap fields of `out` valid with `has_numeric = false`.
 *
 * # Safety
 * `graph` must be a live handle; `out` must point to writable memory.
 */
enum QwtStatus qwt_efficiency(const struct QwtGraph *graph,
                              size_t trap,
                              double kappa,
                              int initial_kind,
                              size_t l,
                              size_t k,
                              double gamma,
                              int method,
                              struct QwtReport *out);

/**
 * Null-efficiency check of a caller-supplied state (separate real and
 * imaginary arrays of length `len`, which must equal the vertex count and
 * describe a unit-norm state).
 *
 * # Safety
 * `graph` must be a live handle; `re`/`im` must point to `len` doubles;
 * `out` must point to writable memory.
 */
enum QwtStatus qwt_null_check(const struct QwtGraph *graph,
                              size_t trap,
                              double kappa,
                              const double *re,
                              const double *im,
                              size_t len,
                              struct QwtNullReport *out);

/**
 * Static description of a status code.
 */
const char *qwt_status_message(enum QwtStatus status);

/**
 * Library version as a static string.
 */
const char *qwt_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QWT_H */
