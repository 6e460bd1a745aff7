#ifndef PLATEAU_H
#define PLATEAU_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PlateauGate {
  PLATEAU_GATE_INTERP = 0,
  PLATEAU_GATE_LEFT = 1,
  PLATEAU_GATE_RIGHT = 2,
} PlateauGate;

typedef enum PlateauStatus {
  PLATEAU_STATUS_OK = 0,
  PLATEAU_STATUS_ERROR = 1,
  /**
   * The smallness parameter does not pass the gate the call needs.
   */
  PLATEAU_STATUS_GATE = 2,
  PLATEAU_STATUS_INVALID_ARGUMENT = 3,
  PLATEAU_STATUS_OUTSIDE_DOMAIN = 4,
  PLATEAU_STATUS_NO_CONVERGENCE = 5,
  PLATEAU_STATUS_IO = 6,
  PLATEAU_STATUS_PANIC = 7,
} PlateauStatus;

/**
 * A left graph sampled on a mapped grid.
 */
typedef struct PlateauGraph PlateauGraph;

/**
 * A boundary problem: domain, datum and its `ζ` report.
 */
typedef struct PlateauProblem PlateauProblem;

typedef struct PlateauZeta {
  double gamma_sup;
  double gamma_lip;
  double phi_sup;
  double phi_lip;
  double zeta;
  bool gate_interp;
  bool gate_left;
  bool gate_right;
} PlateauZeta;

/**
 * Preimage of a point of the left projection: `u` is the graph value and
 * `(s, h)` the ruling parameters.
 */
typedef struct PlateauInversion {
  double u;
  double s;
  double h;
  double residual;
} PlateauInversion;

typedef struct PlateauArea {
  double lebesgue;
  double domain_route;
  double surface_route;
} PlateauArea;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread. The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *plateau_last_error(void);

/**
 * Strict upper bound on `ζ` for `gate`.
 */
double plateau_gate_threshold(enum PlateauGate gate);

/**
 * Closed form of the gate, e.g. `zeta < (sqrt(721) - 25)/48`. Static storage.
 */
const char *plateau_gate_closed_form(enum PlateauGate gate);

/**
 * Builds a problem from polynomial coefficients `c0..cn` on `[0, t_bar]`.
 * A coefficient list of length 0 stands for the zero function.
 *
 * # Safety
 * Each non-empty coefficient pointer must reference `len` readable doubles.
 */
enum PlateauStatus plateau_problem_new(double t_bar,
                                       const double *gamma1,
                                       size_t gamma1_len,
                                       const double *gamma2,
                                       size_t gamma2_len,
                                       const double *phi1,
                                       size_t phi1_len,
                                       const double *phi2,
                                       size_t phi2_len,
                                       struct PlateauProblem **out);

/**
 * Builds a problem from a case file.
 *
 * # Safety
 * `path` must be a NUL-terminated string.
 */
enum PlateauStatus plateau_problem_from_config(const char *path, struct PlateauProblem **out);

/**
 * # Safety
 * `problem` must come from a constructor above and not be used afterwards.
 */
void plateau_problem_free(struct PlateauProblem *problem);

/**
 * # Safety
 * `problem` must be a live handle.
 */
enum PlateauStatus plateau_problem_zeta(const struct PlateauProblem *problem,
                                        struct PlateauZeta *out);

/**
 * Ruling map `λ(s)`.
 *
 * # Safety
 * `problem` must be a live handle.
 */
enum PlateauStatus plateau_lambda(const struct PlateauProblem *problem, double s, double *out);

/**
 * `λ` on the uniform grid of `n` nodes over `[0, t_bar]`, written to `values[0..n]`.
 *
 * # Safety
 * `problem` must be a live handle and `values` must hold `n` doubles.
 */
enum PlateauStatus plateau_lambda_map(const struct PlateauProblem *problem,
                                      size_t n,
                                      double *values);

/**
 * Point `ρ(h, s)` of the ruled surface as `(x, y, t)` in `xyt[0..3]`.
 *
 * # Safety
 * `problem` must be a live handle and `xyt` must hold 3 doubles.
 */
enum PlateauStatus plateau_rho(const struct PlateauProblem *problem,
                               double h,
                               double s,
                               double *xyt);

/**
 * Left graph value at `(y, t)` in `D`, with its ruling parameters.
 *
 * # Safety
 * `problem` must be a live handle.
 */
enum PlateauStatus plateau_invert_left(const struct PlateauProblem *problem,
                                       double y,
                                       double t,
                                       struct PlateauInversion *out);

/**
 * Left-graph value of the point of the right projection `(eta, tau)`.
 *
 * # Safety
 * `problem` must be a live handle.
 */
enum PlateauStatus plateau_invert_right(const struct PlateauProblem *problem,
                                        double eta,
                                        double tau,
                                        struct PlateauInversion *out);

/**
 * Samples the left graph on an `n_y × n_t` mapped grid.
 *
 * # Safety
 * `problem` must be a live handle.
 */
enum PlateauStatus plateau_left_graph(const struct PlateauProblem *problem,
                                      size_t n_y,
                                      size_t n_t,
                                      struct PlateauGraph **out);

/**
 * # Safety
 * `graph` must come from [`plateau_left_graph`] and not be used afterwards.
 */
void plateau_graph_free(struct PlateauGraph *graph);

/**
 * Interpolated graph value at `(y, t)`.
 *
 * # Safety
 * `graph` must be a live handle.
 */
enum PlateauStatus plateau_graph_eval(const struct PlateauGraph *graph,
                                      double y,
                                      double t,
                                      double *out);

/**
 * # Safety
 * `graph` must be a live handle.
 */
enum PlateauStatus plateau_graph_sup_norm(const struct PlateauGraph *graph, double *out);

/**
 * Sub-Riemannian area of the solution by both routes at resolution `n`.
 *
 * # Safety
 * `problem` must be a live handle.
 */
enum PlateauStatus plateau_area(const struct PlateauProblem *problem,
                                size_t n,
                                struct PlateauArea *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLATEAU_H */
