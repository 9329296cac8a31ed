/* C interface to the isocert library.
 *
 * Objects are opaque handles created from text specifications (see the
 * README for the grammar) and released with the matching destroy call.
 * Every fallible call returns an isocert_status; on failure the message is
 * available from isocert_last_error() on the same thread until the next
 * failing call. Strings returned by a report stay valid until the report is
 * destroyed.
 */
#ifndef ISOCERT_ISOCERT_H
#define ISOCERT_ISOCERT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ISOCERT_API __declspec(dllexport)
#else
#define ISOCERT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum isocert_status {
    ISOCERT_OK = 0,
    ISOCERT_ERR_ARGUMENT = 1,
    ISOCERT_ERR_DOMAIN = 2,
    ISOCERT_ERR_CONSTRUCTION = 3,
    ISOCERT_ERR_PARSE = 4,
    ISOCERT_ERR_INTERNAL = 5
} isocert_status;

typedef enum isocert_verdict {
    ISOCERT_VERDICT_NONE = -1,
    ISOCERT_VERDICT_FINITE = 0,
    ISOCERT_VERDICT_DIVERGENT_LIKELY = 1,
    ISOCERT_VERDICT_INCONCLUSIVE = 2
} isocert_verdict;

typedef struct isocert_measure isocert_measure;
typedef struct isocert_entropy isocert_entropy;
typedef struct isocert_cost isocert_cost;
typedef struct isocert_family isocert_family;
typedef struct isocert_report isocert_report;

ISOCERT_API const char* isocert_version(void);
ISOCERT_API const char* isocert_last_error(void);

/* ---- measures ---------------------------------------------------------- */

typedef struct isocert_measure_options {
    int has_lo; /* nonzero: cut the support at lo */
    double lo;
    int has_hi;
    double hi;
    size_t grid_points;      /* 0: default */
    double log_density_drop; /* <= 0: default */
} isocert_measure_options;

/* spec: gauss | exp | exp_power:<alpha> | loglog | expr:<V(x)>; options may be NULL. */
ISOCERT_API isocert_status isocert_measure_create(const char* spec, const isocert_measure_options* options,
                                                  isocert_measure** out);
ISOCERT_API void isocert_measure_destroy(isocert_measure* m);
ISOCERT_API isocert_status isocert_measure_cdf(const isocert_measure* m, double x, double* out);
ISOCERT_API isocert_status isocert_measure_quantile(const isocert_measure* m, double p, double* out);
ISOCERT_API isocert_status isocert_measure_density(const isocert_measure* m, double x, double* out);
ISOCERT_API isocert_status isocert_measure_tilde_profile(const isocert_measure* m, double t, double* out);
ISOCERT_API isocert_status isocert_measure_outside_ball(const isocert_measure* m, double r, double* out);

/* ---- entropies, costs, families ----------------------------------------- */

/* spec: log | iterlog | F_tau:<phi>:<tau> | expr:<phi(x)> */
ISOCERT_API isocert_status isocert_entropy_create(const char* spec, isocert_entropy** out);
ISOCERT_API void isocert_entropy_destroy(isocert_entropy* e);
ISOCERT_API isocert_status isocert_entropy_eval(const isocert_entropy* e, double x, double* out);
/* Phi(x) = sup_y (x y - y F(y) + y). */
ISOCERT_API isocert_status isocert_entropy_phi(const isocert_entropy* e, double x, double* out);

/* spec: quadratic[:<delta>] | c:<A>:<alpha> | expr:<c(x)> */
ISOCERT_API isocert_status isocert_cost_create(const char* spec, isocert_cost** out);
ISOCERT_API void isocert_cost_destroy(isocert_cost* c);
ISOCERT_API isocert_status isocert_cost_eval(const isocert_cost* c, double x, double* out);
/* The multiplier delta carried by the spec (1 unless given). */
ISOCERT_API double isocert_cost_delta(const isocert_cost* c);
/* Numerical Legendre transform on the n dual points in grid. Each output
 * array may be NULL; truncated receives 1 where the maximizer hit the end
 * of the primal grid. */
ISOCERT_API isocert_status isocert_cost_conjugate(const isocert_cost* c, const double* grid, size_t n, double* values,
                                                  double* argmax, int* truncated);

/* spec: exponential:<l1>,... | bump:<a1>,... | linear:<e1>,... | random:<n> |
 * radial:<gamma>:<l1>,... | constant:<v1>,... | expr:<f(x)> */
ISOCERT_API isocert_status isocert_family_create(const char* spec, uint64_t seed, double floor_value,
                                                 isocert_family** out);
ISOCERT_API void isocert_family_destroy(isocert_family* f);
ISOCERT_API size_t isocert_family_size(const isocert_family* f);

/* ---- reports ------------------------------------------------------------ */

typedef struct isocert_check_params {
    double delta; /* <= 0: take delta from the cost spec */
    double K;
    double t_min;
    size_t nodes_per_decade; /* 0: default */
} isocert_check_params;

/* Fills the default parameters (delta from the cost, K = 2, t_min = 1e-12). */
ISOCERT_API void isocert_check_params_default(isocert_check_params* p);

/* Integrability condition for (measure, entropy, cost). */
ISOCERT_API isocert_status isocert_check(const isocert_measure* m, const isocert_entropy* e, const isocert_cost* c,
                                         const isocert_check_params* params, isocert_report** out);

/* Half-line profile on t_grid and entropy profile on r_grid. CSV 0 holds
 * the t table, CSV 1 the r table. */
ISOCERT_API isocert_status isocert_profile(const isocert_measure* m, const isocert_entropy* e, const double* t_grid,
                                           size_t nt, const double* r_grid, size_t nr, isocert_report** out);

/* Defective inequality, restricted entropy bounds and the mixed entropy
 * bound on consecutive members. CSV 0 holds one row per member. */
ISOCERT_API isocert_status isocert_test_defective(const isocert_measure* m, const isocert_entropy* e,
                                                  const isocert_cost* c, const isocert_family* f, double K,
                                                  isocert_report** out);

/* Tight modified inequality for e^{-|x|^alpha}, with the estimate repeated
 * on the enriched family. */
ISOCERT_API isocert_status isocert_test_tight(const isocert_measure* m, double alpha, double tau, double A,
                                              const isocert_family* f, isocert_report** out);

/* Entropy of |f|^beta, beta = alpha / (alpha - 1), with enrichment. */
ISOCERT_API isocert_status isocert_test_beta(const isocert_measure* m, double alpha, const isocert_family* f,
                                             isocert_report** out);

/* The bundled example suite. */
ISOCERT_API isocert_status isocert_example_suite(uint64_t seed, isocert_report** out);

ISOCERT_API void isocert_report_destroy(isocert_report* r);
/* Pretty-printed JSON, floating values with 17 significant digits. */
ISOCERT_API const char* isocert_report_json(const isocert_report* r);
/* CSV table number index, or NULL when the report has fewer tables. */
ISOCERT_API const char* isocert_report_csv(const isocert_report* r, size_t index);
ISOCERT_API isocert_verdict isocert_report_verdict(const isocert_report* r);
/* 1 when every asserted margin is nonnegative, 0 when one is violated,
 * -1 when the report asserts none. */
ISOCERT_API int isocert_report_margins_ok(const isocert_report* r);

#ifdef __cplusplus
}
#endif

#endif
