/*
 * gcnse — asymptotic performance prediction for single-layer graph
 * convolutional networks on attributed stochastic block models.
 *
 * C interface of the shared library. All functions are thread-safe; handles
 * are opaque and single-owner. Functions returning gcnse_status leave their
 * outputs untouched on failure and store a message retrievable (per thread)
 * through gcnse_last_error().
 */
#ifndef GCNSE_H
#define GCNSE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GCNSE_API __declspec(dllexport)
#else
#define GCNSE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  GCNSE_OK = 0,
  GCNSE_ERR_INVALID = 1,     /* bad parameter values or malformed input */
  GCNSE_ERR_DEGENERATE = 2,  /* degenerate potential or overlap */
  GCNSE_ERR_SINGULAR = 3,    /* non-finite fixed-point update */
  GCNSE_ERR_NUMERICAL = 4,   /* iteration/quadrature failed to converge */
  GCNSE_ERR_UNCONVERGED = 5, /* step budget exhausted */
  GCNSE_ERR_PARSE = 6,
  GCNSE_ERR_IO = 7,
  GCNSE_ERR_UNKNOWN = 8
} gcnse_status;

typedef enum { GCNSE_MODEL_CSBM = 0, GCNSE_MODEL_GLM_SBM = 1 } gcnse_model;
typedef enum {
  GCNSE_LOSS_QUADRATIC = 0,
  GCNSE_LOSS_LOGISTIC = 1,
  GCNSE_LOSS_HINGE = 2
} gcnse_loss;
typedef enum {
  GCNSE_ADJ_BERNOULLI = 0,
  GCNSE_ADJ_GAUSSIAN = 1
} gcnse_adjacency;
typedef enum {
  GCNSE_CSTAR_SMALL_LAMBDA = 0,
  GCNSE_CSTAR_LARGE_LAMBDA = 1,
  GCNSE_CSTAR_FINITE = 2
} gcnse_cstar_regime;
typedef enum {
  GCNSE_INIT_PRESET = 0,
  GCNSE_INIT_RANDOM_POSITIVE = 1,
  GCNSE_INIT_CUSTOM = 2
} gcnse_se_init;
typedef enum {
  GCNSE_STEP_EXACT_RIDGE = 0,
  GCNSE_STEP_FIRST_ORDER = 1
} gcnse_step_rule;

/* rho_test < 0 means "complement of the train set". mu is ignored for the
 * GLM-SBM. d is used by the finite-size simulator only. */
typedef struct {
  int model;
  double alpha;
  double lambda;
  double mu;
  double rho;
  double rho_test;
  double d;
} gcnse_data_params;

typedef struct {
  int loss;
  double r;
  double c;
} gcnse_gcn_params;

typedef struct {
  long mc_count;
  uint64_t seed;
  double tol;
  int max_iter;
  double damping;
  int workers;
  int init_kind; /* gcnse_se_init */
  double init_custom[12];
  uint64_t init_seed;
} gcnse_solve_config;

typedef struct {
  double e_train;
  double e_test;
  double acc_train;
  double acc_test;
} gcnse_metrics;

/* Order-parameter layout used by every double[12] in this interface:
 * m_w, m_sigma, q_w, q_sigma, v_w, v_sigma,
 * mhat_w, mhat_sigma, qhat_w, qhat_sigma, vhat_w, vhat_sigma. */

GCNSE_API const char* gcnse_version(void);
GCNSE_API const char* gcnse_last_error(void);
GCNSE_API void gcnse_set_linalg_threads(int n);

GCNSE_API void gcnse_data_params_init(gcnse_data_params* p);
GCNSE_API void gcnse_gcn_params_init(gcnse_gcn_params* p);
GCNSE_API void gcnse_solve_config_init(gcnse_solve_config* c);

/* ---- scalar helpers ---- */
GCNSE_API double gcnse_loss_eval(int loss, double x);
GCNSE_API double gcnse_erf(double x);
GCNSE_API gcnse_status gcnse_snr_total(const gcnse_data_params* p, double* out);

/* ---- state evolution ---- */
typedef struct gcnse_fixed_point gcnse_fixed_point;

GCNSE_API gcnse_status gcnse_se_solve(const gcnse_data_params* dp,
                                      const gcnse_gcn_params* gp,
                                      const gcnse_solve_config* cfg,
                                      gcnse_fixed_point** out);
GCNSE_API void gcnse_fixed_point_free(gcnse_fixed_point* fp);
GCNSE_API void gcnse_fixed_point_theta(const gcnse_fixed_point* fp,
                                       double out[12]);
GCNSE_API int gcnse_fixed_point_converged(const gcnse_fixed_point* fp);
GCNSE_API int gcnse_fixed_point_iterations(const gcnse_fixed_point* fp);
GCNSE_API double gcnse_fixed_point_residual(const gcnse_fixed_point* fp);
GCNSE_API int gcnse_fixed_point_qhat_floored(const gcnse_fixed_point* fp);
/* Monte-Carlo metrics at the fixed point (same sample set as the solve). */
GCNSE_API gcnse_status gcnse_se_observables(const gcnse_fixed_point* fp,
                                            gcnse_metrics* out);

/* ---- closed forms ---- */
GCNSE_API gcnse_status gcnse_acc_large_r(const gcnse_data_params* dp,
                                         const gcnse_gcn_params* gp,
                                         double* out);
/* layout: m_w, v_w, q_w, m_sigma, v_sigma, q_sigma, mhat_w, qhat_w,
 * mhat_sigma, qhat_sigma */
GCNSE_API gcnse_status gcnse_large_r_stats(const gcnse_data_params* dp,
                                           const gcnse_gcn_params* gp,
                                           double out[10]);
GCNSE_API gcnse_status gcnse_rate_inf(const gcnse_data_params* dp, double* out);
GCNSE_API double gcnse_rate_inf_bo(void);
GCNSE_API gcnse_status gcnse_c_star(const gcnse_data_params* dp, int regime,
                                    double* out);

/* ---- Bayes-optimal baselines ---- */
GCNSE_API gcnse_status gcnse_bo_accuracy(const gcnse_data_params* dp,
                                         double tol, int max_iter, double* acc,
                                         int* converged);
GCNSE_API gcnse_status gcnse_bo_misclass(const gcnse_data_params* dp,
                                         double tol, int max_iter,
                                         double* misclass, int* converged);

/* ---- finite-size simulator ---- */
typedef struct gcnse_dataset gcnse_dataset;
typedef struct gcnse_weights gcnse_weights;

GCNSE_API gcnse_status gcnse_dataset_generate(const gcnse_data_params* dp,
                                              int n, int adjacency_mode,
                                              uint64_t seed,
                                              gcnse_dataset** out);
/* SBM graph on labels from labels_csv (one +-1 per row) with features
 * ingested from features_csv (noised by epsilon, column-normalized). */
GCNSE_API gcnse_status gcnse_dataset_semireal(const char* features_csv,
                                              const char* labels_csv,
                                              double epsilon,
                                              const gcnse_data_params* dp,
                                              int adjacency_mode,
                                              uint64_t seed,
                                              gcnse_dataset** out);
GCNSE_API gcnse_status gcnse_dataset_save(const gcnse_dataset* ds,
                                          const char* path);
GCNSE_API gcnse_status gcnse_dataset_load(const char* path,
                                          gcnse_dataset** out);
GCNSE_API void gcnse_dataset_free(gcnse_dataset* ds);
GCNSE_API int gcnse_dataset_n(const gcnse_dataset* ds);
GCNSE_API int gcnse_dataset_m(const gcnse_dataset* ds);
/* Re-slices train/test masks from the stored node permutation (nested in
 * rho). rho_test < 0 means the complement of the train set. */
GCNSE_API gcnse_status gcnse_dataset_reslice(gcnse_dataset* ds, double rho,
                                             double rho_test);

GCNSE_API gcnse_status gcnse_gcn_train(gcnse_dataset* ds,
                                       const gcnse_gcn_params* gp,
                                       double grad_tol, long max_steps,
                                       int step_rule, gcnse_weights** out);
GCNSE_API void gcnse_weights_free(gcnse_weights* w);
GCNSE_API const double* gcnse_weights_data(const gcnse_weights* w);
GCNSE_API int gcnse_weights_len(const gcnse_weights* w);
GCNSE_API gcnse_status gcnse_gcn_evaluate(const gcnse_dataset* ds,
                                          const gcnse_weights* w,
                                          const gcnse_gcn_params* gp,
                                          gcnse_metrics* out);
GCNSE_API gcnse_status gcnse_erm_subgradient_norm(gcnse_dataset* ds,
                                                  const gcnse_weights* w,
                                                  const gcnse_gcn_params* gp,
                                                  double* out);

/* ---- standalone feature ingestion ---- */
typedef struct gcnse_matrix gcnse_matrix;
GCNSE_API gcnse_status gcnse_ingest_features(const char* path, double epsilon,
                                             uint64_t seed,
                                             gcnse_matrix** out);
GCNSE_API int gcnse_matrix_rows(const gcnse_matrix* m);
GCNSE_API int gcnse_matrix_cols(const gcnse_matrix* m);
GCNSE_API const double* gcnse_matrix_data(const gcnse_matrix* m); /* col-major */
GCNSE_API void gcnse_matrix_free(gcnse_matrix* m);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GCNSE_H */
