/* C interface to the preterm-birth risk modeling library.
 *
 * Every function that can fail returns a ptb_status; on failure the
 * thread-local message from ptb_last_error() describes what went wrong.
 * Objects returned through ** out-parameters are owned by the caller and
 * released with the matching _free function. Buffers returned as char** or
 * double** are released with ptb_free().
 */
#ifndef PTB_H
#define PTB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  PTB_OK = 0,
  PTB_E_INVALID = 1, /* bad argument or infeasible configuration */
  PTB_E_PARSE = 2,   /* malformed descriptor, config, or data file */
  PTB_E_IO = 3,      /* file system failure */
  PTB_E_RUNTIME = 4, /* internal failure */
} ptb_status;

const char* ptb_version(void);
const char* ptb_last_error(void);

void ptb_free(void* p);

/* ---- schema ---------------------------------------------------------- */

typedef struct ptb_schema ptb_schema;

ptb_status ptb_schema_load(const char* path, ptb_schema** out);
ptb_status ptb_schema_default(ptb_schema** out);
void ptb_schema_free(ptb_schema* schema);
/* tick is "T0", "T1" or "T3"; counts are cumulative across ticks */
ptb_status ptb_schema_feature_count(const ptb_schema* schema, const char* tick, size_t* out);

/* ---- cohort ---------------------------------------------------------- */

typedef struct ptb_cohort ptb_cohort;

ptb_status ptb_cohort_load_csv(const char* path, const ptb_schema* schema, ptb_cohort** out);
ptb_status ptb_cohort_write_csv(const ptb_cohort* cohort, const ptb_schema* schema,
                                const char* path);
void ptb_cohort_free(ptb_cohort* cohort);
size_t ptb_cohort_size(const ptb_cohort* cohort);

/* Synthetic cohort with default marginals and risk signal. */
ptb_status ptb_cohort_synth(const ptb_schema* schema, size_t n_patients, double missing_rate,
                            uint64_t seed, ptb_cohort** out);

/* ---- oversampling ---------------------------------------------------- */

/* Balances the minority class; *x_out gets n_out rows of d columns. */
ptb_status ptb_adasyn(const double* x, size_t n, size_t d, const int* y, int k, double beta,
                      uint64_t seed, double** x_out, int** y_out, size_t* n_out);

/* ---- metrics --------------------------------------------------------- */

ptb_status ptb_metrics(long tp, long fp, long tn, long fn, double* sensitivity,
                       double* specificity, double* g_mean);

/* ---- support vector machine ------------------------------------------ */

typedef struct ptb_svm_model ptb_svm_model;

/* kernel: "linear", "poly" (degree 2 or 3) or "rbf"; y entries are +1/-1;
 * class costs are balanced internally (C_pos * n_pos == C_neg * n_neg). */
ptb_status ptb_svm_train(const double* x, size_t n, size_t d, const int* y, const char* kernel,
                         int degree, double gamma, double c, ptb_svm_model** out);
ptb_status ptb_svm_decision(const ptb_svm_model* model, const double* x, size_t n, size_t d,
                            double* out);
ptb_status ptb_svm_predict(const ptb_svm_model* model, const double* x, size_t n, size_t d,
                           int* labels_out);
ptb_status ptb_svm_save(const ptb_svm_model* model, const char* path);
ptb_status ptb_svm_load(const char* path, ptb_svm_model** out);
void ptb_svm_free(ptb_svm_model* model);

/* ---- penalized logistic regression ----------------------------------- */

typedef struct ptb_glm_model ptb_glm_model;

/* alpha = 1 is the lasso, values in (0,1) mix in a ridge term. */
ptb_status ptb_glm_fit(const double* x, size_t n, size_t d, const int* y, double alpha,
                       double lambda, ptb_glm_model** out);
ptb_status ptb_glm_probabilities(const ptb_glm_model* model, const double* x, size_t n,
                                 size_t d, double* out);
ptb_status ptb_glm_predict(const ptb_glm_model* model, const double* x, size_t n, size_t d,
                           double threshold, int* labels_out);
ptb_status ptb_glm_save(const ptb_glm_model* model, const char* path);
ptb_status ptb_glm_load(const char* path, ptb_glm_model** out);
void ptb_glm_free(ptb_glm_model* model);

/* ---- rule-based risk scoring ----------------------------------------- */

typedef struct ptb_rpd_table ptb_rpd_table;

ptb_status ptb_rpd_default(const ptb_schema* schema, ptb_rpd_table** out);
ptb_status ptb_rpd_load(const char* path, const ptb_schema* schema, ptb_rpd_table** out);
void ptb_rpd_free(ptb_rpd_table* table);
ptb_status ptb_rpd_score(const ptb_rpd_table* table, const ptb_cohort* cohort,
                         const ptb_schema* schema, size_t patient, const char* tick,
                         int* score_out);

/* ---- batch entry points (back the command-line tool) ------------------ */

/* Runs the experiment config; reports land in the config's output dir.
 * jobs_override > 0 and seed_override >= 0 replace the config values;
 * format_override may be a comma list of csv/jsonl/table, or NULL. */
ptb_status ptb_run_config(const char* config_path, int jobs_override, long long seed_override,
                          const char* format_override);

/* Generates the configured synthetic cohort into out_dir as cohort.csv plus
 * schema.txt. */
ptb_status ptb_synth_to_dir(const char* config_path, const char* out_dir,
                            long long seed_override);

/* Scores every patient of a cohort CSV against the built-in point table.
 * cutoff: 7 or 13 for the two-band rule, 0 for the original three bands.
 * format: "csv", "jsonl" or "table". *out_text is malloc'd; free with
 * ptb_free. */
ptb_status ptb_rpd_score_csv(const char* cohort_csv, int cutoff, const char* tick,
                             const char* format, char** out_text);

#ifdef __cplusplus
}
#endif

#endif /* PTB_H */
