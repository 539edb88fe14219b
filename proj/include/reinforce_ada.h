/* C API for the reinforce-ada adaptive sampling simulator.
 *
 * All functions return ra_status; RA_OK on success. On failure,
 * ra_last_error() returns a message describing the most recent error on the
 * calling thread. Handles are opaque and must be released with their free
 * function.
 */
#ifndef REINFORCE_ADA_H
#define REINFORCE_ADA_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ra_status {
  RA_OK = 0,
  RA_INVALID_ARGUMENT = 1,
  RA_IO_ERROR = 2,
  RA_RUNTIME_ERROR = 3
} ra_status;

typedef struct ra_prompt_set ra_prompt_set;

const char* ra_version(void);
const char* ra_last_error(void);

/* Prompt sets. Pass-rate targets lie on a uniform grid over [pass_lo,
 * pass_hi]; the counts variant draws correct-candidate counts uniformly from
 * [min_correct, max_correct] (e.g. 1..2 of 16 for the hard set). */
ra_status ra_prompt_set_generate(int num_prompts, int num_candidates,
                                 double pass_lo, double pass_hi,
                                 unsigned long long seed, ra_prompt_set** out);
ra_status ra_prompt_set_generate_counts(int num_prompts, int num_candidates,
                                        int min_correct, int max_correct,
                                        unsigned long long seed,
                                        ra_prompt_set** out);
ra_status ra_prompt_set_load(const char* path, ra_prompt_set** out);
ra_status ra_prompt_set_save(const ra_prompt_set* set, const char* path);
int ra_prompt_set_size(const ra_prompt_set* set);
void ra_prompt_set_free(ra_prompt_set* set);

/* Training. Reads a flat key=value config file and writes steps.csv,
 * ledger.csv and final_policy.txt into out_dir. */
ra_status ra_train(const char* config_path, const ra_prompt_set* set,
                   const char* out_dir);

/* Comparison across configs and seeds; writes comparison.csv into out_dir. */
ra_status ra_compare(const char* const* config_paths, int num_configs,
                     const unsigned long long* seeds, int num_seeds,
                     const ra_prompt_set* set, const char* out_dir);

/* Closed-form diagnostics. */
ra_status ra_collapse_probability(double p, int n, double* out);
ra_status ra_pass_at_k(int n, int c, int k, double* out);
/* exit_condition: "pos", "balance" or "none". */
ra_status ra_expected_pool_size(const char* exit_condition, double p,
                                int group_size_n, int samples_per_round_m,
                                int num_rounds_n, double* out);

#ifdef __cplusplus
}
#endif

#endif /* REINFORCE_ADA_H */
