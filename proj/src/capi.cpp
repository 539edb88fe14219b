#include "reinforce_ada.h"

#include <cstring>
#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

#include "ra/analysis.hpp"
#include "ra/env.hpp"
#include "ra/trainer.hpp"

namespace {

thread_local std::string g_last_error;

ra_status fail(ra_status code, const char* what) {
  g_last_error = what;
  return code;
}

// Translates C++ exceptions at the ABI boundary.
template <typename Fn>
ra_status guarded(Fn&& fn) {
  try {
    fn();
    return RA_OK;
  } catch (const std::invalid_argument& e) {
    return fail(RA_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(RA_RUNTIME_ERROR, e.what());
  }
}

const ra::PromptSet& unwrap(const ra_prompt_set* set) {
  return *reinterpret_cast<const ra::PromptSet*>(set);
}

}  // namespace

extern "C" {

const char* ra_version(void) { return "0.1.0"; }

const char* ra_last_error(void) { return g_last_error.c_str(); }

ra_status ra_prompt_set_generate(int num_prompts, int num_candidates,
                                 double pass_lo, double pass_hi,
                                 unsigned long long seed,
                                 ra_prompt_set** out) {
  if (!out) return fail(RA_INVALID_ARGUMENT, "out is null");
  return guarded([&] {
    auto* set = new ra::PromptSet(ra::generate_prompt_set(
        num_prompts, num_candidates, pass_lo, pass_hi, seed));
    *out = reinterpret_cast<ra_prompt_set*>(set);
  });
}

ra_status ra_prompt_set_generate_counts(int num_prompts, int num_candidates,
                                        int min_correct, int max_correct,
                                        unsigned long long seed,
                                        ra_prompt_set** out) {
  if (!out) return fail(RA_INVALID_ARGUMENT, "out is null");
  return guarded([&] {
    auto* set = new ra::PromptSet(ra::generate_prompt_set_counts(
        num_prompts, num_candidates, min_correct, max_correct, seed));
    *out = reinterpret_cast<ra_prompt_set*>(set);
  });
}

ra_status ra_prompt_set_load(const char* path, ra_prompt_set** out) {
  if (!path || !out) return fail(RA_INVALID_ARGUMENT, "null argument");
  try {
    auto* set = new ra::PromptSet(ra::load_prompt_set(path));
    *out = reinterpret_cast<ra_prompt_set*>(set);
    return RA_OK;
  } catch (const std::exception& e) {
    return fail(RA_IO_ERROR, e.what());
  }
}

ra_status ra_prompt_set_save(const ra_prompt_set* set, const char* path) {
  if (!set || !path) return fail(RA_INVALID_ARGUMENT, "null argument");
  try {
    ra::save_prompt_set(unwrap(set), path);
    return RA_OK;
  } catch (const std::exception& e) {
    return fail(RA_IO_ERROR, e.what());
  }
}

int ra_prompt_set_size(const ra_prompt_set* set) {
  return set ? unwrap(set).size() : 0;
}

void ra_prompt_set_free(ra_prompt_set* set) {
  delete reinterpret_cast<ra::PromptSet*>(set);
}

ra_status ra_train(const char* config_path, const ra_prompt_set* set,
                   const char* out_dir) {
  if (!config_path || !set || !out_dir)
    return fail(RA_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const ra::TrainConfig config = ra::load_train_config(config_path);
    ra::run_train_to_dir(config, unwrap(set), out_dir);
  });
}

ra_status ra_compare(const char* const* config_paths, int num_configs,
                     const unsigned long long* seeds, int num_seeds,
                     const ra_prompt_set* set, const char* out_dir) {
  if (!config_paths || !seeds || !set || !out_dir)
    return fail(RA_INVALID_ARGUMENT, "null argument");
  if (num_configs < 2 || num_seeds < 2)
    return fail(RA_INVALID_ARGUMENT, "need >= 2 configs and >= 2 seeds");
  return guarded([&] {
    std::vector<ra::TrainConfig> configs;
    std::vector<std::string> names;
    for (int i = 0; i < num_configs; ++i) {
      configs.push_back(ra::load_train_config(config_paths[i]));
      names.emplace_back(config_paths[i]);
    }
    std::vector<std::uint64_t> seed_list(seeds, seeds + num_seeds);
    ra::run_compare_to_dir(configs, names, unwrap(set), seed_list, out_dir);
  });
}

ra_status ra_collapse_probability(double p, int n, double* out) {
  if (!out) return fail(RA_INVALID_ARGUMENT, "out is null");
  return guarded([&] { *out = ra::collapse_probability(p, n); });
}

ra_status ra_pass_at_k(int n, int c, int k, double* out) {
  if (!out) return fail(RA_INVALID_ARGUMENT, "out is null");
  return guarded([&] { *out = ra::pass_at_k(n, c, k); });
}

ra_status ra_expected_pool_size(const char* exit_condition, double p,
                                int group_size_n, int samples_per_round_m,
                                int num_rounds_n, double* out) {
  if (!exit_condition || !out) return fail(RA_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    ra::SamplerConfig config;
    config.group_size_n = group_size_n;
    config.samples_per_round_M = samples_per_round_m;
    config.num_rounds_N = num_rounds_n;
    config.exit_condition = ra::exit_condition_from_string(exit_condition);
    *out = ra::expected_pool_size(p, config);
  });
}

}  // extern "C"
