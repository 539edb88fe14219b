#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ra/rng.hpp"

namespace ra {

// A synthetic task: K candidate responses, each accepted or rejected by the
// verifier. The policy induces the latent pass rate.
struct Prompt {
  int id = 0;
  int num_candidates = 0;
  std::vector<std::uint8_t> correctness;  // length K, values {0,1}

  int correct_count() const;
};

struct PromptSet {
  std::vector<Prompt> prompts;
  std::string generation_spec;  // how the masks were drawn

  int size() const { return static_cast<int>(prompts.size()); }
};

// Per-prompt categorical distribution over candidates, parameterized by a
// P x K logit matrix (row-major).
struct Policy {
  int num_prompts = 0;
  int num_candidates = 0;
  std::vector<double> logits;

  static Policy uniform(int num_prompts, int num_candidates);

  std::span<const double> row(int prompt_id) const {
    return {logits.data() +
                static_cast<std::size_t>(prompt_id) * num_candidates,
            static_cast<std::size_t>(num_candidates)};
  }
  std::span<double> row(int prompt_id) {
    return {logits.data() +
                static_cast<std::size_t>(prompt_id) * num_candidates,
            static_cast<std::size_t>(num_candidates)};
  }
};

struct Sample {
  int prompt_id = 0;
  int action = 0;
  int reward = 0;           // correctness[action]
  double logprob_old = 0.0; // log prob under the sampling policy
  int round = 0;            // 1-based sampling round
};

// Numerically stable softmax / log-softmax of a logit row.
void softmax(std::span<const double> logits, std::span<double> probs_out);
double log_softmax_at(std::span<const double> logits, int index);

// Masks get round(target*K) correct bits, clamped to [1, K-1], at positions
// drawn uniformly per prompt. Targets lie on a uniform grid over
// [pass_lo, pass_hi] (constant when lo == hi).
PromptSet generate_prompt_set(int num_prompts, int num_candidates,
                              double pass_lo, double pass_hi,
                              std::uint64_t seed);

// Variant with explicit correct-candidate counts (e.g. the hard set with
// 1-2 correct of 16), drawn uniformly from [min_correct, max_correct].
PromptSet generate_prompt_set_counts(int num_prompts, int num_candidates,
                                     int min_correct, int max_correct,
                                     std::uint64_t seed);

std::vector<Sample> sample_responses(const Policy& policy,
                                     const Prompt& prompt, int count,
                                     RngStream& rng, int round = 1);

// Pass rate under the current policy: sum_k softmax(row)_k * correctness_k.
double expected_reward(const Policy& policy, const Prompt& prompt);

// Exact gradient of mean-over-prompts expected reward w.r.t. the logits:
// grad_k = (1/P) * q_k * (r_k - sum_j q_j r_j) per row.
std::vector<double> analytic_gradient(const Policy& policy,
                                      const PromptSet& prompts);

// Shannon entropy of the prompt's categorical row, in nats.
double policy_entropy(const Policy& policy, const Prompt& prompt);

// Line format: id<TAB>K<TAB>bitmask-as-01-string. Round-trips exactly.
std::string serialize_prompt_set(const PromptSet& set);
PromptSet parse_prompt_set(const std::string& text);
void save_prompt_set(const PromptSet& set, const std::string& path);
PromptSet load_prompt_set(const std::string& path);

}  // namespace ra
