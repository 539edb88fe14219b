#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ra/env.hpp"

namespace ra {

// None = uniform baseline: exactly one round, no elimination.
enum class ExitCondition { None, Pos, Balance };

struct SamplerConfig {
  int group_size_n = 4;
  int samples_per_round_M = 4;
  int num_rounds_N = 8;
  ExitCondition exit_condition = ExitCondition::Balance;

  // Throws std::invalid_argument on violation.
  void validate() const;
};

// All samples collected for one prompt across adaptive rounds.
struct ResponsePool {
  int prompt_id = 0;
  std::vector<Sample> samples;              // collection order
  std::optional<int> resolved_round;        // 1-based; absent if never fired

  int correct_count() const;
  int incorrect_count() const;
  bool uniform_rewards() const;  // all 0 or all 1
};

// Accounting backbone for overhead analysis.
struct BudgetLedger {
  std::vector<int> active_per_round;   // active-set size entering each round
  long long total_samples = 0;
  std::vector<int> unresolved_prompt_ids;
  std::vector<int> resolved_within;    // resolved_within[t-1] = count at round t
};

struct CollectResult {
  std::vector<ResponsePool> pools;  // aligned with the batch prompt order
  BudgetLedger ledger;
};

bool exit_pos(const ResponsePool& pool);
bool exit_balance(const ResponsePool& pool, int n);

// Algorithm: all batch prompts start active; each round draws exactly M
// samples per active prompt; a prompt is deactivated at the end of the first
// round where its exit condition holds. Prompts still active after round N
// land in unresolved_prompt_ids.
CollectResult adaptive_collect(const Policy& policy, const PromptSet& prompts,
                               std::span<const int> batch_prompt_ids,
                               const SamplerConfig& config,
                               std::uint64_t master_seed);

// Convenience: collect over the whole prompt set.
CollectResult adaptive_collect(const Policy& policy, const PromptSet& prompts,
                               const SamplerConfig& config,
                               std::uint64_t master_seed);

// Prompts whose full pool has uniform rewards AND which remained unresolved
// are excluded; everything else is eligible for training.
std::vector<int> passive_filter(const CollectResult& result);

// round,active_count,samples_this_round
std::string ledger_to_csv(const BudgetLedger& ledger, int samples_per_round_M);
// prompt_id,round,action,reward,logprob_old
std::string pools_to_csv(std::span<const ResponsePool> pools);

ExitCondition exit_condition_from_string(const std::string& s);
std::string to_string(ExitCondition e);

}  // namespace ra
