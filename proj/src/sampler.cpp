#include "ra/sampler.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ra {

void SamplerConfig::validate() const {
  if (group_size_n < 2) throw std::invalid_argument("group_size_n must be >= 2");
  if (num_rounds_N < 1) throw std::invalid_argument("num_rounds_N must be >= 1");
  if (samples_per_round_M < group_size_n)
    throw std::invalid_argument("samples_per_round_M must be >= group_size_n");
  if (exit_condition == ExitCondition::Balance && group_size_n % 2 != 0)
    throw std::invalid_argument("group_size_n must be even with Balance exit");
  if (exit_condition == ExitCondition::None && num_rounds_N != 1)
    throw std::invalid_argument("uniform baseline (None) requires num_rounds_N == 1");
}

int ResponsePool::correct_count() const {
  int c = 0;
  for (const Sample& s : samples) c += s.reward;
  return c;
}

int ResponsePool::incorrect_count() const {
  return static_cast<int>(samples.size()) - correct_count();
}

bool ResponsePool::uniform_rewards() const {
  const int c = correct_count();
  return c == 0 || c == static_cast<int>(samples.size());
}

bool exit_pos(const ResponsePool& pool) { return pool.correct_count() >= 1; }

bool exit_balance(const ResponsePool& pool, int n) {
  return pool.correct_count() >= n / 2 && pool.incorrect_count() >= n / 2;
}

CollectResult adaptive_collect(const Policy& policy, const PromptSet& prompts,
                               std::span<const int> batch_prompt_ids,
                               const SamplerConfig& config,
                               std::uint64_t master_seed) {
  config.validate();
  if (batch_prompt_ids.empty())
    throw std::invalid_argument("batch must be non-empty");

  const int B = static_cast<int>(batch_prompt_ids.size());
  CollectResult result;
  result.pools.resize(B);
  result.ledger.resolved_within.assign(config.num_rounds_N, 0);

  // One stream per batch slot, consumed sequentially across rounds. Identical
  // seeds then yield identical draw sequences regardless of exit condition.
  std::vector<RngStream> streams;
  streams.reserve(B);
  std::vector<bool> active(B, true);
  for (int i = 0; i < B; ++i) {
    const int pid = batch_prompt_ids[i];
    result.pools[i].prompt_id = pid;
    streams.push_back(make_stream(master_seed, RngPurpose::Collect, pid));
  }

  for (int round = 1; round <= config.num_rounds_N; ++round) {
    const int active_count =
        static_cast<int>(std::count(active.begin(), active.end(), true));
    result.ledger.active_per_round.push_back(active_count);
    for (int i = 0; i < B; ++i) {
      if (!active[i]) continue;
      const Prompt& prompt = prompts.prompts[batch_prompt_ids[i]];
      auto drawn = sample_responses(policy, prompt, config.samples_per_round_M,
                                    streams[i], round);
      auto& pool = result.pools[i];
      pool.samples.insert(pool.samples.end(), drawn.begin(), drawn.end());
      result.ledger.total_samples += config.samples_per_round_M;

      bool done = false;
      switch (config.exit_condition) {
        case ExitCondition::None: break;
        case ExitCondition::Pos: done = exit_pos(pool); break;
        case ExitCondition::Balance:
          done = exit_balance(pool, config.group_size_n);
          break;
      }
      if (done) {
        active[i] = false;
        pool.resolved_round = round;
        ++result.ledger.resolved_within[round - 1];
      }
    }
  }
  for (int i = 0; i < B; ++i)
    if (active[i])
      result.ledger.unresolved_prompt_ids.push_back(batch_prompt_ids[i]);
  return result;
}

CollectResult adaptive_collect(const Policy& policy, const PromptSet& prompts,
                               const SamplerConfig& config,
                               std::uint64_t master_seed) {
  std::vector<int> ids(prompts.size());
  std::iota(ids.begin(), ids.end(), 0);
  return adaptive_collect(policy, prompts, ids, config, master_seed);
}

std::vector<int> passive_filter(const CollectResult& result) {
  std::vector<int> eligible;
  eligible.reserve(result.pools.size());
  for (const ResponsePool& pool : result.pools) {
    const bool unresolved = !pool.resolved_round.has_value();
    if (unresolved && pool.uniform_rewards()) continue;
    eligible.push_back(pool.prompt_id);
  }
  return eligible;
}

std::string ledger_to_csv(const BudgetLedger& ledger, int samples_per_round_M) {
  std::ostringstream out;
  out << "round,active_count,samples_this_round\n";
  for (std::size_t t = 0; t < ledger.active_per_round.size(); ++t)
    out << (t + 1) << ',' << ledger.active_per_round[t] << ','
        << static_cast<long long>(ledger.active_per_round[t]) *
               samples_per_round_M
        << '\n';
  return out.str();
}

std::string pools_to_csv(std::span<const ResponsePool> pools) {
  std::ostringstream out;
  out << "prompt_id,round,action,reward,logprob_old\n";
  char buf[32];
  for (const ResponsePool& pool : pools)
    for (const Sample& s : pool.samples) {
      std::snprintf(buf, sizeof(buf), "%.17g", s.logprob_old);
      out << s.prompt_id << ',' << s.round << ',' << s.action << ','
          << s.reward << ',' << buf << '\n';
    }
  return out.str();
}

ExitCondition exit_condition_from_string(const std::string& s) {
  if (s == "none") return ExitCondition::None;
  if (s == "pos") return ExitCondition::Pos;
  if (s == "balance") return ExitCondition::Balance;
  throw std::invalid_argument("unknown exit condition: " + s);
}

std::string to_string(ExitCondition e) {
  switch (e) {
    case ExitCondition::None: return "none";
    case ExitCondition::Pos: return "pos";
    case ExitCondition::Balance: return "balance";
  }
  return "none";
}

}  // namespace ra
