#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ra/analysis.hpp"
#include "ra/env.hpp"
#include "ra/objective.hpp"
#include "ra/sampler.hpp"

namespace ra {

enum class Algorithm { GrpoUniform, AdaPos, AdaBalance };
enum class Optimizer { Sgd, Adam };

struct TrainConfig {
  Algorithm algorithm = Algorithm::AdaBalance;
  SamplerConfig sampler;
  ClipConfig clip;
  double learning_rate = 0.1;
  int num_steps = 300;
  int batch_prompts = 64;
  std::uint64_t seed = 1;
  int updates_per_batch = 1;  // E

  // Extras beyond the core knobs, all defaulted.
  Optimizer optimizer = Optimizer::Sgd;
  bool normalize_adv_by_std = false;  // sigma ablation on the adaptive path
  double grpo_epsilon = 1e-6;
  int entropy_warmup_steps = 0;   // 0 = coeff always applies
  bool entropy_warmup_ramp = false;

  // Also forces GrpoUniform's sampler shape (exit None, N=1, M=n).
  void validate_and_normalize();
};

struct StepRecord {
  int step = 0;
  double mean_train_reward = 0.0;  // over all generated samples this step
  double expected_reward = 0.0;    // analytic J(theta) over the prompt set
  double mean_entropy = 0.0;
  long long samples_used = 0;
  int prompts_eligible = 0;
  int zero_advantage_groups = 0;
  int unresolved_count = 0;
  std::vector<int> resolved_round_histogram;
};

// Observer sees the pre-update policy for each step (diagnostics only).
using StepObserver =
    std::function<void(int step, const Policy& policy_before_update,
                       const StepRecord& record)>;

struct TrainResult {
  std::vector<StepRecord> records;
  Policy final_policy;
  // Per-step ledgers flattened: (step, round, active_count).
  std::vector<std::tuple<int, int, int>> ledger_rows;
  int samples_per_round_M = 0;
};

TrainResult train(TrainConfig config, const PromptSet& prompts,
                  const StepObserver& observer = nullptr);

struct ComparisonReport {
  std::vector<std::string> config_names;
  std::vector<std::uint64_t> seeds;
  // [config][step]
  std::vector<std::vector<double>> mean_expected_reward;
  std::vector<std::vector<double>> std_expected_reward;
  // [config][seed]
  std::vector<std::vector<double>> auc;
  std::vector<std::vector<double>> final_reward;
  // Paired per-seed deltas vs config 0: [config][seed]
  std::vector<std::vector<double>> auc_delta;
  std::vector<std::vector<double>> final_delta;
};

ComparisonReport compare_runs(const std::vector<TrainConfig>& configs,
                              const std::vector<std::string>& config_names,
                              const PromptSet& prompts,
                              const std::vector<std::uint64_t>& seeds);

// Flat key=value config file mirroring TrainConfig (dotted keys for the
// nested sampler.* / clip.* fields). Unknown keys are rejected.
TrainConfig parse_train_config(const std::string& text);
TrainConfig load_train_config(const std::string& path);

std::string steps_to_csv(const std::vector<StepRecord>& records);
std::string train_ledger_to_csv(const TrainResult& result);
std::string policy_to_text(const Policy& policy);  // row-major, %.17g
std::string comparison_to_csv(const ComparisonReport& report);

// Runs training and writes steps.csv, ledger.csv, final_policy.txt.
void run_train_to_dir(const TrainConfig& config, const PromptSet& prompts,
                      const std::string& out_dir);
// Runs the comparison and writes comparison.csv.
void run_compare_to_dir(const std::vector<TrainConfig>& configs,
                        const std::vector<std::string>& config_names,
                        const PromptSet& prompts,
                        const std::vector<std::uint64_t>& seeds,
                        const std::string& out_dir);

Algorithm algorithm_from_string(const std::string& s);
std::string to_string(Algorithm a);

}  // namespace ra
