#pragma once

#include <span>
#include <string>
#include <vector>

#include "ra/sampler.hpp"

namespace ra {

// Baseline statistics over the FULL pool, not any subset.
struct GroupStats {
  double mean_reward = 0.0;
  double std_reward = 0.0;  // population form
  int pool_size = 0;
};

// Fixed-size downsampled group per prompt with its global-mean baseline.
struct UpdateGroup {
  int prompt_id = 0;
  std::vector<Sample> members;      // length exactly n
  double baseline = 0.0;            // global mean over the source pool
  std::vector<double> advantages;   // aligned with members
};

GroupStats global_stats(const ResponsePool& pool);

// Targets n/2 correct + n/2 incorrect drawn uniformly without replacement
// from each outcome subset; a deficient subset contributes all its members
// and the rest is filled from the other. Advantage = reward - global mean;
// with normalize_by_std the GRPO-style sigma division is applied (ablation).
UpdateGroup balanced_downsample(const ResponsePool& pool, int n,
                                RngStream& rng, bool normalize_by_std = false,
                                double epsilon = 1e-6);

// GRPO advantage over the group only: (r_i - mean) / (std + epsilon).
std::vector<double> grpo_advantages(std::span<const double> group_rewards,
                                    double epsilon);

// prompt_id,action,reward,baseline,advantage,logprob_old
std::string groups_to_csv(std::span<const UpdateGroup> groups);

}  // namespace ra
