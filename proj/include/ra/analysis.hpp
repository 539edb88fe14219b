#pragma once

#include <vector>

#include "ra/sampler.hpp"

namespace ra {

struct CollapseProfile {
  double pass_rate = 0.0;
  std::vector<int> group_sizes;
  std::vector<double> collapse_probs;  // p^n + (1-p)^n per n
};

// Probability a size-n group has uniform rewards at pass rate p.
double collapse_probability(double p, int n);

CollapseProfile collapse_profile(double p, const std::vector<int>& group_sizes);

// Unbiased pass@k estimator 1 - C(n-c,k)/C(n,k), overflow-safe product form.
double pass_at_k(int n, int c, int k);

// Expected number of samples collected for one prompt at pass rate p under
// the config's exit condition, truncated at N rounds. Pos has a geometric
// closed form; Balance is exact dynamic programming over quota-capped
// (correct, incorrect) counts.
double expected_pool_size(double p, const SamplerConfig& config);

// (entropy, expected_reward) projection of a step series.
std::vector<std::pair<double, double>> reward_entropy_trace(
    const std::vector<double>& mean_entropy,
    const std::vector<double>& expected_reward);

}  // namespace ra
