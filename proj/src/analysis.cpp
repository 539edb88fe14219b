#include "ra/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace ra {

double collapse_probability(double p, int n) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  return std::pow(p, n) + std::pow(1.0 - p, n);
}

CollapseProfile collapse_profile(double p,
                                 const std::vector<int>& group_sizes) {
  CollapseProfile profile;
  profile.pass_rate = p;
  profile.group_sizes = group_sizes;
  profile.collapse_probs.reserve(group_sizes.size());
  for (int n : group_sizes)
    profile.collapse_probs.push_back(collapse_probability(p, n));
  return profile;
}

double pass_at_k(int n, int c, int k) {
  if (c < 0 || c > n) throw std::invalid_argument("need 0 <= c <= n");
  if (k < 1 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  if (n - c < k) return 1.0;
  // 1 - prod_{j=0..k-1} (n-c-j)/(n-j)
  double q = 1.0;
  for (int j = 0; j < k; ++j)
    q *= static_cast<double>(n - c - j) / static_cast<double>(n - j);
  return 1.0 - q;
}

namespace {

// log C(M,s) p^s (1-p)^(M-s) without overflow; M is small here so the direct
// product is fine.
double binom_pmf(int M, int s, double p) {
  double coeff = 1.0;
  for (int j = 0; j < s; ++j)
    coeff *= static_cast<double>(M - j) / static_cast<double>(j + 1);
  return coeff * std::pow(p, s) * std::pow(1.0 - p, M - s);
}

double expected_pool_size_balance(double p, const SamplerConfig& config) {
  const int quota = config.group_size_n / 2;
  const int M = config.samples_per_round_M;
  // State (c, i) capped at the quota; exit once both hit it. dist holds the
  // probability of each still-active state entering the round.
  std::vector<std::vector<double>> dist(
      quota + 1, std::vector<double>(quota + 1, 0.0));
  dist[0][0] = 1.0;
  double expected = 0.0;
  for (int round = 1; round <= config.num_rounds_N; ++round) {
    double active_mass = 0.0;
    for (const auto& row : dist)
      for (double m : row) active_mass += m;
    expected += M * active_mass;

    std::vector<std::vector<double>> next(
        quota + 1, std::vector<double>(quota + 1, 0.0));
    for (int c = 0; c <= quota; ++c)
      for (int i = 0; i <= quota; ++i) {
        const double mass = dist[c][i];
        if (mass == 0.0) continue;
        for (int s = 0; s <= M; ++s) {
          const int nc = std::min(c + s, quota);
          const int ni = std::min(i + (M - s), quota);
          if (nc == quota && ni == quota) continue;  // resolved
          next[nc][ni] += mass * binom_pmf(M, s, p);
        }
      }
    dist = std::move(next);
  }
  return expected;
}

}  // namespace

double expected_pool_size(double p, const SamplerConfig& config) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0,1)");
  config.validate();
  const int M = config.samples_per_round_M;
  switch (config.exit_condition) {
    case ExitCondition::None:
      return static_cast<double>(M);
    case ExitCondition::Pos: {
      // M * sum_t (1-p)^{M(t-1)}, truncated at N.
      double expected = 0.0;
      for (int t = 1; t <= config.num_rounds_N; ++t)
        expected += M * std::pow(1.0 - p, static_cast<double>(M) * (t - 1));
      return expected;
    }
    case ExitCondition::Balance:
      return expected_pool_size_balance(p, config);
  }
  return 0.0;
}

std::vector<std::pair<double, double>> reward_entropy_trace(
    const std::vector<double>& mean_entropy,
    const std::vector<double>& expected_reward) {
  if (mean_entropy.size() != expected_reward.size() || mean_entropy.empty())
    throw std::invalid_argument("series must be non-empty and aligned");
  std::vector<std::pair<double, double>> trace;
  trace.reserve(mean_entropy.size());
  for (std::size_t i = 0; i < mean_entropy.size(); ++i)
    trace.emplace_back(mean_entropy[i], expected_reward[i]);
  return trace;
}

}  // namespace ra
