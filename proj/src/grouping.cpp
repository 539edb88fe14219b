#include "ra/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ra {

GroupStats global_stats(const ResponsePool& pool) {
  if (pool.samples.empty()) throw std::invalid_argument("pool is empty");
  GroupStats stats;
  stats.pool_size = static_cast<int>(pool.samples.size());
  double sum = 0.0;
  for (const Sample& s : pool.samples) sum += s.reward;
  stats.mean_reward = sum / stats.pool_size;
  double var = 0.0;
  for (const Sample& s : pool.samples) {
    const double d = s.reward - stats.mean_reward;
    var += d * d;
  }
  stats.std_reward = std::sqrt(var / stats.pool_size);
  return stats;
}

namespace {

// Uniform draw of `take` members without replacement, preserving nothing of
// the input order beyond the partial shuffle.
std::vector<const Sample*> draw_without_replacement(
    std::vector<const Sample*>& subset, int take, RngStream& rng) {
  for (int j = 0; j < take; ++j) {
    const int pick = j + rng.uniform_int(static_cast<int>(subset.size()) - j);
    std::swap(subset[j], subset[pick]);
  }
  return {subset.begin(), subset.begin() + take};
}

}  // namespace

UpdateGroup balanced_downsample(const ResponsePool& pool, int n,
                                RngStream& rng, bool normalize_by_std,
                                double epsilon) {
  if (static_cast<int>(pool.samples.size()) < n)
    throw std::invalid_argument("pool smaller than group size");

  std::vector<const Sample*> correct, incorrect;
  for (const Sample& s : pool.samples)
    (s.reward ? correct : incorrect).push_back(&s);

  const int half = n / 2;
  int take_correct = std::min<int>(half + n % 2, static_cast<int>(correct.size()));
  int take_incorrect = std::min<int>(half, static_cast<int>(incorrect.size()));
  // Fill from the other subset if one is deficient.
  if (take_correct + take_incorrect < n) {
    const int deficit = n - take_correct - take_incorrect;
    if (take_correct < static_cast<int>(correct.size()))
      take_correct += deficit;
    else
      take_incorrect += deficit;
  }

  UpdateGroup group;
  group.prompt_id = pool.prompt_id;
  const GroupStats stats = global_stats(pool);
  group.baseline = stats.mean_reward;
  for (const Sample* s : draw_without_replacement(correct, take_correct, rng))
    group.members.push_back(*s);
  for (const Sample* s :
       draw_without_replacement(incorrect, take_incorrect, rng))
    group.members.push_back(*s);

  const double scale =
      normalize_by_std ? 1.0 / (stats.std_reward + epsilon) : 1.0;
  group.advantages.reserve(n);
  for (const Sample& s : group.members)
    group.advantages.push_back((s.reward - group.baseline) * scale);
  return group;
}

std::vector<double> grpo_advantages(std::span<const double> group_rewards,
                                    double epsilon) {
  if (group_rewards.empty()) throw std::invalid_argument("group is empty");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  const int n = static_cast<int>(group_rewards.size());
  double mean = 0.0;
  for (double r : group_rewards) mean += r;
  mean /= n;
  double var = 0.0;
  for (double r : group_rewards) var += (r - mean) * (r - mean);
  const double sd = std::sqrt(var / n);
  std::vector<double> adv(n);
  for (int i = 0; i < n; ++i) adv[i] = (group_rewards[i] - mean) / (sd + epsilon);
  return adv;
}

std::string groups_to_csv(std::span<const UpdateGroup> groups) {
  std::ostringstream out;
  out << "prompt_id,action,reward,baseline,advantage,logprob_old\n";
  char b[3][32];
  for (const UpdateGroup& g : groups)
    for (std::size_t i = 0; i < g.members.size(); ++i) {
      const Sample& s = g.members[i];
      std::snprintf(b[0], sizeof(b[0]), "%.17g", g.baseline);
      std::snprintf(b[1], sizeof(b[1]), "%.17g", g.advantages[i]);
      std::snprintf(b[2], sizeof(b[2]), "%.17g", s.logprob_old);
      out << s.prompt_id << ',' << s.action << ',' << s.reward << ',' << b[0]
          << ',' << b[1] << ',' << b[2] << '\n';
    }
  return out.str();
}

}  // namespace ra
