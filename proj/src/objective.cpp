#include "ra/objective.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ra {

void ClipConfig::validate() const {
  if (!(eps_low > 0.0 && eps_low < 1.0))
    throw std::invalid_argument("eps_low must lie in (0,1)");
  if (!(eps_high > 0.0)) throw std::invalid_argument("eps_high must be > 0");
  if (entropy_coeff < 0.0)
    throw std::invalid_argument("entropy_coeff must be >= 0");
}

int UpdateBatch::total_samples() const {
  int total = 0;
  for (const UpdateGroup& g : groups)
    total += static_cast<int>(g.members.size());
  return total;
}

bool UpdateBatch::consistent_with_snapshot() const {
  for (const UpdateGroup& g : groups)
    for (const Sample& s : g.members) {
      const double lp =
          log_softmax_at(old_policy_snapshot.row(s.prompt_id), s.action);
      if (std::abs(lp - s.logprob_old) > 1e-9) return false;
    }
  return true;
}

double importance_ratio(const Policy& policy, const Sample& sample) {
  const double lp = log_softmax_at(policy.row(sample.prompt_id), sample.action);
  return std::exp(lp - sample.logprob_old);
}

ObjectiveResult clipped_objective(const UpdateBatch& batch,
                                  const Policy& policy,
                                  const ClipConfig& clip) {
  clip.validate();
  if (batch.groups.empty()) throw std::invalid_argument("batch is empty");

  const int P = policy.num_prompts;
  const int K = policy.num_candidates;
  ObjectiveResult result;
  result.gradient.assign(static_cast<std::size_t>(P) * K, 0.0);

  const int total = batch.total_samples();
  const double inv_total = 1.0 / total;
  std::vector<double> probs(K);
  std::set<int> batch_prompts;

  for (const UpdateGroup& group : batch.groups) {
    batch_prompts.insert(group.prompt_id);
    softmax(policy.row(group.prompt_id), probs);
    double* g = result.gradient.data() +
                static_cast<std::size_t>(group.prompt_id) * K;
    for (std::size_t i = 0; i < group.members.size(); ++i) {
      const Sample& s = group.members[i];
      const double adv = group.advantages[i];
      const double rho = probs[s.action] / std::exp(s.logprob_old);
      const double clipped_rho =
          std::clamp(rho, 1.0 - clip.eps_low, 1.0 + clip.eps_high);
      const double unclipped = rho * adv;
      const double clipped = clipped_rho * adv;
      result.loss += std::min(unclipped, clipped) * inv_total;
      // The min picks the clipped constant branch only when clipped < unclipped.
      if (unclipped <= clipped) {
        const double w = rho * adv * inv_total;
        for (int k = 0; k < K; ++k) g[k] -= w * probs[k];
        g[s.action] += w;
      }
    }
  }

  if (clip.entropy_coeff > 0.0) {
    const double inv_np = 1.0 / static_cast<double>(batch_prompts.size());
    for (int pid : batch_prompts) {
      softmax(policy.row(pid), probs);
      double h = 0.0;
      for (double q : probs)
        if (q > 0.0) h -= q * std::log(q);
      result.loss += clip.entropy_coeff * h * inv_np;
      double* g = result.gradient.data() + static_cast<std::size_t>(pid) * K;
      // dH/dlogit_k = -q_k (log q_k + H)
      for (int k = 0; k < K; ++k)
        if (probs[k] > 0.0)
          g[k] -= clip.entropy_coeff * inv_np * probs[k] *
                  (std::log(probs[k]) + h);
    }
  }

  return result;
}

}  // namespace ra
