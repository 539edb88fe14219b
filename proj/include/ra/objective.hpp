#pragma once

#include <span>
#include <vector>

#include "ra/env.hpp"
#include "ra/grouping.hpp"

namespace ra {

// Asymmetric clip range (clip-higher allows eps_high > eps_low) plus an
// optional entropy bonus on the maximization objective.
struct ClipConfig {
  double eps_low = 0.2;
  double eps_high = 0.28;
  double entropy_coeff = 0.0;

  void validate() const;
};

struct UpdateBatch {
  std::vector<UpdateGroup> groups;
  Policy old_policy_snapshot;  // theta_old at collection time

  int total_samples() const;
  // Checks every member's logprob_old against the snapshot (tol 1e-9).
  bool consistent_with_snapshot() const;
};

// exp(log pi_theta(a|x) - logprob_old); one ratio per response.
double importance_ratio(const Policy& policy, const Sample& sample);

struct ObjectiveResult {
  double loss = 0.0;                // surrogate to MAXIMIZE
  std::vector<double> gradient;     // P x K, row-major
};

// Per-sample term min(rho*A, clip(rho, 1-eps_low, 1+eps_high)*A), averaged
// over all samples in the batch; clipped terms where the min selects the
// constant branch contribute zero gradient. The entropy bonus is
// entropy_coeff * mean entropy over the batch's distinct prompts.
ObjectiveResult clipped_objective(const UpdateBatch& batch,
                                  const Policy& policy,
                                  const ClipConfig& clip);

}  // namespace ra
