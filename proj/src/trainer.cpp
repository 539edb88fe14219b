#include "ra/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ra {

namespace {

constexpr std::uint64_t kCollectPurpose = 0x636f6c6cULL;
constexpr std::uint64_t kDownsamplePurpose = 0x646f776eULL;

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void TrainConfig::validate_and_normalize() {
  if (algorithm == Algorithm::GrpoUniform) {
    sampler.exit_condition = ExitCondition::None;
    sampler.num_rounds_N = 1;
    sampler.samples_per_round_M = sampler.group_size_n;
  } else {
    sampler.exit_condition = algorithm == Algorithm::AdaPos
                                 ? ExitCondition::Pos
                                 : ExitCondition::Balance;
  }
  sampler.validate();
  clip.validate();
  if (learning_rate <= 0.0)
    throw std::invalid_argument("learning_rate must be > 0");
  if (num_steps < 1) throw std::invalid_argument("num_steps must be >= 1");
  if (batch_prompts < 1)
    throw std::invalid_argument("batch_prompts must be >= 1");
  if (updates_per_batch < 1)
    throw std::invalid_argument("updates_per_batch must be >= 1");
  if (!(grpo_epsilon > 0.0))
    throw std::invalid_argument("grpo_epsilon must be > 0");
  if (entropy_warmup_steps < 0)
    throw std::invalid_argument("entropy_warmup_steps must be >= 0");
}

namespace {

// Adam state for the logit matrix.
struct AdamState {
  std::vector<double> m, v;
  int t = 0;
  static constexpr double beta1 = 0.9;
  static constexpr double beta2 = 0.999;
  static constexpr double eps = 1e-8;

  void ascend(Policy& policy, const std::vector<double>& grad, double lr) {
    if (m.empty()) {
      m.assign(grad.size(), 0.0);
      v.assign(grad.size(), 0.0);
    }
    ++t;
    const double bc1 = 1.0 - std::pow(beta1, t);
    const double bc2 = 1.0 - std::pow(beta2, t);
    for (std::size_t i = 0; i < grad.size(); ++i) {
      m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
      v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
      policy.logits[i] += lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
    }
  }
};

double entropy_coeff_at_step(const TrainConfig& config, int step) {
  if (config.entropy_warmup_steps == 0) return config.clip.entropy_coeff;
  if (!config.entropy_warmup_ramp)
    return step < config.entropy_warmup_steps ? config.clip.entropy_coeff : 0.0;
  const double frac =
      1.0 - static_cast<double>(step) / config.entropy_warmup_steps;
  return config.clip.entropy_coeff * std::max(0.0, frac);
}

}  // namespace

TrainResult train(TrainConfig config, const PromptSet& prompts,
                  const StepObserver& observer) {
  config.validate_and_normalize();
  const int P = prompts.size();
  if (P < 1) throw std::invalid_argument("prompt set is empty");
  if (config.batch_prompts > P)
    throw std::invalid_argument("batch_prompts exceeds prompt set size");
  const int K = prompts.prompts.front().num_candidates;

  TrainResult result;
  result.samples_per_round_M = config.sampler.samples_per_round_M;
  Policy policy = Policy::uniform(P, K);
  AdamState adam;

  for (int step = 0; step < config.num_steps; ++step) {
    // Round-robin batch without replacement per epoch.
    std::vector<int> batch(config.batch_prompts);
    const int start =
        static_cast<int>((static_cast<long long>(step) * config.batch_prompts) % P);
    for (int i = 0; i < config.batch_prompts; ++i) batch[i] = (start + i) % P;

    const Policy old_policy = policy;
    const std::uint64_t step_seed =
        stream_key(config.seed, kCollectPurpose, static_cast<std::uint64_t>(step));
    CollectResult collected =
        adaptive_collect(policy, prompts, batch, config.sampler, step_seed);

    StepRecord record;
    record.step = step;
    record.samples_used = collected.ledger.total_samples;
    record.unresolved_count =
        static_cast<int>(collected.ledger.unresolved_prompt_ids.size());
    record.resolved_round_histogram = collected.ledger.resolved_within;
    long long reward_sum = 0;
    for (const ResponsePool& pool : collected.pools)
      for (const Sample& s : pool.samples) reward_sum += s.reward;
    record.mean_train_reward =
        static_cast<double>(reward_sum) / collected.ledger.total_samples;

    // Batch construction. GRPO keeps every group (uniform groups carry zero
    // advantages, the signal-collapse regime under study); the adaptive
    // variants apply passive filtering to unresolved uniform pools.
    UpdateBatch update_batch;
    update_batch.old_policy_snapshot = old_policy;
    if (config.algorithm == Algorithm::GrpoUniform) {
      for (const ResponsePool& pool : collected.pools) {
        UpdateGroup group;
        group.prompt_id = pool.prompt_id;
        group.members = pool.samples;
        std::vector<double> rewards;
        rewards.reserve(pool.samples.size());
        for (const Sample& s : pool.samples)
          rewards.push_back(static_cast<double>(s.reward));
        group.advantages = grpo_advantages(rewards, config.grpo_epsilon);
        group.baseline = global_stats(pool).mean_reward;
        update_batch.groups.push_back(std::move(group));
      }
      record.prompts_eligible = static_cast<int>(collected.pools.size());
    } else {
      const std::vector<int> eligible = passive_filter(collected);
      std::vector<bool> keep(P, false);
      for (int pid : eligible) keep[pid] = true;
      for (const ResponsePool& pool : collected.pools) {
        if (!keep[pool.prompt_id]) continue;
        RngStream rng(stream_key(config.seed, kDownsamplePurpose,
                                 static_cast<std::uint64_t>(pool.prompt_id),
                                 static_cast<std::uint64_t>(step)));
        update_batch.groups.push_back(balanced_downsample(
            pool, config.sampler.group_size_n, rng,
            config.normalize_adv_by_std, config.grpo_epsilon));
      }
      record.prompts_eligible = static_cast<int>(eligible.size());
    }
    if (update_batch.groups.empty())
      throw std::runtime_error("every prompt in the step was filtered out");

    for (const UpdateGroup& g : update_batch.groups) {
      const bool all_zero =
          std::all_of(g.advantages.begin(), g.advantages.end(),
                      [](double a) { return a == 0.0; });
      record.zero_advantage_groups += all_zero ? 1 : 0;
    }

    ClipConfig step_clip = config.clip;
    step_clip.entropy_coeff = entropy_coeff_at_step(config, step);
    for (int e = 0; e < config.updates_per_batch; ++e) {
      ObjectiveResult obj = clipped_objective(update_batch, policy, step_clip);
      if (config.optimizer == Optimizer::Adam)
        adam.ascend(policy, obj.gradient, config.learning_rate);
      else
        for (std::size_t i = 0; i < policy.logits.size(); ++i)
          policy.logits[i] += config.learning_rate * obj.gradient[i];
    }

    double j = 0.0, h = 0.0;
    for (const Prompt& prompt : prompts.prompts) {
      j += expected_reward(policy, prompt);
      h += policy_entropy(policy, prompt);
    }
    record.expected_reward = j / P;
    record.mean_entropy = h / P;

    for (std::size_t t = 0; t < collected.ledger.active_per_round.size(); ++t)
      result.ledger_rows.emplace_back(step, static_cast<int>(t + 1),
                                      collected.ledger.active_per_round[t]);
    if (observer) observer(step, old_policy, record);
    result.records.push_back(std::move(record));
  }
  result.final_policy = std::move(policy);
  return result;
}

ComparisonReport compare_runs(const std::vector<TrainConfig>& configs,
                              const std::vector<std::string>& config_names,
                              const PromptSet& prompts,
                              const std::vector<std::uint64_t>& seeds) {
  if (configs.size() < 2 || seeds.size() < 2)
    throw std::invalid_argument("need >= 2 configs and >= 2 seeds");
  if (config_names.size() != configs.size())
    throw std::invalid_argument("config_names size mismatch");

  ComparisonReport report;
  report.config_names = config_names;
  report.seeds = seeds;
  const int C = static_cast<int>(configs.size());
  const int S = static_cast<int>(seeds.size());

  // [config][seed][step]
  std::vector<std::vector<std::vector<double>>> curves(C);
  for (int c = 0; c < C; ++c) {
    curves[c].resize(S);
    for (int s = 0; s < S; ++s) {
      TrainConfig cfg = configs[c];
      cfg.seed = seeds[s];
      const TrainResult run = train(cfg, prompts);
      curves[c][s].reserve(run.records.size());
      for (const StepRecord& r : run.records)
        curves[c][s].push_back(r.expected_reward);
    }
  }

  report.mean_expected_reward.resize(C);
  report.std_expected_reward.resize(C);
  report.auc.resize(C);
  report.final_reward.resize(C);
  report.auc_delta.resize(C);
  report.final_delta.resize(C);
  for (int c = 0; c < C; ++c) {
    const std::size_t T = curves[c][0].size();
    report.mean_expected_reward[c].resize(T);
    report.std_expected_reward[c].resize(T);
    for (std::size_t t = 0; t < T; ++t) {
      double mean = 0.0;
      for (int s = 0; s < S; ++s) mean += curves[c][s][t];
      mean /= S;
      double var = 0.0;
      for (int s = 0; s < S; ++s) {
        const double d = curves[c][s][t] - mean;
        var += d * d;
      }
      report.mean_expected_reward[c][t] = mean;
      report.std_expected_reward[c][t] = std::sqrt(var / S);
    }
    for (int s = 0; s < S; ++s) {
      double auc = 0.0;
      for (double v : curves[c][s]) auc += v;
      report.auc[c].push_back(auc);
      report.final_reward[c].push_back(curves[c][s].back());
    }
  }
  for (int c = 0; c < C; ++c)
    for (int s = 0; s < S; ++s) {
      report.auc_delta[c].push_back(report.auc[c][s] - report.auc[0][s]);
      report.final_delta[c].push_back(report.final_reward[c][s] -
                                      report.final_reward[0][s]);
    }
  return report;
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "grpo_uniform") return Algorithm::GrpoUniform;
  if (s == "ada_pos") return Algorithm::AdaPos;
  if (s == "ada_balance") return Algorithm::AdaBalance;
  throw std::invalid_argument("unknown algorithm: " + s);
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::GrpoUniform: return "grpo_uniform";
    case Algorithm::AdaPos: return "ada_pos";
    case Algorithm::AdaBalance: return "ada_balance";
  }
  return "grpo_uniform";
}

TrainConfig parse_train_config(const std::string& text) {
  TrainConfig config;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      const auto b2 = s.find_first_not_of(" \t");
      const auto e2 = s.find_last_not_of(" \t");
      s = b2 == std::string::npos ? "" : s.substr(b2, e2 - b2 + 1);
    };
    trim(key);
    trim(value);

    if (key == "algorithm") config.algorithm = algorithm_from_string(value);
    else if (key == "sampler.group_size_n") config.sampler.group_size_n = std::stoi(value);
    else if (key == "sampler.samples_per_round_M") config.sampler.samples_per_round_M = std::stoi(value);
    else if (key == "sampler.num_rounds_N") config.sampler.num_rounds_N = std::stoi(value);
    else if (key == "sampler.exit_condition") config.sampler.exit_condition = exit_condition_from_string(value);
    else if (key == "clip.eps_low") config.clip.eps_low = std::stod(value);
    else if (key == "clip.eps_high") config.clip.eps_high = std::stod(value);
    else if (key == "clip.entropy_coeff") config.clip.entropy_coeff = std::stod(value);
    else if (key == "learning_rate") config.learning_rate = std::stod(value);
    else if (key == "num_steps") config.num_steps = std::stoi(value);
    else if (key == "batch_prompts") config.batch_prompts = std::stoi(value);
    else if (key == "seed") config.seed = std::stoull(value);
    else if (key == "updates_per_batch") config.updates_per_batch = std::stoi(value);
    else if (key == "optimizer") {
      if (value == "sgd") config.optimizer = Optimizer::Sgd;
      else if (value == "adam") config.optimizer = Optimizer::Adam;
      else throw std::runtime_error("unknown optimizer: " + value);
    }
    else if (key == "normalize_adv_by_std") config.normalize_adv_by_std = std::stoi(value) != 0;
    else if (key == "grpo_epsilon") config.grpo_epsilon = std::stod(value);
    else if (key == "entropy_warmup_steps") config.entropy_warmup_steps = std::stoi(value);
    else if (key == "entropy_warmup_ramp") config.entropy_warmup_ramp = std::stoi(value) != 0;
    else throw std::runtime_error("unknown config key: " + key);
  }
  return config;
}

TrainConfig load_train_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_train_config(buf.str());
}

std::string steps_to_csv(const std::vector<StepRecord>& records) {
  std::ostringstream out;
  out << "step,mean_train_reward,expected_reward,mean_entropy,samples_used,"
         "prompts_eligible,zero_advantage_groups,unresolved_count,"
         "resolved_round_histogram\n";
  for (const StepRecord& r : records) {
    out << r.step << ',' << fmt17(r.mean_train_reward) << ','
        << fmt17(r.expected_reward) << ',' << fmt17(r.mean_entropy) << ','
        << r.samples_used << ',' << r.prompts_eligible << ','
        << r.zero_advantage_groups << ',' << r.unresolved_count << ',';
    for (std::size_t i = 0; i < r.resolved_round_histogram.size(); ++i)
      out << (i ? ";" : "") << r.resolved_round_histogram[i];
    out << '\n';
  }
  return out.str();
}

std::string train_ledger_to_csv(const TrainResult& result) {
  std::ostringstream out;
  out << "step,round,active_count,samples_this_round\n";
  for (const auto& [step, round, active] : result.ledger_rows)
    out << step << ',' << round << ',' << active << ','
        << static_cast<long long>(active) * result.samples_per_round_M << '\n';
  return out.str();
}

std::string policy_to_text(const Policy& policy) {
  std::ostringstream out;
  for (int p = 0; p < policy.num_prompts; ++p) {
    const auto row = policy.row(p);
    for (int k = 0; k < policy.num_candidates; ++k)
      out << (k ? " " : "") << fmt17(row[k]);
    out << '\n';
  }
  return out.str();
}

std::string comparison_to_csv(const ComparisonReport& report) {
  std::ostringstream out;
  out << "record_type,config,seed,step,value\n";
  const int C = static_cast<int>(report.config_names.size());
  const int S = static_cast<int>(report.seeds.size());
  for (int c = 0; c < C; ++c)
    for (std::size_t t = 0; t < report.mean_expected_reward[c].size(); ++t) {
      out << "step_mean," << report.config_names[c] << ",," << t << ','
          << fmt17(report.mean_expected_reward[c][t]) << '\n';
      out << "step_std," << report.config_names[c] << ",," << t << ','
          << fmt17(report.std_expected_reward[c][t]) << '\n';
    }
  for (int c = 0; c < C; ++c)
    for (int s = 0; s < S; ++s) {
      out << "auc," << report.config_names[c] << ',' << report.seeds[s] << ",,"
          << fmt17(report.auc[c][s]) << '\n';
      out << "final_reward," << report.config_names[c] << ','
          << report.seeds[s] << ",," << fmt17(report.final_reward[c][s])
          << '\n';
      out << "auc_delta_vs_first," << report.config_names[c] << ','
          << report.seeds[s] << ",," << fmt17(report.auc_delta[c][s]) << '\n';
      out << "final_delta_vs_first," << report.config_names[c] << ','
          << report.seeds[s] << ",," << fmt17(report.final_delta[c][s])
          << '\n';
    }
  return out.str();
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out << content;
}

}  // namespace

void run_train_to_dir(const TrainConfig& config, const PromptSet& prompts,
                      const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const TrainResult result = train(config, prompts);
  write_file(out_dir + "/steps.csv", steps_to_csv(result.records));
  write_file(out_dir + "/ledger.csv", train_ledger_to_csv(result));
  write_file(out_dir + "/final_policy.txt", policy_to_text(result.final_policy));
}

void run_compare_to_dir(const std::vector<TrainConfig>& configs,
                        const std::vector<std::string>& config_names,
                        const PromptSet& prompts,
                        const std::vector<std::uint64_t>& seeds,
                        const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const ComparisonReport report =
      compare_runs(configs, config_names, prompts, seeds);
  write_file(out_dir + "/comparison.csv", comparison_to_csv(report));
}

}  // namespace ra
