#include "ra/env.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ra {

int Prompt::correct_count() const {
  return static_cast<int>(
      std::count(correctness.begin(), correctness.end(), std::uint8_t{1}));
}

Policy Policy::uniform(int num_prompts, int num_candidates) {
  Policy p;
  p.num_prompts = num_prompts;
  p.num_candidates = num_candidates;
  p.logits.assign(static_cast<std::size_t>(num_prompts) * num_candidates, 0.0);
  return p;
}

void softmax(std::span<const double> logits, std::span<double> probs_out) {
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    probs_out[k] = std::exp(logits[k] - m);
    z += probs_out[k];
  }
  for (std::size_t k = 0; k < logits.size(); ++k) probs_out[k] /= z;
}

double log_softmax_at(std::span<const double> logits, int index) {
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double l : logits) z += std::exp(l - m);
  return logits[index] - m - std::log(z);
}

namespace {

Prompt make_prompt(int id, int num_candidates, int num_correct,
                   std::uint64_t seed) {
  Prompt p;
  p.id = id;
  p.num_candidates = num_candidates;
  p.correctness.assign(num_candidates, 0);
  // Partial Fisher-Yates: pick num_correct distinct positions.
  std::vector<int> idx(num_candidates);
  std::iota(idx.begin(), idx.end(), 0);
  RngStream rng = make_stream(seed, RngPurpose::MaskGen, id);
  for (int j = 0; j < num_correct; ++j) {
    const int pick = j + rng.uniform_int(num_candidates - j);
    std::swap(idx[j], idx[pick]);
    p.correctness[idx[j]] = 1;
  }
  return p;
}

}  // namespace

PromptSet generate_prompt_set(int num_prompts, int num_candidates,
                              double pass_lo, double pass_hi,
                              std::uint64_t seed) {
  if (num_prompts < 1) throw std::invalid_argument("num_prompts must be >= 1");
  if (num_candidates < 2)
    throw std::invalid_argument("num_candidates must be >= 2");
  if (!(pass_lo > 0.0 && pass_hi < 1.0 && pass_lo <= pass_hi))
    throw std::invalid_argument("pass-rate targets must lie in (0,1)");

  PromptSet set;
  set.prompts.reserve(num_prompts);
  for (int i = 0; i < num_prompts; ++i) {
    const double t =
        num_prompts == 1
            ? pass_lo
            : pass_lo + (pass_hi - pass_lo) * i / (num_prompts - 1);
    int c = static_cast<int>(std::lround(t * num_candidates));
    c = std::clamp(c, 1, num_candidates - 1);
    set.prompts.push_back(make_prompt(i, num_candidates, c, seed));
  }
  std::ostringstream spec;
  spec << "grid[" << pass_lo << "," << pass_hi << "] seed=" << seed;
  set.generation_spec = spec.str();
  return set;
}

PromptSet generate_prompt_set_counts(int num_prompts, int num_candidates,
                                     int min_correct, int max_correct,
                                     std::uint64_t seed) {
  if (num_prompts < 1) throw std::invalid_argument("num_prompts must be >= 1");
  if (num_candidates < 2)
    throw std::invalid_argument("num_candidates must be >= 2");
  if (min_correct < 1 || max_correct > num_candidates - 1 ||
      min_correct > max_correct)
    throw std::invalid_argument("correct counts must satisfy 1 <= min <= max <= K-1");

  PromptSet set;
  set.prompts.reserve(num_prompts);
  std::uint64_t chain = seed ^ 0x5bd1e995u;
  for (int i = 0; i < num_prompts; ++i) {
    const int c = min_correct +
                  static_cast<int>(splitmix64(chain) %
                                   static_cast<std::uint64_t>(max_correct -
                                                              min_correct + 1));
    set.prompts.push_back(make_prompt(i, num_candidates, c, seed));
  }
  std::ostringstream spec;
  spec << "counts[" << min_correct << "," << max_correct << "] seed=" << seed;
  set.generation_spec = spec.str();
  return set;
}

std::vector<Sample> sample_responses(const Policy& policy,
                                     const Prompt& prompt, int count,
                                     RngStream& rng, int round) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  const auto logits = policy.row(prompt.id);
  std::vector<double> probs(logits.size());
  softmax(logits, probs);

  std::vector<Sample> samples;
  samples.reserve(count);
  for (int j = 0; j < count; ++j) {
    Sample s;
    s.prompt_id = prompt.id;
    s.action = rng.categorical(probs);
    s.reward = prompt.correctness[s.action];
    s.logprob_old = log_softmax_at(logits, s.action);
    s.round = round;
    samples.push_back(s);
  }
  return samples;
}

double expected_reward(const Policy& policy, const Prompt& prompt) {
  const auto logits = policy.row(prompt.id);
  std::vector<double> probs(logits.size());
  softmax(logits, probs);
  double r = 0.0;
  for (int k = 0; k < prompt.num_candidates; ++k)
    r += probs[k] * prompt.correctness[k];
  return r;
}

std::vector<double> analytic_gradient(const Policy& policy,
                                      const PromptSet& prompts) {
  const int P = policy.num_prompts;
  const int K = policy.num_candidates;
  std::vector<double> grad(static_cast<std::size_t>(P) * K, 0.0);
  std::vector<double> probs(K);
  for (const Prompt& prompt : prompts.prompts) {
    softmax(policy.row(prompt.id), probs);
    double mean = 0.0;
    for (int k = 0; k < K; ++k) mean += probs[k] * prompt.correctness[k];
    double* g = grad.data() + static_cast<std::size_t>(prompt.id) * K;
    for (int k = 0; k < K; ++k)
      g[k] = probs[k] * (prompt.correctness[k] - mean) / P;
  }
  return grad;
}

double policy_entropy(const Policy& policy, const Prompt& prompt) {
  const auto logits = policy.row(prompt.id);
  std::vector<double> probs(logits.size());
  softmax(logits, probs);
  double h = 0.0;
  for (double q : probs)
    if (q > 0.0) h -= q * std::log(q);
  return h;
}

std::string serialize_prompt_set(const PromptSet& set) {
  std::ostringstream out;
  for (const Prompt& p : set.prompts) {
    out << p.id << '\t' << p.num_candidates << '\t';
    for (std::uint8_t b : p.correctness) out << (b ? '1' : '0');
    out << '\n';
  }
  return out.str();
}

PromptSet parse_prompt_set(const std::string& text) {
  PromptSet set;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    Prompt p;
    std::string mask;
    if (!(ls >> p.id >> p.num_candidates >> mask))
      throw std::runtime_error("malformed prompt line: " + line);
    if (static_cast<int>(mask.size()) != p.num_candidates)
      throw std::runtime_error("mask length mismatch: " + line);
    p.correctness.reserve(mask.size());
    for (char c : mask) {
      if (c != '0' && c != '1')
        throw std::runtime_error("mask must be 01-string: " + line);
      p.correctness.push_back(c == '1' ? 1 : 0);
    }
    set.prompts.push_back(std::move(p));
  }
  for (int i = 0; i < set.size(); ++i)
    if (set.prompts[i].id != i)
      throw std::runtime_error("prompt ids must be dense 0..P-1");
  return set;
}

void save_prompt_set(const PromptSet& set, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out << serialize_prompt_set(set);
}

PromptSet load_prompt_set(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for read: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_prompt_set(buf.str());
}

}  // namespace ra
