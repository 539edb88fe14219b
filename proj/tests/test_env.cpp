#include <cmath>
#include <numeric>

#include <stdexcept>

#include "doctest.h"
#include "ra/env.hpp"

using namespace ra;

namespace {

Policy policy_from_rows(const std::vector<std::vector<double>>& rows) {
  Policy p;
  p.num_prompts = static_cast<int>(rows.size());
  p.num_candidates = static_cast<int>(rows.front().size());
  for (const auto& r : rows) p.logits.insert(p.logits.end(), r.begin(), r.end());
  return p;
}

Prompt prompt_with_mask(int id, std::vector<std::uint8_t> mask) {
  Prompt p;
  p.id = id;
  p.num_candidates = static_cast<int>(mask.size());
  p.correctness = std::move(mask);
  return p;
}

}  // namespace

TEST_CASE("generate_prompt_set realizes clamped rounded counts") {
  auto set = generate_prompt_set(1, 4, 0.5, 0.5, 7);
  CHECK(set.prompts[0].correct_count() == 2);

  auto tiny = generate_prompt_set(1, 10, 0.05, 0.05, 1);
  CHECK(tiny.prompts[0].correct_count() == 1);  // clamp floor

  auto grid = generate_prompt_set(256, 16, 0.05, 0.95, 3);
  for (int i = 0; i < 256; ++i) {
    const double target = 0.05 + (0.95 - 0.05) * i / 255.0;
    int expected = static_cast<int>(std::lround(target * 16));
    expected = std::max(1, std::min(15, expected));
    CHECK(grid.prompts[i].correct_count() == expected);
    CHECK(grid.prompts[i].id == i);
  }
}

TEST_CASE("generate_prompt_set rejects invalid inputs") {
  CHECK_THROWS_AS(generate_prompt_set(1, 1, 0.5, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_prompt_set(1, 4, 0.0, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_prompt_set(1, 4, 0.5, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_prompt_set(0, 4, 0.5, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_prompt_set_counts(4, 16, 0, 2, 1),
                  std::invalid_argument);
}

TEST_CASE("generate_prompt_set_counts stays in range") {
  auto hard = generate_prompt_set_counts(128, 16, 1, 2, 11);
  for (const Prompt& p : hard.prompts) {
    CHECK(p.correct_count() >= 1);
    CHECK(p.correct_count() <= 2);
  }
}

TEST_CASE("sample_responses on a near-degenerate distribution") {
  Policy pol = policy_from_rows({{50.0, 0.0, 0.0, 0.0}});
  Prompt prompt = prompt_with_mask(0, {1, 0, 0, 1});
  RngStream rng = make_stream(1, RngPurpose::Collect, 0);
  auto samples = sample_responses(pol, prompt, 5, rng);
  for (const Sample& s : samples) {
    CHECK(s.reward == 1);
    CHECK(s.action == 0);
    CHECK(s.logprob_old <= 0.0);
  }
}

TEST_CASE("sample_responses empirical mean matches pass rate") {
  Policy pol = Policy::uniform(1, 4);
  Prompt prompt = prompt_with_mask(0, {1, 1, 0, 0});
  RngStream rng = make_stream(42, RngPurpose::Collect, 0);
  auto samples = sample_responses(pol, prompt, 100000, rng);
  double mean = 0.0;
  for (const Sample& s : samples) mean += s.reward;
  mean /= samples.size();
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(mean - 0.5) < 0.005);  // 3-sigma binomial bound
}

TEST_CASE("sample_responses is deterministic given the stream key") {
  Policy pol = policy_from_rows({{0.3, -0.2, 1.1, 0.0}});
  Prompt prompt = prompt_with_mask(0, {0, 1, 1, 0});
  RngStream a = make_stream(9, RngPurpose::Collect, 0);
  RngStream b = make_stream(9, RngPurpose::Collect, 0);
  auto s1 = sample_responses(pol, prompt, 50, a);
  auto s2 = sample_responses(pol, prompt, 50, b);
  for (int i = 0; i < 50; ++i) {
    CHECK(s1[i].action == s2[i].action);
    CHECK(s1[i].logprob_old == s2[i].logprob_old);
  }
}

TEST_CASE("expected_reward symmetric cases and MC oracle") {
  Policy p4 = Policy::uniform(1, 4);
  CHECK(expected_reward(p4, prompt_with_mask(0, {1, 1, 0, 0})) ==
        doctest::Approx(0.5).epsilon(1e-12));
  Policy p10 = Policy::uniform(1, 10);
  CHECK(expected_reward(p10, prompt_with_mask(0, {0, 0, 0, 1, 0, 0, 0, 0, 0, 0})) ==
        doctest::Approx(0.1).epsilon(1e-12));

  Policy arb = policy_from_rows({{0.7, -1.2, 0.3, 2.0, -0.5, 0.1}});
  Prompt prompt = prompt_with_mask(0, {1, 0, 1, 0, 0, 1});
  const double exact = expected_reward(arb, prompt);
  RngStream rng = make_stream(5, RngPurpose::Collect, 0);
  auto samples = sample_responses(arb, prompt, 1000000, rng);
  double mean = 0.0;
  for (const Sample& s : samples) mean += s.reward;
  mean /= samples.size();
  const double sigma = std::sqrt(exact * (1 - exact) / samples.size());
  CHECK(std::abs(mean - exact) < 3 * sigma);
}

TEST_CASE("expected_reward is shift invariant") {
  Policy a = policy_from_rows({{0.2, -0.7, 1.4}});
  Policy b = policy_from_rows({{0.2 + 5.0, -0.7 + 5.0, 1.4 + 5.0}});
  Prompt prompt = prompt_with_mask(0, {1, 0, 1});
  CHECK(std::abs(expected_reward(a, prompt) - expected_reward(b, prompt)) <
        1e-12);
}

TEST_CASE("analytic_gradient hand-computed K=2 case") {
  Policy pol = Policy::uniform(1, 2);
  PromptSet set;
  set.prompts.push_back(prompt_with_mask(0, {1, 0}));
  auto grad = analytic_gradient(pol, set);
  CHECK(grad[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(grad[1] == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("analytic_gradient vanishes as the policy saturates") {
  Policy pol = policy_from_rows({{30.0, 0.0, 0.0}});
  PromptSet set;
  set.prompts.push_back(prompt_with_mask(0, {1, 0, 1}));
  auto grad = analytic_gradient(pol, set);
  double norm = 0.0;
  for (double g : grad) norm += g * g;
  CHECK(std::sqrt(norm) < 1e-10);
}

TEST_CASE("analytic_gradient matches central finite differences") {
  Policy pol = policy_from_rows({{0.4, -0.9, 1.3, 0.0, -2.1},
                                 {1.0, 0.5, -0.5, 0.2, 0.8}});
  PromptSet set;
  set.prompts.push_back(prompt_with_mask(0, {1, 0, 0, 1, 0}));
  set.prompts.push_back(prompt_with_mask(1, {0, 1, 1, 0, 0}));
  auto grad = analytic_gradient(pol, set);

  auto objective = [&](const Policy& p) {
    double j = 0.0;
    for (const Prompt& prompt : set.prompts) j += expected_reward(p, prompt);
    return j / set.size();
  };
  const double h = 1e-5;
  for (std::size_t i = 0; i < pol.logits.size(); ++i) {
    Policy plus = pol, minus = pol;
    plus.logits[i] += h;
    minus.logits[i] -= h;
    const double fd = (objective(plus) - objective(minus)) / (2 * h);
    CHECK(std::abs(fd - grad[i]) < 1e-6);
  }
}

TEST_CASE("policy_entropy known values") {
  Policy uni = Policy::uniform(1, 4);
  CHECK(policy_entropy(uni, prompt_with_mask(0, {1, 0, 0, 1})) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));

  Policy sharp = policy_from_rows({{40.0, 0.0, 0.0, 0.0}});
  CHECK(policy_entropy(sharp, prompt_with_mask(0, {1, 0, 0, 1})) < 1e-10);

  Policy half = policy_from_rows(
      {{std::log(0.5), std::log(0.25), std::log(0.25)}});
  const double expected =
      -(0.5 * std::log(0.5) + 2 * 0.25 * std::log(0.25));
  CHECK(policy_entropy(half, prompt_with_mask(0, {1, 0, 1})) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(1.0397).epsilon(1e-4));
}

TEST_CASE("prompt set serialization round-trips exactly") {
  auto set = generate_prompt_set(31, 9, 0.1, 0.9, 13);
  const std::string text = serialize_prompt_set(set);
  auto back = parse_prompt_set(text);
  REQUIRE(back.size() == set.size());
  for (int i = 0; i < set.size(); ++i) {
    CHECK(back.prompts[i].id == set.prompts[i].id);
    CHECK(back.prompts[i].num_candidates == set.prompts[i].num_candidates);
    CHECK(back.prompts[i].correctness == set.prompts[i].correctness);
  }
  CHECK(serialize_prompt_set(back) == text);
}

TEST_CASE("parse_prompt_set rejects malformed input") {
  CHECK_THROWS(parse_prompt_set("0\t4\t10\n"));       // mask too short
  CHECK_THROWS(parse_prompt_set("0\t4\t10x0\n"));     // non-binary mask
  CHECK_THROWS(parse_prompt_set("1\t4\t1000\n"));     // ids not dense
}
