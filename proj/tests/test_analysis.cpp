#include <cmath>
#include <functional>
#include <vector>

#include <stdexcept>

#include "doctest.h"
#include "ra/analysis.hpp"
#include "ra/env.hpp"

using namespace ra;

namespace {

// Exhaustive oracle: fraction of k-subsets of {c correct, n-c incorrect}
// containing at least one correct element.
double pass_at_k_bruteforce(int n, int c, int k) {
  long long total = 0, with_correct = 0;
  std::vector<int> idx(k);
  // Enumerate k-combinations of [0, n); elements < c are the correct ones.
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    ++total;
    for (int i = 0; i < k; ++i)
      if (idx[i] < c) {
        ++with_correct;
        break;
      }
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
  return static_cast<double>(with_correct) / static_cast<double>(total);
}

// Brute-force expected pool size under Balance: enumerate per-round success
// counts with binomial weights.
double balance_pool_bruteforce(double p, int n, int M, int N) {
  const int quota = n / 2;
  auto binom = [&](int s) {
    double coeff = 1.0;
    for (int j = 0; j < s; ++j) coeff *= double(M - j) / (j + 1);
    return coeff * std::pow(p, s) * std::pow(1 - p, M - s);
  };
  double expected = 0.0;
  // Recurse over rounds tracking (correct, incorrect) and path probability.
  std::function<void(int, int, int, double)> go = [&](int round, int c, int i,
                                                      double prob) {
    if (round > N) return;
    expected += M * prob;  // this round is sampled
    for (int s = 0; s <= M; ++s) {
      const int nc = c + s, ni = i + (M - s);
      if (nc >= quota && ni >= quota) continue;  // resolved, stops sampling
      go(round + 1, nc, ni, prob * binom(s));
    }
  };
  go(1, 0, 0, 1.0);
  return expected;
}

}  // namespace

TEST_CASE("collapse_probability closed form") {
  CHECK(collapse_probability(0.5, 4) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(collapse_probability(0.5, 1) == 1.0);
  CHECK(collapse_probability(0.2, 32) ==
        doctest::Approx(std::pow(0.8, 32) + std::pow(0.2, 32)).epsilon(1e-12));
  CHECK(collapse_probability(0.0, 7) == 1.0);
  CHECK(collapse_probability(1.0, 7) == 1.0);
  CHECK_THROWS_AS(collapse_probability(1.5, 4), std::invalid_argument);
  CHECK_THROWS_AS(collapse_probability(0.5, 0), std::invalid_argument);
}

TEST_CASE("collapse profile decreases strictly in n for interior p") {
  auto profile = collapse_profile(0.3, {1, 2, 4, 8, 16, 32, 64});
  for (std::size_t i = 1; i < profile.collapse_probs.size(); ++i)
    CHECK(profile.collapse_probs[i] < profile.collapse_probs[i - 1]);
  CHECK(profile.collapse_probs.back() < 1e-4);
}

TEST_CASE("collapse + mixed probabilities are complementary") {
  for (double p : {1e-9, 1e-3, 0.5, 1.0 - 1e-3, 1.0 - 1e-9})
    for (int n : {1, 4, 32}) {
      const double mixed = 1.0 - std::pow(p, n) - std::pow(1 - p, n);
      CHECK(collapse_probability(p, n) + mixed ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("pass_at_k trivial and derived values") {
  for (int k = 1; k <= 4; ++k) {
    CHECK(pass_at_k(4, 4, k) == 1.0);
    CHECK(pass_at_k(4, 0, k) == 0.0);
  }
  CHECK(pass_at_k(10, 3, 2) == doctest::Approx(1.0 - 21.0 / 45).epsilon(1e-12));
  CHECK(pass_at_k(10, 3, 2) ==
        doctest::Approx(pass_at_k_bruteforce(10, 3, 2)).epsilon(1e-12));
  CHECK_THROWS_AS(pass_at_k(4, 2, 5), std::invalid_argument);
  CHECK_THROWS_AS(pass_at_k(4, 5, 2), std::invalid_argument);
}

TEST_CASE("pass_at_k identities and monotonicity") {
  for (int n = 1; n <= 10; ++n)
    for (int c = 0; c <= n; ++c) {
      CHECK(pass_at_k(n, c, 1) ==
            doctest::Approx(static_cast<double>(c) / n).epsilon(1e-12));
      for (int k = 2; k <= n; ++k)
        CHECK(pass_at_k(n, c, k) >= pass_at_k(n, c, k - 1) - 1e-15);
      if (c > 0)
        for (int k = 1; k <= n; ++k)
          CHECK(pass_at_k(n, c, k) >= pass_at_k(n, c - 1, k) - 1e-15);
    }
}

TEST_CASE("expected_pool_size Pos closed form") {
  SamplerConfig pos{4, 4, 8, ExitCondition::Pos};
  CHECK(expected_pool_size(1.0 - 1e-12, pos) ==
        doctest::Approx(4.0).epsilon(1e-9));

  double series = 0.0;
  for (int t = 0; t < 8; ++t) series += 4.0 * std::pow(0.8, 4 * t);
  CHECK(expected_pool_size(0.2, pos) == doctest::Approx(series).epsilon(1e-12));
  CHECK(series == doctest::Approx(6.7697).epsilon(1e-3));
}

TEST_CASE("expected_pool_size Balance DP matches brute force for small N") {
  for (double p : {0.1, 0.35, 0.5, 0.8})
    for (int N : {1, 2, 3}) {
      SamplerConfig bal{4, 4, N, ExitCondition::Balance};
      CHECK(expected_pool_size(p, bal) ==
            doctest::Approx(balance_pool_bruteforce(p, 4, 4, N))
                .epsilon(1e-10));
    }
  SamplerConfig bal6{6, 7, 3, ExitCondition::Balance};
  CHECK(expected_pool_size(0.4, bal6) ==
        doctest::Approx(balance_pool_bruteforce(0.4, 6, 7, 3)).epsilon(1e-10));
}

TEST_CASE("Pos never samples more than Balance in expectation") {
  RngStream rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const double p = 0.05 + 0.9 * rng.uniform();
    SamplerConfig pos{4, 4 + rng.uniform_int(4), 1 + rng.uniform_int(8),
                      ExitCondition::Pos};
    SamplerConfig bal = pos;
    bal.exit_condition = ExitCondition::Balance;
    CHECK(expected_pool_size(p, pos) <= expected_pool_size(p, bal) + 1e-12);
  }
}

TEST_CASE("reward_entropy_trace projects index-wise") {
  std::vector<double> entropy{1.0, 0.9, 0.8};
  std::vector<double> reward{0.2, 0.3, 0.4};
  auto trace = reward_entropy_trace(entropy, reward);
  REQUIRE(trace.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(trace[i].first == entropy[i]);
    CHECK(trace[i].second == reward[i]);
  }
  // Constant-policy run: all points identical.
  auto flat = reward_entropy_trace({0.5, 0.5}, {0.1, 0.1});
  CHECK(flat[0] == flat[1]);
  CHECK_THROWS_AS(reward_entropy_trace({}, {}), std::invalid_argument);
}
