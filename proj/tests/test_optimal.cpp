#include <numeric>

#include "cdfpoison/attacks.hpp"
#include "cdfpoison/optimal.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace cdfpoison;
using namespace testsupport;

TEST_CASE("optimal two-point attack on the running example is {37,38}") {
  KeySet keys(fig1_keys());
  AttackReport opt = optimal_attack(keys, 2);
  CHECK(opt.poisons == std::vector<Key>{37, 38});
  AttackReport greedy = greedy_attack(keys, 2);
  CHECK(opt.mse_after > greedy.mse_after);
}

TEST_CASE("block-structure counterexample: optimal beats the segment shape") {
  KeySet keys(fig13_keys());
  AttackReport opt = optimal_attack(keys, 2);
  CHECK(opt.poisons == std::vector<Key>{8, 56});
  CHECK(opt.mse_after == doctest::Approx(8.71890728163221).epsilon(1e-12));
}

TEST_CASE("optimal with budget one matches the single-point attack") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Key> keys = random_keys(rng, 10, 100);
    KeySet ks(keys);
    AttackReport opt = optimal_attack(ks, 1);
    std::optional<Key> single = single_point_attack(ks);
    double single_mse =
        single ? fit_with_poison(ks, std::vector<Key>{*single}).mse
               : opt.mse_before;
    CHECK(opt.mse_after == doctest::Approx(single_mse).epsilon(1e-12));
  }
}

TEST_CASE("pruned enumeration equals exhaustive brute force") {
  SplitMix64 rng(32);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Key> keys = random_keys(rng, 10, 64);
    KeySet ks(keys);
    std::uint64_t lambda = 1 + rng.next() % 3;
    AttackReport pruned = optimal_attack(ks, lambda, 1e8);
    AttackReport brute = optimal_attack_bruteforce(ks, lambda, 1e8);
    CHECK(pruned.mse_after == doctest::Approx(brute.mse_after).epsilon(1e-12));
  }
}

TEST_CASE("brute force with zero budget returns the empty attack") {
  AttackReport report = optimal_attack_bruteforce(KeySet(fig1_keys()), 0);
  CHECK(report.poisons.empty());
  CHECK(report.mse_after == report.mse_before);
}

TEST_CASE("brute force on the running example finds 12 at budget one") {
  AttackReport report = optimal_attack_bruteforce(KeySet(fig1_keys()), 1);
  CHECK(report.poisons == std::vector<Key>{12});
}

TEST_CASE("search space guards trip") {
  std::vector<Key> keys(60);
  std::iota(keys.begin(), keys.end(), 0);
  for (Key& k : keys) k *= 97;
  KeySet ks(keys);
  CHECK_THROWS_AS(optimal_attack(ks, 20, 1e6), SearchSpaceTooLarge);
  CHECK_THROWS_AS(optimal_attack_bruteforce(ks, 4, 1e6), SearchSpaceTooLarge);
  CHECK_THROWS_AS(optimal_attack_relaxed(ks, 30, 1e6), SearchSpaceTooLarge);
}

TEST_CASE("relaxed optimum saturates the budget") {
  SplitMix64 rng(33);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Key> keys = random_keys(rng, 8, 64);
    KeySet ks(keys);
    std::uint64_t lambda = 1 + rng.next() % 4;
    AttackReport saturated = optimal_attack_relaxed(ks, lambda, 1e8);
    AttackReport anything = optimal_attack_relaxed_unsaturated(ks, lambda, 1e8);
    CHECK(saturated.mse_after ==
          doctest::Approx(anything.mse_after).epsilon(1e-12));
    std::uint64_t used = std::accumulate(saturated.counts.begin(),
                                         saturated.counts.end(), 0ULL);
    CHECK(used == lambda);
  }
}

TEST_CASE("relaxed optimum with zero budget is the base loss") {
  AttackReport report = optimal_attack_relaxed(KeySet(fig1_keys()), 0);
  CHECK(report.mse_after == doctest::Approx(report.mse_before));
}

TEST_CASE("relaxed optimum dominates the original optimum") {
  SplitMix64 rng(34);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Key> keys = random_keys(rng, 8, 48);
    KeySet ks(keys);
    std::uint64_t lambda = 1 + rng.next() % 3;
    AttackReport opt = optimal_attack(ks, lambda, 1e8);
    AttackReport ropt = optimal_attack_relaxed(ks, lambda, 1e8);
    CHECK(ropt.mse_after >= opt.mse_after - 1e-12 * std::max(1.0, opt.mse_after));
  }
}

TEST_CASE("relaxed enumeration matches a materialized oracle") {
  // every saturated count vector on a tiny instance, scored naively
  std::vector<Key> keys = {3, 9, 10, 27};
  KeySet ks(keys);
  std::uint64_t lambda = 3;
  double best = -1.0;
  for (std::uint64_t d0 = 0; d0 <= lambda; ++d0) {
    for (std::uint64_t d1 = 0; d0 + d1 <= lambda; ++d1) {
      for (std::uint64_t d2 = 0; d0 + d1 + d2 <= lambda; ++d2) {
        std::uint64_t d3 = lambda - d0 - d1 - d2;
        std::vector<Key> merged = keys;
        for (std::uint64_t c = 0; c < d0; ++c) merged.push_back(keys[0]);
        for (std::uint64_t c = 0; c < d1; ++c) merged.push_back(keys[1]);
        for (std::uint64_t c = 0; c < d2; ++c) merged.push_back(keys[2]);
        for (std::uint64_t c = 0; c < d3; ++c) merged.push_back(keys[3]);
        best = std::max(best, naive_union_mse({}, merged));
      }
    }
  }
  AttackReport ropt = optimal_attack_relaxed(ks, lambda);
  CHECK(ropt.mse_after == doctest::Approx(best).epsilon(1e-12));
}
