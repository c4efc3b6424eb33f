#include <numeric>

#include "cdfpoison/attacks.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace cdfpoison;
using namespace testsupport;

TEST_CASE("single-point attack on the running example picks 12") {
  std::optional<Key> p = single_point_attack(KeySet(fig1_keys()));
  REQUIRE(p.has_value());
  CHECK(*p == 12);
}

TEST_CASE("single-point attack is absent when the interior is full") {
  std::vector<Key> keys(11);
  std::iota(keys.begin(), keys.end(), 0);
  CHECK_FALSE(single_point_attack(KeySet(keys)).has_value());
}

TEST_CASE("single-point attack equals exhaustive interior search") {
  // the adjacency restriction loses nothing; brute force scores every free
  // interior integer through the same evaluator
  SplitMix64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Key> keys = random_keys(rng, 10, 64);
    KeySet ks(keys);
    std::vector<Key> free_ints = interior_free_integers(keys);

    PoisonEvaluator eval(ks);
    double best_loss = -1.0;
    std::size_t t = 0;
    for (Key c : free_ints) {
      while (t < keys.size() && keys[t] < c) ++t;
      best_loss = std::max(best_loss, eval.mse_one(c, t));
    }

    std::optional<Key> p = single_point_attack(ks);
    if (!p.has_value()) {
      CHECK((free_ints.empty() || best_loss < eval.base_mse()));
      continue;
    }
    std::size_t tp = std::lower_bound(keys.begin(), keys.end(), *p) -
                     keys.begin();
    CHECK(eval.mse_one(*p, tp) == best_loss);
  }
}

TEST_CASE("greedy attack on the running example injects 12 then 10") {
  AttackReport report = greedy_attack(KeySet(fig1_keys()), 2);
  REQUIRE(report.poisons.size() == 2);
  CHECK(report.poisons[0] == 12);
  CHECK(report.poisons[1] == 10);
  CHECK(report.mse_after ==
        doctest::Approx(0.5599967700258398).epsilon(1e-12));
}

TEST_CASE("greedy attack with zero budget changes nothing") {
  AttackReport report = greedy_attack(KeySet(fig1_keys()), 0);
  CHECK(report.poisons.empty());
  CHECK(report.mse_after == report.mse_before);
}

TEST_CASE("greedy loss is monotone across rounds and respects the budget") {
  SplitMix64 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Key> keys = random_keys(rng, 12, 200);
    KeySet ks(keys);
    std::uint64_t lambda = 1 + rng.next() % 5;
    AttackReport report = greedy_attack(ks, lambda);
    CHECK(report.poisons.size() <= lambda);

    double prev = report.mse_before;
    std::vector<Key> sofar;
    for (Key p : report.poisons) {
      CHECK(p > ks.front());
      CHECK(p < ks.back());
      CHECK_FALSE(std::binary_search(keys.begin(), keys.end(), p));
      sofar.push_back(p);
      std::vector<Key> sorted = sofar;
      std::sort(sorted.begin(), sorted.end());
      double cur = fit_with_poison(ks, sorted).mse;
      CHECK(cur >= prev - 1e-12 * std::max(1.0, prev));
      prev = cur;
    }
  }
}

TEST_CASE("greedy is deterministic") {
  SplitMix64 rng(23);
  std::vector<Key> keys = random_keys(rng, 30, 5000);
  AttackReport a = greedy_attack(KeySet(keys), 6);
  AttackReport b = greedy_attack(KeySet(keys), 6);
  CHECK(a.poisons == b.poisons);
  CHECK(a.mse_after == b.mse_after);
}

TEST_CASE("poison set validation") {
  KeySet keys(fig1_keys());
  CHECK_THROWS_AS(PoisonSet({2}, keys), DegenerateInput);   // collides
  CHECK_THROWS_AS(PoisonSet({1}, keys), DegenerateInput);   // below front
  CHECK_THROWS_AS(PoisonSet({39}, keys), DegenerateInput);  // at back
  CHECK_THROWS_AS(PoisonSet({5, 5}, keys), DegenerateInput);
  CHECK(PoisonSet({10, 12}, keys).points() == std::vector<Key>{10, 12});
}
