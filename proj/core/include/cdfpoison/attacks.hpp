#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdfpoison/keyset.hpp"
#include "cdfpoison/stats.hpp"

namespace cdfpoison {

enum class AttackMethod {
  single,
  greedy,
  sege_exact,
  sege_heuristic,
  sege_relaxed,
  optimal,
  optimal_relaxed,
};

std::string to_string(AttackMethod m);
std::optional<AttackMethod> attack_method_from_string(const std::string& s);

// Distinct poison integers for the original setting: strictly inside the
// open key interval and disjoint from K.
class PoisonSet {
 public:
  PoisonSet() = default;
  PoisonSet(std::vector<Key> points, const KeySet& against);

  const std::vector<Key>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<Key> points_;
};

struct AttackReport {
  AttackMethod method = AttackMethod::single;
  // Original-setting poisons. Insertion order for greedy, ascending for
  // every other method. Empty for relaxed methods.
  std::vector<Key> poisons;
  // Relaxed-setting multiplicities (counts[i] copies of key i); empty for
  // original-setting methods.
  std::vector<std::uint64_t> counts;
  double mse_before = 0.0;
  double mse_after = 0.0;
};

// Best single poison: scans the integers adjacent to legitimate keys and
// returns the one maximizing the poisoned MSE, or nothing when no candidate
// exists or none reaches the unpoisoned loss. Candidates losing exactly
// nothing are accepted. O(n) total via differential statistics.
std::optional<Key> single_point_attack(const KeySet& keys);

// Repeats the single-point attack up to `lambda` times, treating poisons
// injected so far as ordinary keys. Stops early once no candidate helps.
AttackReport greedy_attack(const KeySet& keys, std::uint64_t lambda);

}  // namespace cdfpoison
