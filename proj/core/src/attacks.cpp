#include "cdfpoison/attacks.hpp"

#include <algorithm>

namespace cdfpoison {

std::string to_string(AttackMethod m) {
  switch (m) {
    case AttackMethod::single: return "single";
    case AttackMethod::greedy: return "greedy";
    case AttackMethod::sege_exact: return "sege_exact";
    case AttackMethod::sege_heuristic: return "sege_heuristic";
    case AttackMethod::sege_relaxed: return "sege_relaxed";
    case AttackMethod::optimal: return "optimal";
    case AttackMethod::optimal_relaxed: return "optimal_relaxed";
  }
  return "unknown";
}

std::optional<AttackMethod> attack_method_from_string(const std::string& s) {
  if (s == "single") return AttackMethod::single;
  if (s == "greedy") return AttackMethod::greedy;
  if (s == "sege-exact" || s == "sege_exact") return AttackMethod::sege_exact;
  if (s == "sege-heuristic" || s == "sege_heuristic")
    return AttackMethod::sege_heuristic;
  if (s == "sege-relaxed" || s == "sege_relaxed")
    return AttackMethod::sege_relaxed;
  if (s == "optimal") return AttackMethod::optimal;
  if (s == "optimal-relaxed" || s == "optimal_relaxed")
    return AttackMethod::optimal_relaxed;
  return std::nullopt;
}

PoisonSet::PoisonSet(std::vector<Key> points, const KeySet& against)
    : points_(std::move(points)) {
  std::sort(points_.begin(), points_.end());
  const auto& k = against.keys();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (i > 0 && points_[i] == points_[i - 1]) {
      throw DegenerateInput("poison points must be distinct");
    }
    if (points_[i] <= against.front() || points_[i] >= against.back()) {
      throw DegenerateInput("poison outside the open key interval");
    }
    if (std::binary_search(k.begin(), k.end(), points_[i])) {
      throw DegenerateInput("poison collides with a legitimate key");
    }
  }
}

namespace {

// Adjacency candidates: k+1 for every key but the largest, k-1 for every
// key but the smallest, minus the keys themselves. The two source lists
// are already ascending, so one merge pass keeps the whole scan O(n).
std::vector<Key> adjacency_candidates(const KeySet& keys) {
  const auto& k = keys.keys();
  const std::size_t n = k.size();
  std::vector<Key> out;
  out.reserve(2 * n);
  std::size_t up = 0, down = 1, ki = 0;
  while (up + 1 < n || down < n) {
    Key c;
    if (up + 1 < n && (down >= n || k[up] + 1 <= k[down] - 1)) {
      c = k[up] + 1;
      if (down < n && k[down] - 1 == c) ++down;
      ++up;
    } else {
      c = k[down] - 1;
      ++down;
    }
    if (!out.empty() && out.back() == c) continue;
    while (ki < n && k[ki] < c) ++ki;
    if (ki < n && k[ki] == c) continue;
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::optional<Key> single_point_attack(const KeySet& keys) {
  std::vector<Key> cands = adjacency_candidates(keys);
  if (cands.empty()) return std::nullopt;

  PoisonEvaluator eval(keys);
  const auto& k = keys.keys();
  double best_loss = -1.0;
  Key best = 0;
  std::size_t t = 0;  // keys strictly below the current candidate
  for (Key c : cands) {
    while (t < k.size() && k[t] < c) ++t;
    double loss = eval.mse_one(c, t);
    if (loss > best_loss) {
      best_loss = loss;
      best = c;
    }
  }
  if (best_loss < eval.base_mse()) return std::nullopt;
  return best;
}

AttackReport greedy_attack(const KeySet& keys, std::uint64_t lambda) {
  AttackReport report;
  report.method = AttackMethod::greedy;
  report.mse_before = PoisonEvaluator(keys).base_mse();
  report.mse_after = report.mse_before;

  std::vector<Key> current = keys.keys();
  for (std::uint64_t round = 0; round < lambda; ++round) {
    KeySet cur(current);
    std::optional<Key> p = single_point_attack(cur);
    if (!p) break;
    report.poisons.push_back(*p);
    current.insert(std::upper_bound(current.begin(), current.end(), *p), *p);
  }

  if (!report.poisons.empty()) {
    std::vector<Key> sorted = report.poisons;
    std::sort(sorted.begin(), sorted.end());
    report.mse_after = fit_with_poison(keys, sorted).mse;
  }
  return report;
}

}  // namespace cdfpoison
