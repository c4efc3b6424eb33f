#include "cdfpoison/dispatch.hpp"

#include "cdfpoison/seg_e.hpp"

namespace cdfpoison {

AttackReport run_attack(const KeySet& keys, AttackMethod method,
                        std::uint64_t lambda, double limit) {
  switch (method) {
    case AttackMethod::single: {
      AttackReport report;
      report.method = AttackMethod::single;
      report.mse_before = fit(RankedMultiset(keys.keys())).mse;
      report.mse_after = report.mse_before;
      if (auto p = single_point_attack(keys)) {
        report.poisons = {*p};
        report.mse_after = fit_with_poison(keys, report.poisons).mse;
      }
      return report;
    }
    case AttackMethod::greedy:
      return greedy_attack(keys, lambda);
    case AttackMethod::sege_exact:
      return sege_exact_original(keys, lambda);
    case AttackMethod::sege_heuristic:
      return sege_heuristic_original(keys, lambda);
    case AttackMethod::sege_relaxed:
      return sege_exact_relaxed(keys, lambda).report;
    case AttackMethod::optimal:
      return optimal_attack(keys, lambda, limit);
    case AttackMethod::optimal_relaxed:
      return optimal_attack_relaxed(keys, lambda, limit);
  }
  throw Error("unknown attack method");
}

}  // namespace cdfpoison
