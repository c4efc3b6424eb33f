#pragma once

#include <cstdint>

#include "cdfpoison/attacks.hpp"
#include "cdfpoison/keyset.hpp"

namespace cdfpoison {

inline constexpr double kDefaultEnumerationLimit = 1e7;

// Binomial coefficient as a double, saturating at +inf; used only to guard
// enumeration sizes.
double binomial_estimate(std::uint64_t n, std::uint64_t k);

// Exact optimal attack in the original setting. Enumerates only poison
// blocks attached to legitimate keys, directly or through chains of
// neighboring poisons; every free placement not of that shape is provably
// dominated. Throws SearchSpaceTooLarge when C(2n-2+lambda, lambda)
// exceeds `limit`. Ties resolve to the lexicographically smallest sorted
// poison sequence.
AttackReport optimal_attack(const KeySet& keys, std::uint64_t lambda,
                            double limit = kDefaultEnumerationLimit);

// Validation oracle: exhaustive maximum over all subsets of interior
// non-key integers with size at most lambda. Guarded by the total subset
// count against `limit`.
AttackReport optimal_attack_bruteforce(const KeySet& keys,
                                       std::uint64_t lambda,
                                       double limit = kDefaultEnumerationLimit);

// Exact optimal attack in the relaxed setting: maximizes the loss over all
// multiplicity vectors d on K with sum d_i = lambda (saturating the budget
// is never suboptimal). Guarded by C(n+lambda-1, lambda) against `limit`.
AttackReport optimal_attack_relaxed(const KeySet& keys, std::uint64_t lambda,
                                    double limit = kDefaultEnumerationLimit);

// Test hook: same search without the budget-saturation restriction,
// enumerating every d with sum d_i <= lambda.
AttackReport optimal_attack_relaxed_unsaturated(
    const KeySet& keys, std::uint64_t lambda,
    double limit = kDefaultEnumerationLimit);

}  // namespace cdfpoison
