#pragma once

#include "cdfpoison/attacks.hpp"
#include "cdfpoison/optimal.hpp"

namespace cdfpoison {

// Runs the named attack with budget lambda. `limit` guards the two
// enumeration-based methods only.
AttackReport run_attack(const KeySet& keys, AttackMethod method,
                        std::uint64_t lambda,
                        double limit = kDefaultEnumerationLimit);

}  // namespace cdfpoison
