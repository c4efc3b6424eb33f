#pragma once

#include <cstdint>
#include <vector>

#include "cdfpoison/attacks.hpp"
#include "cdfpoison/keyset.hpp"
#include "cdfpoison/stats.hpp"

namespace cdfpoison {

// Segment + Endpoint configuration in the original setting: interval
// boundaries with front <= R1 < L2 <= R2 < L3 <= back. The poison set is
// every free integer inside the three closed intervals.
struct SegEOriginal {
  Key R1 = 0, L2 = 0, R2 = 0, L3 = 0;
};

// Relaxed-setting configuration: a copies of the smallest key, b copies of
// the interior key at 1-based position i, c copies of the largest key.
struct SegERelaxed {
  std::uint64_t a = 0, b = 0, c = 0;
  std::uint64_t i = 0;
};

struct SegERelaxedSolution {
  SegERelaxed config;
  AttackReport report;
};

// Real roots of c3*x^3 + c2*x^2 + c1*x + c0, ascending. Closed-form
// (trigonometric / Cardano) with one Newton polish per root; discriminants
// within 1e-12 of their own scale collapse to repeated roots.
std::vector<double> solve_cubic(double c3, double c2, double c1, double c0);

// Best integer b in [0, lambda-a] for the relaxed configuration
// a*e_1 + b*e_i + (lambda-a-b)*e_n. The loss derivative in b is a cubic,
// so the argmax is an endpoint or an integer neighbor of one of its <= 3
// real roots; at most 8 candidates are evaluated. `i` is 1-based,
// 2 <= i <= n-1. Ties resolve to the smallest b.
std::uint64_t get_optimal_b(const PrefixSums& ps, std::uint64_t a,
                            std::uint64_t i, std::uint64_t lambda);

// Exact Seg+E attack in the original setting: enumerates budget splits
// across the two endpoint-attached blocks and one interior segment whose
// edge touches a legitimate key, O(n lambda^3) configurations. Throws
// NoFeasiblePoison when the interior holds no free integer.
AttackReport sege_exact_original(const KeySet& keys, std::uint64_t lambda);

// Exact Seg+E attack in the relaxed setting via the closed-form inner step:
// O(n lambda) overall. Budget is always saturated (a + b + c = lambda).
SegERelaxedSolution sege_exact_relaxed(const KeySet& keys,
                                       std::uint64_t lambda);

// Heuristic for the original setting: reuses the relaxed solution's block
// sizes, materializes them as free-integer blocks (endpoint-attached plus
// one anchored segment), and keeps the best of the O(n) anchor positions.
AttackReport sege_heuristic_original(const KeySet& keys, std::uint64_t lambda);

}  // namespace cdfpoison
