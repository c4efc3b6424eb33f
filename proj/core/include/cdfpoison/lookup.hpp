#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cdfpoison/attacks.hpp"
#include "cdfpoison/keyset.hpp"
#include "cdfpoison/stats.hpp"

namespace cdfpoison {

// 0-based predicted array position: round(w*key + b) - 1, ties to even,
// clamped to [0, len-1].
std::size_t predict_position(const RegressionFit& fit, Key key,
                             std::size_t len);

// Doubles the bracket outward from `start` until it encloses `key`, then
// binary-searches the bracket. Returns the exact index; counts comparisons
// against array elements into *probes when given. Throws KeyNotFound for
// absent keys (the benchmark only queries stored keys).
std::size_t exponential_search(std::span<const Key> arr, std::size_t start,
                               Key key, std::uint64_t* probes = nullptr);

// Baseline: plain binary search over the whole array.
std::size_t binary_search_index(std::span<const Key> arr, Key key,
                                std::uint64_t* probes = nullptr);

struct LookupConfig {
  std::string name;
  double mean_ns = 0.0;      // wall time per lookup; machine-dependent
  double mean_probes = 0.0;  // deterministic comparison count per lookup
};

struct BenchReport {
  std::uint64_t n = 0;
  std::uint64_t lambda = 0;
  int reps = 1;
  std::vector<LookupConfig> configs;

  const LookupConfig& config(const std::string& name) const;
};

// Measures lookups through a fitted line plus exponential search over the
// legitimate key array, before and after poisoning. The model is trained on
// keys plus poisons, the stored array holds legitimate keys only. Includes
// a seeded uniform random-poison control and a model-free binary-search
// baseline. Every lookup's correctness is asserted.
BenchReport run_bench(const KeySet& keys, std::uint64_t lambda,
                      AttackMethod method, int reps,
                      std::uint64_t control_seed = 0);

}  // namespace cdfpoison
