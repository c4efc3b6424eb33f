#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cdfpoison/keyset.hpp"

namespace cdfpoison {

using uint128 = unsigned __int128;
using int128 = __int128;

// Least-squares line mapping keys to 1-based ranks, with its minimum MSE.
struct RegressionFit {
  double w = 0.0;    // rank units per key unit
  double b = 0.0;    // rank units, in unshifted key coordinates
  double mse = 0.0;  // rank^2 units, always >= 0
};

// Raw power sums over (shifted value, rank) pairs. Keys are shifted by the
// smallest value before accumulation; a translation changes neither the
// optimal MSE nor the slope. Sums are exact 128-bit integers whenever the
// shifted magnitudes make that safe, otherwise compensated long doubles.
struct SummaryStats {
  std::uint64_t m = 0;
  Key shift = 0;
  bool exact = true;
  uint128 sum_x = 0, sum_x2 = 0, sum_xr = 0;       // valid when exact
  long double fsum_x = 0, fsum_x2 = 0, fsum_xr = 0;  // always valid
  // Ranks are always 1..m, so their sums have closed forms.
  long double sum_r() const;
  long double sum_r2() const;
};

SummaryStats summarize(std::span<const Key> sorted_values);

// Population moments of (shifted value, rank).
struct Moments {
  long double var_x = 0, var_r = 0, cov_xr = 0, mean_x = 0, mean_r = 0;
};

Moments moments_of(const SummaryStats& s);

RegressionFit fit_from_moments(const Moments& mo, Key shift);

// Closed-form solution of the rank regression: w = Cov/Var_X,
// b = mean_r - w * mean_x, mse = Var_R - Cov^2/Var_X.
RegressionFit fit(const RankedMultiset& values);

// Fit over K with distinct poison integers merged in (original setting).
// `poisons` must be sorted, strictly inside (front, back), and disjoint
// from K.
RegressionFit fit_with_poison(const KeySet& keys, std::span<const Key> poisons);

// Fit over K with counts[i] extra copies of key i merged in (relaxed
// setting).
RegressionFit fit_with_counts(const KeySet& keys,
                              std::span<const std::uint64_t> counts);

// Prefix sums over shifted keys: S_t = sum k_l, T_t = sum k_l^2,
// U_t = sum k_l * l for l = 1..t, index 0 = zero. `exact` reports whether
// the 128-bit arrays are overflow-safe for poisoned-moment queries up to
// the stored headroom.
struct PrefixSums {
  std::vector<uint128> S, T, U;
  std::vector<long double> Sf, Tf, Uf;
  std::vector<Key> keys;  // shifted
  Key shift = 0;
  bool exact = true;
  std::uint64_t budget_headroom = 0;  // exactness was proven for lambda <= this

  std::size_t n() const { return keys.size(); }
};

PrefixSums build_prefix_sums(const KeySet& keys);

// Variance/covariance of the poisoned multiset K (+) Q_K(d) for
// d = a*e_1 + b*e_i + (lambda-a-b)*e_n, computed in O(1) from prefix sums.
// `i` is the paper's 1-based key position and must satisfy 2 <= i <= n-1
// whenever b > 0.
struct PoisonedMoments {
  double var_k = 0, var_r = 0, cov_kr = 0;
};

PoisonedMoments poisoned_moments(const PrefixSums& ps, std::uint64_t a,
                                 std::uint64_t b, std::uint64_t i,
                                 std::uint64_t lambda);

// Evaluates E(K u P) for sorted distinct poison sets in O(|P| log n) after
// O(n) setup. Every attack and every oracle in this project scores
// candidates through this one pipeline, so equal poison sets always
// produce bit-identical losses.
class PoisonEvaluator {
 public:
  explicit PoisonEvaluator(const KeySet& keys);

  double base_mse() const { return base_mse_; }

  // E(K u {p}) given t = number of keys strictly below p. p must not be a key.
  double mse_one(Key p, std::size_t t) const;

  // E(K u P); poisons sorted, distinct, disjoint from K.
  double mse(std::span<const Key> poisons) const;

  const PrefixSums& prefix() const { return ps_; }

 private:
  PrefixSums ps_;
  double base_mse_ = 0;
};

}  // namespace cdfpoison
