#include "cdfpoison/optimal.hpp"

#include <algorithm>
#include <limits>

namespace cdfpoison {

double binomial_estimate(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= static_cast<double>(n - k + i) / static_cast<double>(i);
    if (r > 1e300) return std::numeric_limits<double>::infinity();
  }
  return r;
}

namespace {

double canonical_base_mse(const KeySet& keys) {
  return fit(RankedMultiset(keys.keys())).mse;
}

// Best-so-far tracker with the deterministic tie-break: strictly larger
// loss wins, equal loss falls back to the lexicographically smaller sorted
// poison sequence.
struct BestPoisonSet {
  double mse = -1.0;
  std::vector<Key> poisons;
  bool seen = false;

  void offer(double value, const std::vector<Key>& cand) {
    if (!seen || value > mse ||
        (value == mse && std::lexicographical_compare(
                             cand.begin(), cand.end(), poisons.begin(),
                             poisons.end()))) {
      mse = value;
      poisons = cand;
      seen = true;
    }
  }
};

struct BlockSearch {
  const KeySet& keys;
  const PoisonEvaluator eval;
  std::uint64_t lambda;
  std::vector<Key> current;
  BestPoisonSet best;

  BlockSearch(const KeySet& k, std::uint64_t l) : keys(k), eval(k), lambda(l) {}

  void run() { recurse(0, lambda); }

  // One step per gap between consecutive keys: `a` poisons grow rightward
  // from the lower key, `b` poisons grow leftward from the upper key. A
  // full gap is canonically encoded as (gap, 0) so each poison set is
  // visited once.
  void recurse(std::size_t gap_idx, std::uint64_t rem) {
    if (gap_idx + 1 == keys.n()) {
      best.offer(eval.mse(current), current);
      return;
    }
    const Key lo = keys[gap_idx];
    const Key hi = keys[gap_idx + 1];
    const std::uint64_t gap = hi - lo - 1;
    const std::uint64_t amax = std::min(gap, rem);
    for (std::uint64_t a = 0; a <= amax; ++a) {
      for (Key p = lo + 1; p <= lo + a; ++p) current.push_back(p);
      const std::uint64_t bmax = std::min(gap - a, rem - a);
      for (std::uint64_t b = 0; b <= bmax; ++b) {
        if (b > 0 && a + b == gap) break;
        for (Key p = hi - b; p <= hi - 1; ++p) current.push_back(p);
        recurse(gap_idx + 1, rem - a - b);
        current.resize(current.size() - b);
      }
      current.resize(current.size() - a);
    }
  }
};

struct SubsetSearch {
  const PoisonEvaluator eval;
  const std::vector<Key>& free_ints;
  std::uint64_t lambda;
  std::vector<Key> current;
  BestPoisonSet best;

  SubsetSearch(const KeySet& k, const std::vector<Key>& f, std::uint64_t l)
      : eval(k), free_ints(f), lambda(l) {}

  void run() { recurse(0); }

  void recurse(std::size_t from) {
    best.offer(eval.mse(current), current);
    if (current.size() == lambda) return;
    for (std::size_t i = from; i < free_ints.size(); ++i) {
      current.push_back(free_ints[i]);
      recurse(i + 1);
      current.pop_back();
    }
  }
};

struct BestCounts {
  double mse = -1.0;
  std::vector<std::uint64_t> d;
  bool seen = false;

  // Leaves arrive in ascending lexicographic order of d, so a strict
  // improvement test keeps the lexicographically smallest maximizer.
  void offer(double value, const std::vector<std::uint64_t>& cand) {
    if (!seen || value > mse) {
      mse = value;
      d = cand;
      seen = true;
    }
  }
};

template <bool Exact>
struct RelaxedSearch {
  using Acc = std::conditional_t<Exact, uint128, long double>;

  const PrefixSums& ps;
  std::uint64_t lambda;
  bool saturate;
  std::vector<std::uint64_t> d;
  BestCounts best;

  RelaxedSearch(const PrefixSums& p, std::uint64_t l, bool sat)
      : ps(p), lambda(l), saturate(sat), d(p.n(), 0) {}

  void run() { recurse(0, lambda, 0, Acc(0), Acc(0), Acc(0)); }

  void recurse(std::size_t idx, std::uint64_t rem, std::uint64_t cnt, Acc sx,
               Acc sx2, Acc sxr) {
    if (idx + 1 == ps.n()) {
      std::uint64_t lo = saturate ? rem : 0;
      for (std::uint64_t di = lo; di <= rem; ++di) {
        d[idx] = di;
        auto [nsx, nsx2, nsxr, ncnt] = add_copies(idx, di + 1, cnt, sx, sx2, sxr);
        evaluate(ncnt, nsx, nsx2, nsxr);
      }
      d[idx] = 0;
      return;
    }
    for (std::uint64_t di = 0; di <= rem; ++di) {
      d[idx] = di;
      auto [nsx, nsx2, nsxr, ncnt] = add_copies(idx, di + 1, cnt, sx, sx2, sxr);
      recurse(idx + 1, rem - di, ncnt, nsx, nsx2, nsxr);
    }
    d[idx] = 0;
  }

  std::tuple<Acc, Acc, Acc, std::uint64_t> add_copies(std::size_t idx,
                                                      std::uint64_t copies,
                                                      std::uint64_t cnt, Acc sx,
                                                      Acc sx2, Acc sxr) const {
    Acc k = static_cast<Acc>(ps.keys[idx]);
    Acc c = static_cast<Acc>(copies);
    Acc ranks = c * static_cast<Acc>(cnt) +
                static_cast<Acc>(copies) * static_cast<Acc>(copies + 1) / 2;
    return {sx + c * k, sx2 + c * k * k, sxr + k * ranks, cnt + copies};
  }

  void evaluate(std::uint64_t m, Acc sx, Acc sx2, Acc sxr) {
    SummaryStats s;
    s.m = m;
    s.shift = ps.shift;
    s.exact = Exact;
    if constexpr (Exact) {
      s.sum_x = sx;
      s.sum_x2 = sx2;
      s.sum_xr = sxr;
    } else {
      s.fsum_x = sx;
      s.fsum_x2 = sx2;
      s.fsum_xr = sxr;
    }
    Moments mo = moments_of(s);
    long double mse = mo.var_r - mo.cov_xr * mo.cov_xr / mo.var_x;
    best.offer(mse > 0 ? static_cast<double>(mse) : 0.0, d);
  }
};

AttackReport relaxed_search(const KeySet& keys, std::uint64_t lambda,
                            double limit, bool saturate) {
  const std::uint64_t n = keys.n();
  double count = saturate ? binomial_estimate(n + lambda - 1, lambda)
                          : binomial_estimate(n + lambda, lambda);
  if (count > limit) throw SearchSpaceTooLarge(count, limit);

  PrefixSums ps = build_prefix_sums(keys);
  AttackReport report;
  report.method = AttackMethod::optimal_relaxed;
  report.mse_before = canonical_base_mse(keys);
  if (ps.exact && lambda <= ps.budget_headroom) {
    RelaxedSearch<true> search(ps, lambda, saturate);
    search.run();
    report.counts = search.best.d;
  } else {
    RelaxedSearch<false> search(ps, lambda, saturate);
    search.run();
    report.counts = search.best.d;
  }
  report.mse_after = fit_with_counts(keys, report.counts).mse;
  return report;
}

}  // namespace

AttackReport optimal_attack(const KeySet& keys, std::uint64_t lambda,
                            double limit) {
  double count = binomial_estimate(2 * keys.n() - 2 + lambda, lambda);
  if (count > limit) throw SearchSpaceTooLarge(count, limit);

  BlockSearch search(keys, lambda);
  search.run();

  AttackReport report;
  report.method = AttackMethod::optimal;
  report.mse_before = canonical_base_mse(keys);
  report.poisons = search.best.poisons;
  report.mse_after = report.poisons.empty()
                         ? report.mse_before
                         : fit_with_poison(keys, report.poisons).mse;
  return report;
}

AttackReport optimal_attack_bruteforce(const KeySet& keys,
                                       std::uint64_t lambda, double limit) {
  const double free_count = static_cast<double>(keys.interior_free_count());
  double count = 1.0;
  double total = 1.0;
  for (std::uint64_t j = 1; j <= lambda && total <= limit; ++j) {
    count *= (free_count - static_cast<double>(j - 1)) / static_cast<double>(j);
    if (count < 0) count = 0;
    total += count;
  }
  if (total > limit) throw SearchSpaceTooLarge(total, limit);

  std::vector<Key> free_ints;
  free_ints.reserve(static_cast<std::size_t>(keys.interior_free_count()));
  const auto& k = keys.keys();
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    for (Key p = k[i] + 1; p < k[i + 1]; ++p) free_ints.push_back(p);
  }

  SubsetSearch search(keys, free_ints, lambda);
  search.run();

  AttackReport report;
  report.method = AttackMethod::optimal;
  report.mse_before = canonical_base_mse(keys);
  report.poisons = search.best.poisons;
  report.mse_after = report.poisons.empty()
                         ? report.mse_before
                         : fit_with_poison(keys, report.poisons).mse;
  return report;
}

AttackReport optimal_attack_relaxed(const KeySet& keys, std::uint64_t lambda,
                                    double limit) {
  return relaxed_search(keys, lambda, limit, /*saturate=*/true);
}

AttackReport optimal_attack_relaxed_unsaturated(const KeySet& keys,
                                                std::uint64_t lambda,
                                                double limit) {
  return relaxed_search(keys, lambda, limit, /*saturate=*/false);
}

}  // namespace cdfpoison
