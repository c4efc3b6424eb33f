#include "cdfpoison/seg_e.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace cdfpoison {

namespace {

long double cubic_eval(long double c3, long double c2, long double c1,
                       long double c0, long double x) {
  return ((c3 * x + c2) * x + c1) * x + c0;
}

void newton_polish(long double c3, long double c2, long double c1,
                   long double c0, long double& x) {
  for (int it = 0; it < 2; ++it) {
    long double f = cubic_eval(c3, c2, c1, c0, x);
    long double df = (3 * c3 * x + 2 * c2) * x + c1;
    if (df == 0.0L) return;
    long double step = f / df;
    if (!std::isfinite((double)step)) return;
    x -= step;
  }
}

std::vector<double> solve_cubic_ld(long double c3, long double c2,
                                   long double c1, long double c0) {
  std::vector<double> roots;
  long double lead_scale =
      std::max({std::fabs((double)c2), std::fabs((double)c1),
                std::fabs((double)c0)});
  if (c3 == 0.0L || std::fabs((double)c3) < 1e-300 * std::max(1.0, (double)lead_scale)) {
    // quadratic fallback
    if (c2 == 0.0L) {
      if (c1 != 0.0L) roots.push_back(static_cast<double>(-c0 / c1));
      return roots;
    }
    long double disc = c1 * c1 - 4 * c2 * c0;
    long double scale = std::max(std::fabs((double)(c1 * c1)),
                                 std::fabs((double)(4 * c2 * c0)));
    if (disc < -1e-12L * scale) return roots;
    if (disc < 0) disc = 0;
    long double sq = std::sqrt((double)disc);
    long double q = -0.5L * (c1 + (c1 >= 0 ? sq : -sq));
    double r1 = static_cast<double>(q / c2);
    double r2 = q == 0 ? r1 : static_cast<double>(c0 / q);
    roots = {std::min(r1, r2), std::max(r1, r2)};
    return roots;
  }

  long double a = c2 / c3, b = c1 / c3, c = c0 / c3;
  long double p = b - a * a / 3;
  long double q = 2 * a * a * a / 27 - a * b / 3 + c;
  long double half_q = q / 2, third_p = p / 3;
  long double disc = half_q * half_q + third_p * third_p * third_p;
  long double scale = std::max(std::fabs((double)(half_q * half_q)),
                               std::fabs((double)(third_p * third_p * third_p)));
  std::vector<long double> ts;
  if (std::fabs((double)disc) <= 1e-12L * scale || disc == 0.0L) {
    // repeated roots
    long double u = std::cbrt((double)-half_q);
    ts = {2 * u, -u};
  } else if (disc > 0) {
    long double s = std::sqrt((double)disc);
    long double u = std::cbrt((double)(-half_q + s));
    long double v = std::cbrt((double)(-half_q - s));
    ts = {u + v};
  } else {
    long double r = std::sqrt((double)(-third_p));
    long double arg = -half_q / (r * r * r);
    arg = std::clamp(arg, -1.0L, 1.0L);
    long double theta = std::acos((double)arg);
    constexpr long double tau = 6.283185307179586476925286766559L;
    for (int k = 0; k < 3; ++k) {
      ts.push_back(2 * r * std::cos((double)((theta - tau * k) / 3)));
    }
  }
  for (long double t : ts) {
    long double x = t - a / 3;
    newton_polish(c3, c2, c1, c0, x);
    roots.push_back(static_cast<double>(x));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double relaxed_mse(const PrefixSums& ps, std::uint64_t a, std::uint64_t b,
                   std::uint64_t i, std::uint64_t lambda) {
  PoisonedMoments mo = poisoned_moments(ps, a, b, i, lambda);
  double mse = mo.var_r - mo.cov_kr * mo.cov_kr / mo.var_k;
  return mse > 0 ? mse : 0.0;
}

// Free integers strictly above `from`, ascending, skipping keys; stops at
// `cnt` values or at the key interval's upper end.
std::vector<Key> free_above(const KeySet& keys, Key from, std::uint64_t cnt) {
  std::vector<Key> out;
  const auto& k = keys.keys();
  std::size_t ki = std::upper_bound(k.begin(), k.end(), from) - k.begin();
  Key p = from + 1;
  while (out.size() < cnt && p < keys.back()) {
    if (ki < k.size() && k[ki] == p) {
      ++ki;
    } else {
      out.push_back(p);
    }
    ++p;
  }
  return out;
}

// Free integers strictly below `from`, descending.
std::vector<Key> free_below(const KeySet& keys, Key from, std::uint64_t cnt) {
  std::vector<Key> out;
  const auto& k = keys.keys();
  std::size_t ki = std::lower_bound(k.begin(), k.end(), from) - k.begin();
  Key p = from;
  while (out.size() < cnt && p > keys.front() + 1) {
    --p;
    if (ki > 0 && k[ki - 1] == p) {
      --ki;
    } else {
      out.push_back(p);
    }
  }
  return out;
}

struct OriginalBest {
  double mse = -1.0;
  std::vector<Key> poisons;
  bool seen = false;

  void offer(double value, const std::vector<Key>& cand) {
    if (!seen || value > mse) {
      mse = value;
      poisons = cand;
      seen = true;
    }
  }
};

// Assembles prefix + middle + suffix into one sorted poison vector and
// scores it. `suffix` is stored descending.
void score_config(const PoisonEvaluator& eval, const std::vector<Key>& prefix,
                  std::size_t l, const std::vector<Key>& mid, std::size_t m,
                  const std::vector<Key>& suffix, std::size_t r,
                  std::vector<Key>& scratch, OriginalBest& best) {
  scratch.clear();
  scratch.insert(scratch.end(), prefix.begin(), prefix.begin() + l);
  scratch.insert(scratch.end(), mid.begin(), mid.begin() + m);
  for (std::size_t s = r; s > 0; --s) scratch.push_back(suffix[s - 1]);
  best.offer(eval.mse(scratch), scratch);
}

}  // namespace

std::vector<double> solve_cubic(double c3, double c2, double c1, double c0) {
  return solve_cubic_ld(c3, c2, c1, c0);
}

std::uint64_t get_optimal_b(const PrefixSums& ps, std::uint64_t a,
                            std::uint64_t i, std::uint64_t lambda) {
  const std::size_t n = ps.n();
  if (a > lambda) throw BudgetViolation("a exceeds the budget");
  if (i < 2 || i > n - 1) {
    throw IndexOutOfRange("interior position must satisfy 2 <= i <= n-1");
  }
  const std::uint64_t bmax = lambda - a;
  if (bmax == 0) return 0;

  // Loss as a function of the middle multiplicity b: variance and
  // covariance of the poisoned multiset are quadratics in b, so the
  // stationarity condition 2*Cov'(b)*Var(b) - Cov(b)*Var'(b) = 0 is cubic.
  const long double nL = static_cast<long double>(n);
  const long double N = nL + static_cast<long double>(lambda);
  const long double k1 = static_cast<long double>(ps.keys.front());
  const long double ki = static_cast<long double>(ps.keys[i - 1]);
  const long double kn = static_cast<long double>(ps.keys.back());
  const long double af = static_cast<long double>(a);
  const long double a0 = static_cast<long double>(lambda - a);  // b + c

  const long double x1 = ki - kn;
  const long double x0 = af * k1 + a0 * kn + ps.Sf[n];
  const long double y1 = ki * ki - kn * kn;
  const long double y0 = af * k1 * k1 + a0 * kn * kn + ps.Tf[n];
  const long double z2 = (ki - kn) / 2;
  const long double z1 = (ps.Sf[n] - ps.Sf[i - 1]) +
                         ki * (af + static_cast<long double>(i) - 0.5L) +
                         kn * (a0 - N - 0.5L);
  const long double z0 = ps.Uf[n] + af * ps.Sf[n] + af * (af + 1) / 2 * k1 +
                         kn * (a0 * N - a0 * (a0 - 1) / 2);

  const long double half_nn1 = N * (N + 1) / 2;
  const long double v2 = -x1 * x1;
  const long double v1 = N * y1 - 2 * x1 * x0;
  const long double v0 = N * y0 - x0 * x0;
  const long double q2 = N * z2;
  const long double q1 = N * z1 - x1 * half_nn1;
  const long double q0 = N * z0 - x0 * half_nn1;

  const long double c3 = 2 * q2 * v2;
  const long double c2 = 3 * q2 * v1;
  const long double c1 = 4 * q2 * v0 + q1 * v1 - 2 * q0 * v2;
  const long double c0 = 2 * q1 * v0 - q0 * v1;

  std::vector<double> roots = solve_cubic_ld(c3, c2, c1, c0);
  std::vector<std::uint64_t> cands = {0, bmax};
  for (double r : roots) {
    if (!std::isfinite(r)) continue;
    double cl = std::clamp(r, 0.0, static_cast<double>(bmax));
    cands.push_back(static_cast<std::uint64_t>(std::floor(cl)));
    cands.push_back(static_cast<std::uint64_t>(std::ceil(cl)));
  }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

  std::uint64_t best_b = 0;
  double best_mse = -1.0;
  for (std::uint64_t b : cands) {
    if (b > bmax) continue;
    double mse = relaxed_mse(ps, a, b, i, lambda);
    if (mse > best_mse) {
      best_mse = mse;
      best_b = b;
    }
  }
  return best_b;
}

SegERelaxedSolution sege_exact_relaxed(const KeySet& keys,
                                       std::uint64_t lambda) {
  const std::size_t n = keys.n();
  PrefixSums ps = build_prefix_sums(keys);

  double best_mse = -1.0;
  SegERelaxed best;
  auto offer = [&](std::uint64_t a, std::uint64_t b, std::uint64_t i,
                   double mse) {
    auto cand = std::make_tuple(a, b, i);
    auto cur = std::make_tuple(best.a, best.b, best.i);
    if (best_mse < 0 || mse > best_mse || (mse == best_mse && cand < cur)) {
      best_mse = mse;
      best = SegERelaxed{a, b, lambda - a - b, i};
    }
  };

  for (std::uint64_t a = 0; a <= lambda; ++a) {
    if (n >= 3) {
      for (std::uint64_t i = 2; i <= n - 1; ++i) {
        std::uint64_t b = get_optimal_b(ps, a, i, lambda);
        offer(a, b, i, relaxed_mse(ps, a, b, i, lambda));
      }
    } else {
      offer(a, 0, 0, relaxed_mse(ps, a, 0, 1, lambda));
    }
  }

  SegERelaxedSolution sol;
  sol.config = best;
  sol.report.method = AttackMethod::sege_relaxed;
  sol.report.mse_before = fit(RankedMultiset(keys.keys())).mse;
  sol.report.counts.assign(n, 0);
  sol.report.counts[0] += best.a;
  if (best.b > 0) sol.report.counts[best.i - 1] += best.b;
  sol.report.counts[n - 1] += best.c;
  sol.report.mse_after = fit_with_counts(keys, sol.report.counts).mse;
  return sol;
}

AttackReport sege_exact_original(const KeySet& keys, std::uint64_t lambda) {
  if (keys.interior_free_count() == 0) {
    throw NoFeasiblePoison("no free integer between the extreme keys");
  }
  const std::size_t n = keys.n();
  const std::uint64_t free_total = keys.interior_free_count();
  PoisonEvaluator eval(keys);

  std::vector<Key> prefix = free_above(keys, keys.front(), lambda);
  std::vector<Key> suffix = free_below(keys, keys.back(), lambda);
  std::vector<std::vector<Key>> mids_after(n), mids_before(n);
  for (std::size_t j = 0; j < n; ++j) {
    mids_after[j] = free_above(keys, keys[j], lambda);
    mids_before[j] = free_below(keys, keys[j], lambda);
  }

  OriginalBest best;
  std::vector<Key> scratch;
  for (std::uint64_t l = 0; l <= std::min<std::uint64_t>(lambda, prefix.size());
       ++l) {
    std::uint64_t rmax = std::min<std::uint64_t>(lambda - l, suffix.size());
    for (std::uint64_t r = 0; r <= rmax; ++r) {
      if (l + r > free_total) break;
      static const std::vector<Key> kEmpty;
      score_config(eval, prefix, l, kEmpty, 0, suffix, r, scratch, best);
      for (std::uint64_t m = 1; m + l + r <= lambda; ++m) {
        for (int side = 0; side < 2; ++side) {
          for (std::size_t j = 0; j < n; ++j) {
            const std::vector<Key>& pool =
                side == 0 ? mids_after[j] : mids_before[j];
            if (pool.size() < m) continue;
            // mids_before pools are descending; a segment of the last m
            // free integers below the anchor is its first m entries
            // reversed.
            Key lo = side == 0 ? pool[0] : pool[m - 1];
            Key hi = side == 0 ? pool[m - 1] : pool[0];
            if (l > 0 && lo <= prefix[l - 1]) continue;
            if (r > 0 && hi >= suffix[r - 1]) continue;
            scratch.clear();
            scratch.insert(scratch.end(), prefix.begin(), prefix.begin() + l);
            if (side == 0) {
              scratch.insert(scratch.end(), pool.begin(), pool.begin() + m);
            } else {
              for (std::size_t s = m; s > 0; --s) scratch.push_back(pool[s - 1]);
            }
            for (std::size_t s = r; s > 0; --s) scratch.push_back(suffix[s - 1]);
            best.offer(eval.mse(scratch), scratch);
          }
        }
      }
    }
  }

  AttackReport report;
  report.method = AttackMethod::sege_exact;
  report.mse_before = fit(RankedMultiset(keys.keys())).mse;
  report.poisons = best.poisons;
  report.mse_after = report.poisons.empty()
                         ? report.mse_before
                         : fit_with_poison(keys, report.poisons).mse;
  return report;
}

AttackReport sege_heuristic_original(const KeySet& keys,
                                     std::uint64_t lambda) {
  SegERelaxedSolution rel = sege_exact_relaxed(keys, lambda);
  const std::uint64_t a = rel.config.a;
  const std::uint64_t b = rel.config.b;
  const std::uint64_t c = rel.config.c;
  const std::size_t n = keys.n();

  std::vector<Key> prefix = free_above(keys, keys.front(), a);
  std::vector<Key> suffix = free_below(keys, keys.back(), c);
  if (prefix.size() < a || suffix.size() < c ||
      a + c > keys.interior_free_count()) {
    throw NoFeasiblePoison("endpoint blocks do not fit the free integers");
  }

  PoisonEvaluator eval(keys);
  OriginalBest best;
  std::vector<Key> scratch;
  if (b == 0) {
    score_config(eval, prefix, a, {}, 0, suffix, c, scratch, best);
  } else {
    for (int side = 0; side < 2; ++side) {
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<Key> pool = side == 0 ? free_above(keys, keys[j], b)
                                          : free_below(keys, keys[j], b);
        if (pool.size() < b) continue;
        Key lo = side == 0 ? pool[0] : pool[b - 1];
        Key hi = side == 0 ? pool[b - 1] : pool[0];
        if (a > 0 && lo <= prefix[a - 1]) continue;
        if (c > 0 && hi >= suffix[c - 1]) continue;
        if (side == 1) std::reverse(pool.begin(), pool.end());
        scratch.clear();
        scratch.insert(scratch.end(), prefix.begin(), prefix.begin() + a);
        scratch.insert(scratch.end(), pool.begin(), pool.begin() + b);
        for (std::size_t s = c; s > 0; --s) scratch.push_back(suffix[s - 1]);
        best.offer(eval.mse(scratch), scratch);
      }
    }
    if (!best.seen) {
      throw NoFeasiblePoison("no anchored segment placement fits");
    }
  }

  AttackReport report;
  report.method = AttackMethod::sege_heuristic;
  report.mse_before = rel.report.mse_before;
  report.poisons = best.poisons;
  report.mse_after = report.poisons.empty()
                         ? report.mse_before
                         : fit_with_poison(keys, report.poisons).mse;
  return report;
}

}  // namespace cdfpoison
