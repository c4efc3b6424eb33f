#include "cdfpoison/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iterator>

namespace cdfpoison {
namespace {

// Neumaier-compensated sum, used when inputs are too large for exact
// 128-bit accumulation.
struct CompensatedSum {
  long double s = 0, c = 0;
  void add(long double v) {
    long double t = s + v;
    if (std::fabs((double)s) >= std::fabs((double)v)) {
      c += (s - t) + v;
    } else {
      c += (v - t) + s;
    }
    s = t;
  }
  long double value() const { return s + c; }
};

// True when every intermediate product over a multiset of at most m_max
// shifted values bounded by max_v stays below 2^125.
bool exact_safe(Key max_v, std::uint64_t m_max) {
  int B = std::bit_width(max_v);
  int M = std::bit_width(m_max);
  return std::max(2 * B + 2 * M, B + 3 * M) <= 124;
}

long double ld(uint128 v) { return static_cast<long double>(v); }
long double ld(int128 v) { return static_cast<long double>(v); }

double mse_from_moments(const Moments& mo) {
  long double mse = mo.var_r - mo.cov_xr * mo.cov_xr / mo.var_x;
  return mse > 0 ? static_cast<double>(mse) : 0.0;
}

}  // namespace

long double SummaryStats::sum_r() const {
  long double md = static_cast<long double>(m);
  return md * (md + 1) / 2.0L;
}

long double SummaryStats::sum_r2() const {
  long double md = static_cast<long double>(m);
  return md * (md + 1) * (2 * md + 1) / 6.0L;
}

SummaryStats summarize(std::span<const Key> sorted_values) {
  SummaryStats s;
  s.m = sorted_values.size();
  if (s.m == 0) return s;
  s.shift = sorted_values.front();
  s.exact = exact_safe(sorted_values.back() - s.shift, s.m);
  if (s.exact) {
    for (std::size_t i = 0; i < sorted_values.size(); ++i) {
      uint128 x = sorted_values[i] - s.shift;
      s.sum_x += x;
      s.sum_x2 += x * x;
      s.sum_xr += x * static_cast<uint128>(i + 1);
    }
    s.fsum_x = ld(s.sum_x);
    s.fsum_x2 = ld(s.sum_x2);
    s.fsum_xr = ld(s.sum_xr);
  } else {
    CompensatedSum cx, cx2, cxr;
    for (std::size_t i = 0; i < sorted_values.size(); ++i) {
      long double x = static_cast<long double>(sorted_values[i] - s.shift);
      cx.add(x);
      cx2.add(x * x);
      cxr.add(x * static_cast<long double>(i + 1));
    }
    s.fsum_x = cx.value();
    s.fsum_x2 = cx2.value();
    s.fsum_xr = cxr.value();
  }
  return s;
}

Moments moments_of(const SummaryStats& s) {
  Moments mo;
  long double m = static_cast<long double>(s.m);
  mo.mean_r = (m + 1) / 2.0L;
  mo.var_r = (m * m - 1) / 12.0L;
  if (s.exact) {
    // Centered numerators computed exactly; the only rounding is the final
    // division.
    uint128 a = static_cast<uint128>(s.m) * s.sum_x2 - s.sum_x * s.sum_x;
    uint128 sum_r = static_cast<uint128>(s.m) * (s.m + 1) / 2;
    int128 c = static_cast<int128>(static_cast<uint128>(s.m) * s.sum_xr) -
               static_cast<int128>(s.sum_x * sum_r);
    mo.var_x = ld(a) / (m * m);
    mo.cov_xr = ld(c) / (m * m);
    mo.mean_x = ld(s.sum_x) / m;
  } else {
    mo.mean_x = s.fsum_x / m;
    mo.var_x = s.fsum_x2 / m - mo.mean_x * mo.mean_x;
    mo.cov_xr = s.fsum_xr / m - mo.mean_x * mo.mean_r;
  }
  return mo;
}

RegressionFit fit_from_moments(const Moments& mo, Key shift) {
  if (!(mo.var_x > 0)) {
    throw DegenerateInput("key variance is zero; need two distinct values");
  }
  long double w = mo.cov_xr / mo.var_x;
  RegressionFit f;
  f.w = static_cast<double>(w);
  f.b = static_cast<double>(mo.mean_r - w * mo.mean_x -
                            w * static_cast<long double>(shift));
  f.mse = mse_from_moments(mo);
  return f;
}

RegressionFit fit(const RankedMultiset& values) {
  SummaryStats s = summarize(values.values());
  return fit_from_moments(moments_of(s), s.shift);
}

RegressionFit fit_with_poison(const KeySet& keys, std::span<const Key> poisons) {
  const auto& k = keys.keys();
  Key prev = 0;
  bool first = true;
  for (Key p : poisons) {
    if (!first && p <= prev) {
      throw DegenerateInput("poisons must be sorted and distinct");
    }
    if (p <= keys.front() || p >= keys.back()) {
      throw DegenerateInput("poison lies outside the open key interval");
    }
    if (std::binary_search(k.begin(), k.end(), p)) {
      throw DegenerateInput("poison collides with a legitimate key");
    }
    prev = p;
    first = false;
  }
  std::vector<Key> merged;
  merged.reserve(k.size() + poisons.size());
  std::merge(k.begin(), k.end(), poisons.begin(), poisons.end(),
             std::back_inserter(merged));
  return fit(RankedMultiset(std::move(merged)));
}

RegressionFit fit_with_counts(const KeySet& keys,
                              std::span<const std::uint64_t> counts) {
  if (counts.size() != keys.n()) {
    throw IndexOutOfRange("counts length must equal the number of keys");
  }
  std::vector<Key> merged;
  for (std::size_t i = 0; i < keys.n(); ++i) {
    for (std::uint64_t c = 0; c <= counts[i]; ++c) merged.push_back(keys[i]);
  }
  return fit(RankedMultiset(std::move(merged)));
}

PrefixSums build_prefix_sums(const KeySet& keys) {
  PrefixSums ps;
  const std::size_t n = keys.n();
  ps.shift = keys.front();
  ps.keys.resize(n);
  for (std::size_t i = 0; i < n; ++i) ps.keys[i] = keys[i] - ps.shift;
  ps.budget_headroom = std::max<std::uint64_t>(4096, n);
  ps.exact = exact_safe(ps.keys.back(), n + ps.budget_headroom);
  ps.S.assign(n + 1, 0);
  ps.T.assign(n + 1, 0);
  ps.U.assign(n + 1, 0);
  ps.Sf.assign(n + 1, 0);
  ps.Tf.assign(n + 1, 0);
  ps.Uf.assign(n + 1, 0);
  for (std::size_t t = 1; t <= n; ++t) {
    uint128 k = ps.keys[t - 1];
    if (ps.exact) {
      ps.S[t] = ps.S[t - 1] + k;
      ps.T[t] = ps.T[t - 1] + k * k;
      ps.U[t] = ps.U[t - 1] + k * static_cast<uint128>(t);
    }
    long double kf = static_cast<long double>(ps.keys[t - 1]);
    ps.Sf[t] = ps.Sf[t - 1] + kf;
    ps.Tf[t] = ps.Tf[t - 1] + kf * kf;
    ps.Uf[t] = ps.Uf[t - 1] + kf * static_cast<long double>(t);
  }
  if (ps.exact) {
    for (std::size_t t = 0; t <= n; ++t) {
      ps.Sf[t] = ld(ps.S[t]);
      ps.Tf[t] = ld(ps.T[t]);
      ps.Uf[t] = ld(ps.U[t]);
    }
  }
  return ps;
}

PoisonedMoments poisoned_moments(const PrefixSums& ps, std::uint64_t a,
                                 std::uint64_t b, std::uint64_t i,
                                 std::uint64_t lambda) {
  const std::size_t n = ps.n();
  if (a > lambda || b > lambda - a) {
    throw BudgetViolation("a + b exceeds the poisoning budget");
  }
  if (b > 0 && (i < 2 || i > n - 1)) {
    throw IndexOutOfRange("interior position must satisfy 2 <= i <= n-1");
  }
  const std::uint64_t c = lambda - a - b;
  const std::uint64_t N = n + lambda;
  PoisonedMoments out;
  out.var_r =
      static_cast<double>((static_cast<long double>(N) * N - 1) / 12.0L);
  const bool exact = ps.exact && lambda <= ps.budget_headroom;
  if (exact) {
    uint128 k1 = ps.keys.front();
    uint128 ki = b > 0 ? ps.keys[i - 1] : 0;
    uint128 kn = ps.keys.back();
    uint128 si1 = b > 0 ? ps.S[i - 1] : 0;
    uint128 x = a * k1 + b * ki + c * kn + ps.S[n];
    uint128 x2 = a * k1 * k1 + b * ki * ki + c * kn * kn + ps.T[n];
    uint128 xr = ps.U[n] + a * ps.S[n] + b * (ps.S[n] - si1) +
                 (static_cast<uint128>(a) * (a + 1) / 2) * k1 +
                 (static_cast<uint128>(b) * (a + i) +
                  static_cast<uint128>(b) * (b - 1) / 2) *
                     ki +
                 (static_cast<uint128>(c) * N -
                  static_cast<uint128>(c) * (c - 1) / 2) *
                     kn;
    uint128 va = static_cast<uint128>(N) * x2 - x * x;
    uint128 sum_r = static_cast<uint128>(N) * (N + 1) / 2;
    int128 cv = static_cast<int128>(static_cast<uint128>(N) * xr) -
                static_cast<int128>(x * sum_r);
    long double nn = static_cast<long double>(N) * N;
    out.var_k = static_cast<double>(ld(va) / nn);
    out.cov_kr = static_cast<double>(ld(cv) / nn);
  } else {
    long double k1 = static_cast<long double>(ps.keys.front());
    long double ki = b > 0 ? static_cast<long double>(ps.keys[i - 1]) : 0.0L;
    long double kn = static_cast<long double>(ps.keys.back());
    long double si1 = b > 0 ? ps.Sf[i - 1] : 0.0L;
    long double af = a, bf = b, cf = c, nf = N;
    long double x = af * k1 + bf * ki + cf * kn + ps.Sf[n];
    long double x2 = af * k1 * k1 + bf * ki * ki + cf * kn * kn + ps.Tf[n];
    long double xr = ps.Uf[n] + af * ps.Sf[n] + bf * (ps.Sf[n] - si1) +
                     af * (af + 1) / 2 * k1 +
                     (bf * (af + i) + bf * (bf - 1) / 2) * ki +
                     (cf * nf - cf * (cf - 1) / 2) * kn;
    long double mean_x = x / nf;
    out.var_k = static_cast<double>(x2 / nf - mean_x * mean_x);
    out.cov_kr = static_cast<double>(xr / nf - mean_x * (nf + 1) / 2);
  }
  return out;
}

PoisonEvaluator::PoisonEvaluator(const KeySet& keys)
    : ps_(build_prefix_sums(keys)) {
  base_mse_ = mse({});
}

double PoisonEvaluator::mse_one(Key p, std::size_t t) const {
  const std::size_t n = ps_.n();
  const std::uint64_t m = n + 1;
  if (ps_.exact) {
    SummaryStats s;
    s.m = m;
    s.shift = ps_.shift;
    s.exact = true;
    uint128 x = p - ps_.shift;
    s.sum_x = ps_.S[n] + x;
    s.sum_x2 = ps_.T[n] + x * x;
    s.sum_xr = ps_.U[n] + (ps_.S[n] - ps_.S[t]) + x * (t + 1);
    return mse_from_moments(moments_of(s));
  }
  SummaryStats s;
  s.m = m;
  s.shift = ps_.shift;
  s.exact = false;
  long double x = static_cast<long double>(p - ps_.shift);
  s.fsum_x = ps_.Sf[n] + x;
  s.fsum_x2 = ps_.Tf[n] + x * x;
  s.fsum_xr = ps_.Uf[n] + (ps_.Sf[n] - ps_.Sf[t]) +
              x * static_cast<long double>(t + 1);
  return mse_from_moments(moments_of(s));
}

double PoisonEvaluator::mse(std::span<const Key> poisons) const {
  const std::size_t n = ps_.n();
  const std::size_t q = poisons.size();
  SummaryStats s;
  s.m = n + q;
  s.shift = ps_.shift;
  s.exact = ps_.exact && q <= ps_.budget_headroom;
  if (s.exact) {
    s.sum_x = ps_.S[n];
    s.sum_x2 = ps_.T[n];
    s.sum_xr = ps_.U[n];
    for (std::size_t u = 0; u < q; ++u) {
      Key ps_key = poisons[u] - ps_.shift;
      std::size_t t =
          std::lower_bound(ps_.keys.begin(), ps_.keys.end(), ps_key) -
          ps_.keys.begin();
      uint128 x = ps_key;
      s.sum_x += x;
      s.sum_x2 += x * x;
      // Every key above this poison gains one rank; the poison itself sits
      // at rank t + u + 1.
      s.sum_xr += x * static_cast<uint128>(t + u + 1) + (ps_.S[n] - ps_.S[t]);
    }
  } else {
    s.fsum_x = ps_.Sf[n];
    s.fsum_x2 = ps_.Tf[n];
    s.fsum_xr = ps_.Uf[n];
    for (std::size_t u = 0; u < q; ++u) {
      Key ps_key = poisons[u] - ps_.shift;
      std::size_t t =
          std::lower_bound(ps_.keys.begin(), ps_.keys.end(), ps_key) -
          ps_.keys.begin();
      long double x = static_cast<long double>(ps_key);
      s.fsum_x += x;
      s.fsum_x2 += x * x;
      s.fsum_xr += x * static_cast<long double>(t + u + 1) +
                   (ps_.Sf[n] - ps_.Sf[t]);
    }
  }
  return mse_from_moments(moments_of(s));
}

}  // namespace cdfpoison
