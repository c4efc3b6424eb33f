#include "cdfpoison/lookup.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "cdfpoison/dispatch.hpp"
#include "cdfpoison/splitmix64.hpp"

namespace cdfpoison {

std::size_t predict_position(const RegressionFit& fit, Key key,
                             std::size_t len) {
  if (len == 0) throw DegenerateInput("cannot predict into an empty array");
  double pos = std::nearbyint(fit.w * static_cast<double>(key) + fit.b) - 1.0;
  if (!(pos > 0.0)) return 0;
  if (pos >= static_cast<double>(len - 1)) return len - 1;
  return static_cast<std::size_t>(pos);
}

std::size_t exponential_search(std::span<const Key> arr, std::size_t start,
                               Key key, std::uint64_t* probes) {
  if (arr.empty()) throw KeyNotFound("array is empty");
  std::uint64_t cnt = 0;
  const std::size_t n = arr.size();
  if (start >= n) start = n - 1;

  std::size_t lo, hi;
  ++cnt;
  if (arr[start] == key) {
    if (probes) *probes += cnt;
    return start;
  }
  if (arr[start] < key) {
    std::size_t step = 1;
    lo = start + 1;
    std::size_t cur = std::min(n - 1, start + step);
    while (true) {
      if (cur >= n - 1) {
        hi = n - 1;
        break;
      }
      ++cnt;
      if (arr[cur] >= key) {
        hi = cur;
        break;
      }
      lo = cur + 1;
      step *= 2;
      cur = std::min(n - 1, start + step);
    }
  } else {
    if (start == 0) {
      if (probes) *probes += cnt;
      throw KeyNotFound("key below the array range");
    }
    std::size_t step = 1;
    hi = start - 1;
    std::size_t cur = start >= step ? start - step : 0;
    while (true) {
      if (cur == 0) {
        lo = 0;
        break;
      }
      ++cnt;
      if (arr[cur] <= key) {
        lo = cur;
        break;
      }
      hi = cur - 1;
      step *= 2;
      cur = start >= step ? start - step : 0;
    }
  }

  while (lo <= hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    ++cnt;
    if (arr[mid] == key) {
      if (probes) *probes += cnt;
      return mid;
    }
    if (arr[mid] < key) {
      lo = mid + 1;
    } else {
      if (mid == 0) break;
      hi = mid - 1;
    }
  }
  if (probes) *probes += cnt;
  throw KeyNotFound("key absent from array");
}

std::size_t binary_search_index(std::span<const Key> arr, Key key,
                                std::uint64_t* probes) {
  std::uint64_t cnt = 0;
  std::size_t lo = 0, hi = arr.size();
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    ++cnt;
    if (arr[mid] == key) {
      if (probes) *probes += cnt;
      return mid;
    }
    if (arr[mid] < key) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (probes) *probes += cnt;
  throw KeyNotFound("key absent from array");
}

const LookupConfig& BenchReport::config(const std::string& name) const {
  for (const LookupConfig& c : configs) {
    if (c.name == name) return c;
  }
  throw Error("no benchmark config named " + name);
}

namespace {

// Distinct uniform interior non-key integers; seeded and reproducible.
std::vector<Key> random_interior_poisons(const KeySet& keys,
                                         std::uint64_t lambda,
                                         std::uint64_t seed) {
  std::vector<Key> out;
  const std::uint64_t free_total = keys.interior_free_count();
  if (free_total <= lambda) {
    // dense interior: take everything that is free
    const auto& k = keys.keys();
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
      for (Key p = k[i] + 1; p < k[i + 1]; ++p) out.push_back(p);
    }
    return out;
  }
  SplitMix64 rng = SplitMix64::derive(seed, 0x706f69736f6eULL);
  const Key lo = keys.front() + 1;
  const Key span = keys.back() - keys.front() - 1;
  const auto& k = keys.keys();
  while (out.size() < lambda) {
    Key p = lo + rng.next() % span;
    if (std::binary_search(k.begin(), k.end(), p)) continue;
    if (std::find(out.begin(), out.end(), p) != out.end()) continue;
    out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct MeasuredRun {
  double mean_ns;
  double mean_probes;
};

template <class LookupFn>
MeasuredRun measure(const std::vector<Key>& arr, int reps, LookupFn&& lookup) {
  std::uint64_t probes = 0;
  std::size_t sink = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (int rep = 0; rep < reps; ++rep) {
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::size_t found = lookup(arr[i], &probes);
      if (found != i) throw KeyNotFound("lookup returned a wrong index");
      sink += found;
    }
  }
  auto t1 = std::chrono::steady_clock::now();
  if (sink == static_cast<std::size_t>(-1)) throw Error("unreachable");
  double total = static_cast<double>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
  double lookups = static_cast<double>(reps) * static_cast<double>(arr.size());
  return {total / lookups, static_cast<double>(probes) / lookups};
}

RegressionFit fit_for_report(const KeySet& keys, const AttackReport& report) {
  if (!report.counts.empty()) return fit_with_counts(keys, report.counts);
  if (report.poisons.empty()) return fit(RankedMultiset(keys.keys()));
  std::vector<Key> sorted = report.poisons;
  std::sort(sorted.begin(), sorted.end());
  return fit_with_poison(keys, sorted);
}

}  // namespace

BenchReport run_bench(const KeySet& keys, std::uint64_t lambda,
                      AttackMethod method, int reps,
                      std::uint64_t control_seed) {
  if (reps < 1) throw DegenerateInput("reps must be at least 1");
  const std::vector<Key>& arr = keys.keys();

  RegressionFit legit_fit = fit(RankedMultiset(arr));
  AttackReport attack = run_attack(keys, method, lambda);
  RegressionFit attack_fit = fit_for_report(keys, attack);

  std::vector<Key> random_poisons =
      random_interior_poisons(keys, lambda, control_seed);
  RegressionFit random_fit = random_poisons.empty()
                                 ? legit_fit
                                 : fit_with_poison(keys, random_poisons);

  BenchReport report;
  report.n = arr.size();
  report.lambda = lambda;
  report.reps = reps;

  auto model_lookup = [&](const RegressionFit& f) {
    return [&arr, f](Key key, std::uint64_t* probes) {
      return exponential_search(arr, predict_position(f, key, arr.size()),
                                key, probes);
    };
  };
  auto ms_legit = measure(arr, reps, model_lookup(legit_fit));
  auto ms_attack = measure(arr, reps, model_lookup(attack_fit));
  auto ms_random = measure(arr, reps, model_lookup(random_fit));
  auto ms_binary = measure(arr, reps, [&arr](Key key, std::uint64_t* probes) {
    return binary_search_index(arr, key, probes);
  });

  report.configs = {
      {"legit", ms_legit.mean_ns, ms_legit.mean_probes},
      {"attack", ms_attack.mean_ns, ms_attack.mean_probes},
      {"random", ms_random.mean_ns, ms_random.mean_probes},
      {"binary_search", ms_binary.mean_ns, ms_binary.mean_probes},
  };
  return report;
}

}  // namespace cdfpoison
