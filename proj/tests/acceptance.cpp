// Acceptance suite: end-to-end checks of the attack, bound, and benchmark
// stack against pinned instances, oracle enumerations, and desk-scale
// sweeps. Prints one pass/fail line per criterion; the exit code is the
// number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cdfpoison/attacks.hpp"
#include "cdfpoison/bound.hpp"
#include "cdfpoison/datasets.hpp"
#include "cdfpoison/lookup.hpp"
#include "cdfpoison/optimal.hpp"
#include "cdfpoison/seg_e.hpp"
#include "cdfpoison/splitmix64.hpp"

using namespace cdfpoison;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void report(int number, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] C%02d %s (%s)\n", pass ? "PASS" : "FAIL", number,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void run_criterion(int number, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& body) {
  try {
    auto [pass, detail] = body();
    report(number, name, pass, detail);
  } catch (const std::exception& e) {
    report(number, name, false, std::string("exception: ") + e.what());
  }
}

bool leq_with_slack(double lo, double hi, double rel = 1e-9) {
  return lo <= hi + rel * std::max({1.0, std::fabs(lo), std::fabs(hi)});
}

std::vector<Key> random_keys(SplitMix64& rng, std::size_t max_n, Key domain) {
  std::size_t n = 2 + rng.next() % (max_n - 1);
  std::set<Key> s;
  while (s.size() < n) s.insert(rng.next() % (domain + 1));
  return {s.begin(), s.end()};
}

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

// One measured instance of the desk-scale sweep shared by criteria 7-10.
struct SweepRow {
  std::uint64_t seed;
  double pct;
  double mse_G, mse_segE, mse_segE_H;
  std::optional<double> mse_OPT, mse_ROPT;
  double ub_golden, ub_binary, ub_exact;
};

std::vector<SweepRow> g_sweep;

// Instances retained from the oracle suites for the chain and conjecture
// criteria.
struct SuiteInstance {
  std::vector<Key> keys;
  std::uint64_t lambda;
};

std::vector<SuiteInstance> g_suite5, g_suite6;

void build_sweep() {
  const double pcts[] = {0.02, 0.04, 0.06, 0.08, 0.10};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    KeySet keys = generate({Distribution::uniform, seed, 1000, 50});
    for (double pct : pcts) {
      SweepRow row;
      row.seed = seed;
      row.pct = pct;
      std::uint64_t lambda = static_cast<std::uint64_t>(
          std::llround(pct * static_cast<double>(keys.n())));
      row.mse_G = greedy_attack(keys, lambda).mse_after;
      row.mse_segE = sege_exact_original(keys, lambda).mse_after;
      row.mse_segE_H = sege_heuristic_original(keys, lambda).mse_after;
      if (binomial_estimate(2 * keys.n() - 2 + lambda, lambda) <= 1e7) {
        row.mse_OPT = optimal_attack(keys, lambda, 1e7).mse_after;
      }
      if (binomial_estimate(keys.n() + lambda - 1, lambda) <= 1e7) {
        row.mse_ROPT = optimal_attack_relaxed(keys, lambda, 1e7).mse_after;
      }
      row.ub_golden = upper_bound(keys, lambda, BoundMethod::golden, 50).value;
      row.ub_binary = upper_bound(keys, lambda, BoundMethod::binary, 50).value;
      row.ub_exact = upper_bound(keys, lambda, BoundMethod::exact).value;
      g_sweep.push_back(row);
    }
  }
}

void c01_single_point() {
  run_criterion(1, "golden single-point", []() -> std::pair<bool, std::string> {
    KeySet keys({2, 11, 13, 19, 32, 36, 39});
    auto t0 = Clock::now();
    std::optional<Key> p = single_point_attack(keys);
    double ms = ms_since(t0);
    bool pass = p.has_value() && *p == 12 && ms < 1.0;
    return {pass, fmt("p=%g, %.3f ms < 1 ms", p ? double(*p) : -1.0, ms)};
  });
}

void c02_greedy_vs_optimal() {
  run_criterion(2, "greedy {12,10} vs optimal {37,38}",
                []() -> std::pair<bool, std::string> {
    KeySet keys({2, 11, 13, 19, 32, 36, 39});
    auto t0 = Clock::now();
    AttackReport greedy = greedy_attack(keys, 2);
    AttackReport opt = optimal_attack(keys, 2);
    double ms = ms_since(t0);
    bool order = greedy.poisons == std::vector<Key>{12, 10};
    bool optset = opt.poisons == std::vector<Key>{37, 38};
    bool strict = opt.mse_after > greedy.mse_after;
    return {order && optset && strict && ms < 1000.0,
            fmt("greedy mse=%.12g, optimal mse=%.12g, %.1f ms",
                greedy.mse_after, opt.mse_after, ms)};
  });
}

void c03_counterexample() {
  run_criterion(3, "structure counterexample {8,56} vs seg+e {1,8}",
                []() -> std::pair<bool, std::string> {
    std::vector<Key> keys;
    for (Key k = 0; k <= 16; ++k) keys.push_back(k);
    for (Key k = 48; k <= 64; ++k) keys.push_back(k);
    std::erase_if(keys,
                  [](Key k) { return k == 1 || k == 8 || k == 56 || k == 63; });
    KeySet ks(keys);
    auto t0 = Clock::now();
    AttackReport opt = optimal_attack(ks, 2);
    AttackReport sege = sege_exact_original(ks, 2);
    double ms = ms_since(t0);
    bool pass = opt.poisons == std::vector<Key>{8, 56} &&
                sege.poisons == std::vector<Key>{1, 8} &&
                opt.mse_after > sege.mse_after && ms < 5000.0;
    return {pass, fmt("optimal mse=%.12g > seg+e mse=%.12g, %.1f ms",
                      opt.mse_after, sege.mse_after, ms)};
  });
}

void c04_single_point_oracle() {
  run_criterion(4, "single-point equals interior brute force, 500 cases",
                []() -> std::pair<bool, std::string> {
    auto t0 = Clock::now();
    SplitMix64 rng(1001);
    int mismatches = 0;
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<Key> keys = random_keys(rng, 10, 64);
      KeySet ks(keys);
      PoisonEvaluator eval(ks);
      double brute = -1.0;
      std::size_t t = 0;
      for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
        for (Key p = keys[i] + 1; p < keys[i + 1]; ++p) {
          while (t < keys.size() && keys[t] < p) ++t;
          brute = std::max(brute, eval.mse_one(p, t));
        }
      }
      std::optional<Key> single = single_point_attack(ks);
      if (single) {
        std::size_t ts = std::lower_bound(keys.begin(), keys.end(), *single) -
                         keys.begin();
        if (eval.mse_one(*single, ts) != brute) ++mismatches;
      } else {
        if (brute >= eval.base_mse()) ++mismatches;
      }
    }
    double ms = ms_since(t0);
    return {mismatches == 0 && ms < 10000.0,
            fmt("%g mismatches, %.0f ms < 10 s", double(mismatches), ms)};
  });
}

void c05_optimal_oracle() {
  run_criterion(5, "pruned optimal equals brute force, 200 cases",
                []() -> std::pair<bool, std::string> {
    auto t0 = Clock::now();
    SplitMix64 rng(1002);
    int mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Key> keys = random_keys(rng, 8, 48);
      std::uint64_t lambda = 1 + rng.next() % 3;
      KeySet ks(keys);
      double pruned = optimal_attack(ks, lambda, 1e8).mse_after;
      double brute = optimal_attack_bruteforce(ks, lambda, 1e8).mse_after;
      if (pruned != brute) ++mismatches;
      g_suite5.push_back({keys, lambda});
    }
    double ms = ms_since(t0);
    return {mismatches == 0 && ms < 60000.0,
            fmt("%g mismatches, %.0f ms < 60 s", double(mismatches), ms)};
  });
}

void c06_saturation() {
  run_criterion(6, "relaxed optimum saturates the budget, 200 cases",
                []() -> std::pair<bool, std::string> {
    auto t0 = Clock::now();
    SplitMix64 rng(1003);
    int mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Key> keys = random_keys(rng, 8, 64);
      std::uint64_t lambda = 1 + rng.next() % 4;
      KeySet ks(keys);
      double saturated = optimal_attack_relaxed(ks, lambda, 1e8).mse_after;
      double relaxed =
          optimal_attack_relaxed_unsaturated(ks, lambda, 1e8).mse_after;
      if (saturated != relaxed) ++mismatches;
      g_suite6.push_back({keys, lambda});
    }
    double ms = ms_since(t0);
    return {mismatches == 0 && ms < 60000.0,
            fmt("%g mismatches, %.0f ms < 60 s", double(mismatches), ms)};
  });
}

void c07_c08_sweep() {
  auto t0 = Clock::now();
  build_sweep();

  run_criterion(7, "sandwich chain on suites and the desk-scale sweep",
                [&]() -> std::pair<bool, std::string> {
    int violations = 0;
    auto check_chain = [&](double g, std::optional<double> opt,
                           std::optional<double> ropt, double ub) {
      double lower = g;
      if (opt) {
        if (!leq_with_slack(lower, *opt)) ++violations;
        lower = *opt;
      }
      if (ropt) {
        if (!leq_with_slack(lower, *ropt)) ++violations;
        lower = *ropt;
      }
      if (!leq_with_slack(lower, ub)) ++violations;
    };
    for (const auto& inst : g_suite5) {
      KeySet ks(inst.keys);
      check_chain(greedy_attack(ks, inst.lambda).mse_after,
                  optimal_attack(ks, inst.lambda, 1e8).mse_after,
                  optimal_attack_relaxed(ks, inst.lambda, 1e8).mse_after,
                  upper_bound(ks, inst.lambda, BoundMethod::exact).value);
    }
    for (const auto& inst : g_suite6) {
      KeySet ks(inst.keys);
      check_chain(greedy_attack(ks, inst.lambda).mse_after,
                  optimal_attack(ks, inst.lambda, 1e8).mse_after,
                  optimal_attack_relaxed(ks, inst.lambda, 1e8).mse_after,
                  upper_bound(ks, inst.lambda, BoundMethod::exact).value);
    }
    for (const SweepRow& row : g_sweep) {
      check_chain(row.mse_G, row.mse_OPT, row.mse_ROPT, row.ub_exact);
    }
    double ms = ms_since(t0);
    return {violations == 0 && ms < 300000.0,
            fmt("%g violations over %g instances, %.0f ms < 5 min",
                double(violations),
                double(g_suite5.size() + g_suite6.size() + g_sweep.size()),
                ms)};
  });

  run_criterion(8, "golden/binary/exact agree within 1e-9 on the sweep",
                []() -> std::pair<bool, std::string> {
    double worst = 0.0;
    for (const SweepRow& row : g_sweep) {
      worst = std::max(worst, std::fabs(row.ub_golden - row.ub_exact));
      worst = std::max(worst, std::fabs(row.ub_binary - row.ub_exact));
    }
    return {worst <= 1e-9, fmt("max |diff| = %.3g <= 1e-9", worst)};
  });
}

void c09_tightness() {
  run_criterion(9, "greedy-to-bound ratio min >= 0.75, mean >= 0.90",
                []() -> std::pair<bool, std::string> {
    double min_ratio = 1e300, sum = 0.0;
    for (const SweepRow& row : g_sweep) {
      double ratio = row.mse_G / row.ub_golden;
      min_ratio = std::min(min_ratio, ratio);
      sum += ratio;
    }
    double mean = sum / static_cast<double>(g_sweep.size());
    return {min_ratio >= 0.75 && mean >= 0.90,
            fmt("min=%.4f >= 0.75, mean=%.4f >= 0.90", min_ratio, mean)};
  });
}

void c10_sege_dominance() {
  run_criterion(10, "seg+e dominates greedy; heuristic within 0.999",
                []() -> std::pair<bool, std::string> {
    int violations = 0;
    double worst_h = 1.0;
    for (const SweepRow& row : g_sweep) {
      if (!leq_with_slack(row.mse_G, row.mse_segE, 1e-12)) ++violations;
      worst_h = std::min(worst_h, row.mse_segE_H / row.mse_segE);
    }
    return {violations == 0 && worst_h >= 0.999,
            fmt("%g dominance violations, worst heuristic ratio=%.6f",
                double(violations), worst_h)};
  });
}

void c11_relaxed_sege_optimality() {
  run_criterion(11, "relaxed seg+e equals the relaxed optimum (measured)",
                []() -> std::pair<bool, std::string> {
    int counterexamples = 0;
    for (const auto& inst : g_suite6) {
      KeySet ks(inst.keys);
      double sege = sege_exact_relaxed(ks, inst.lambda).report.mse_after;
      double ropt = optimal_attack_relaxed(ks, inst.lambda, 1e8).mse_after;
      double scale = std::max({1.0, sege, ropt});
      if (std::fabs(sege - ropt) > 1e-12 * scale) {
        ++counterexamples;
        std::printf("  conjecture counterexample: lambda=%llu sege=%.17g "
                    "ropt=%.17g keys:",
                    static_cast<unsigned long long>(inst.lambda), sege, ropt);
        for (Key k : inst.keys) {
          std::printf(" %llu", static_cast<unsigned long long>(k));
        }
        std::printf("\n");
      }
    }
    return {counterexamples == 0,
            fmt("%g counterexamples over %g pinned instances",
                double(counterexamples), double(g_suite6.size()))};
  });
}

void c12_envelope() {
  run_criterion(12, "envelope equals pointwise max, piece bound holds",
                []() -> std::pair<bool, std::string> {
    auto t0 = Clock::now();
    SplitMix64 rng(1004);
    int violations = 0;
    for (int family = 0; family < 100; ++family) {
      std::size_t m = 1 + rng.next() % 64;
      std::vector<QuadraticFn> fns;
      for (std::size_t i = 0; i < m; ++i) {
        fns.push_back(QuadraticFn{0.1 + rng.next_unit() * 10.0,
                                  (rng.next_unit() - 0.5) * 40.0,
                                  (rng.next_unit() - 0.5) * 100.0});
      }
      PiecewiseQuadratic env = upper_envelope(fns);
      if (env.piece_count() > 2 * m - 1) ++violations;
      for (int s = 0; s < 1000; ++s) {
        double w = (rng.next_unit() - 0.5) * 60.0;
        double direct = -1e300;
        for (const QuadraticFn& f : fns) direct = std::max(direct, f.eval(w));
        if (std::fabs(env.eval(w) - direct) >
            1e-9 * std::max(1.0, std::fabs(direct))) {
          ++violations;
        }
      }
    }
    double ms = ms_since(t0);
    return {violations == 0 && ms < 10000.0,
            fmt("%g violations, %.0f ms < 10 s", double(violations), ms)};
  });
}

void c13_optimal_b() {
  run_criterion(13, "closed-form inner step equals exhaustive scan, 1000 cases",
                []() -> std::pair<bool, std::string> {
    auto t0 = Clock::now();
    SplitMix64 rng(1005);
    int mismatches = 0;
    int cases = 0;
    while (cases < 1000) {
      std::vector<Key> keys = random_keys(rng, 12, 400);
      if (keys.size() < 3) continue;
      ++cases;
      KeySet ks(keys);
      PrefixSums ps = build_prefix_sums(ks);
      std::uint64_t lambda = 1 + rng.next() % 12;
      std::uint64_t a = rng.next() % (lambda + 1);
      std::uint64_t i = 2 + rng.next() % (keys.size() - 2);
      auto mse_at = [&](std::uint64_t b) {
        PoisonedMoments mo = poisoned_moments(ps, a, b, i, lambda);
        return mo.var_r - mo.cov_kr * mo.cov_kr / mo.var_k;
      };
      double best = -1.0;
      for (std::uint64_t b = 0; b <= lambda - a; ++b) {
        best = std::max(best, mse_at(b));
      }
      if (mse_at(get_optimal_b(ps, a, i, lambda)) != best) ++mismatches;
    }
    double ms = ms_since(t0);
    return {mismatches == 0 && ms < 10000.0,
            fmt("%g mismatches, %.0f ms < 10 s", double(mismatches), ms)};
  });
}

void c14_lookup() {
  run_criterion(14, "poisoning does not shrink lookup probe counts",
                []() -> std::pair<bool, std::string> {
    auto t0 = Clock::now();
    KeySet keys = generate({Distribution::uniform, 0, 100000, 1000});
    std::uint64_t lambda = static_cast<std::uint64_t>(
        std::llround(0.2 * static_cast<double>(keys.n())));
    BenchReport bench = run_bench(keys, lambda, AttackMethod::greedy, 3, 0);
    double legit = bench.config("legit").mean_probes;
    double attack = bench.config("attack").mean_probes;
    double random = bench.config("random").mean_probes;
    double ms = ms_since(t0);
    bool pass = attack >= random && random >= legit * 0.95 && ms < 30000.0;
    return {pass, fmt("probes: greedy=%.3f >= random=%.3f >= legit-noise "
                      "(legit=%.3f)",
                      attack, random, legit)};
  });
}

void c15_complexity() {
  run_criterion(15, "bound scales sub-quadratically, greedy super-linearly",
                []() -> std::pair<bool, std::string> {
    auto t0 = Clock::now();
    auto median_time = [](const std::function<void()>& fn) {
      double runs[3];
      for (int r = 0; r < 3; ++r) {
        auto s = Clock::now();
        fn();
        runs[r] = ms_since(s);
      }
      std::sort(runs, runs + 3);
      return runs[1];
    };
    auto slope = [](const std::vector<double>& ns,
                    const std::vector<double>& ts) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      double k = static_cast<double>(ns.size());
      for (std::size_t i = 0; i < ns.size(); ++i) {
        double x = std::log(ns[i]), y = std::log(ts[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      return (k * sxy - sx * sy) / (k * sxx - sx * sx);
    };

    std::vector<double> bound_n = {1e3, 1e4, 1e5}, bound_t;
    for (double n : bound_n) {
      KeySet keys = generate({Distribution::uniform, 1,
                              static_cast<std::uint64_t>(n) * 1000,
                              static_cast<std::uint64_t>(n)});
      std::uint64_t lambda = static_cast<std::uint64_t>(n / 10);
      bound_t.push_back(median_time(
          [&] { upper_bound(keys, lambda, BoundMethod::golden, 50); }));
    }
    double bound_slope = slope(bound_n, bound_t);

    std::vector<double> greedy_n = {1e3, 4e3, 16e3}, greedy_t;
    for (double n : greedy_n) {
      KeySet keys = generate({Distribution::uniform, 1,
                              static_cast<std::uint64_t>(n) * 1000,
                              static_cast<std::uint64_t>(n)});
      std::uint64_t lambda = static_cast<std::uint64_t>(n / 10);
      greedy_t.push_back(median_time([&] { greedy_attack(keys, lambda); }));
    }
    double greedy_slope = slope(greedy_n, greedy_t);
    double ms = ms_since(t0);
    bool pass = bound_slope < 1.5 && greedy_slope > 1.2 && ms < 120000.0;
    return {pass, fmt("bound exponent=%.2f < 1.5, greedy exponent=%.2f > 1.2, "
                      "%.0f ms < 2 min",
                      bound_slope, greedy_slope, ms)};
  });
}

}  // namespace

int main() {
  auto t0 = Clock::now();
  c01_single_point();
  c02_greedy_vs_optimal();
  c03_counterexample();
  c04_single_point_oracle();
  c05_optimal_oracle();
  c06_saturation();
  c07_c08_sweep();
  c09_tightness();
  c10_sege_dominance();
  c11_relaxed_sege_optimality();
  c12_envelope();
  c13_optimal_b();
  c14_lookup();
  c15_complexity();
  std::printf("%d of 15 criteria failed, total %.1f s\n", g_failures,
              ms_since(t0) / 1000.0);
  return g_failures;
}
