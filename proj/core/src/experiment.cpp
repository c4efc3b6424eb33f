#include "cdfpoison/experiment.hpp"

#include <cmath>
#include <cstdio>

#include "cdfpoison/attacks.hpp"
#include "cdfpoison/bound.hpp"
#include "cdfpoison/optimal.hpp"
#include "cdfpoison/seg_e.hpp"

namespace cdfpoison {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt17(*v) : std::string();
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

RatioRow run_row(const ExperimentSpec& spec, std::uint64_t seed, double pct) {
  RatioRow row;
  row.seed = seed;
  row.dataset = spec.dataset_label;
  row.pct = pct;

  KeySet keys = [&] {
    if (spec.synth) {
      SynthSpec s = *spec.synth;
      s.seed = seed;
      return generate(s);
    }
    SliceSpec s = *spec.slice;
    s.seed = seed;
    return load_slice(s);
  }();

  const std::uint64_t n = keys.n();
  const std::uint64_t lambda =
      static_cast<std::uint64_t>(std::llround(pct * static_cast<double>(n)));

  row.mse_L = fit(RankedMultiset(keys.keys())).mse;
  row.mse_G = greedy_attack(keys, lambda).mse_after;
  row.mse_segE = sege_exact_original(keys, lambda).mse_after;
  row.mse_segE_H = sege_heuristic_original(keys, lambda).mse_after;
  row.mse_UB = upper_bound(keys, lambda, BoundMethod::golden, spec.iters).value;

  if (spec.run_optimal &&
      binomial_estimate(2 * n - 2 + lambda, lambda) <= spec.limit_opt) {
    row.mse_OPT = optimal_attack(keys, lambda, spec.limit_opt).mse_after;
  }
  if (spec.run_relaxed &&
      binomial_estimate(n + lambda - 1, lambda) <= spec.limit_ropt) {
    row.mse_ROPT = optimal_attack_relaxed(keys, lambda, spec.limit_ropt).mse_after;
  }

  if (row.mse_OPT && *row.mse_OPT > 0) row.rho_G = row.mse_G / *row.mse_OPT;
  if (row.mse_OPT && row.mse_ROPT && *row.mse_ROPT > 0) {
    row.rho_R = *row.mse_OPT / *row.mse_ROPT;
  }
  if (row.mse_ROPT && row.mse_UB > 0) row.rho_UB = *row.mse_ROPT / row.mse_UB;
  return row;
}

}  // namespace

std::vector<RatioRow> run_experiment(const ExperimentSpec& spec) {
  std::vector<RatioRow> rows;
  for (std::uint64_t seed : spec.seeds) {
    for (double pct : spec.pcts) {
      try {
        rows.push_back(run_row(spec, seed, pct));
      } catch (const std::exception& e) {
        RatioRow row;
        row.seed = seed;
        row.dataset = spec.dataset_label;
        row.pct = pct;
        row.error = e.what();
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string ratio_csv_header() {
  return "seed,dataset,pct,mse_L,mse_G,mse_segE,mse_segE_H,mse_OPT,mse_ROPT,"
         "mse_UB,rho_G,rho_R,rho_UB,error";
}

std::string to_csv_row(const RatioRow& row) {
  std::string out;
  out += std::to_string(row.seed);
  out += ',';
  out += sanitize(row.dataset);
  out += ',';
  out += fmt17(row.pct);
  out += ',';
  if (row.error.empty()) {
    out += fmt17(row.mse_L) + ',' + fmt17(row.mse_G) + ',' +
           fmt17(row.mse_segE) + ',' + fmt17(row.mse_segE_H) + ',' +
           fmt_opt(row.mse_OPT) + ',' + fmt_opt(row.mse_ROPT) + ',' +
           fmt17(row.mse_UB) + ',' + fmt_opt(row.rho_G) + ',' +
           fmt_opt(row.rho_R) + ',' + fmt_opt(row.rho_UB) + ',';
  } else {
    out += ",,,,,,,,,,";
  }
  out += sanitize(row.error);
  return out;
}

}  // namespace cdfpoison
