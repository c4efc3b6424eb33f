#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdfpoison/datasets.hpp"
#include "cdfpoison/keyset.hpp"

namespace cdfpoison {

// Ratio-experiment driver: one dataset per (seed, pct), lambda =
// round(pct * n) on the post-deduplication n. Enumeration-based columns
// are filled only when their candidate counts fit the caps.
struct ExperimentSpec {
  std::optional<SynthSpec> synth;   // seed field is overridden per row
  std::optional<SliceSpec> slice;   // likewise
  std::string dataset_label = "uniform";
  std::vector<std::uint64_t> seeds;
  std::vector<double> pcts;  // in (0, 1]
  double limit_opt = 1e7;
  double limit_ropt = 1e7;
  int iters = 50;
  bool run_optimal = true;
  bool run_relaxed = true;
};

struct RatioRow {
  std::uint64_t seed = 0;
  std::string dataset;
  double pct = 0.0;
  double mse_L = 0.0, mse_G = 0.0, mse_segE = 0.0, mse_segE_H = 0.0;
  std::optional<double> mse_OPT, mse_ROPT;
  double mse_UB = 0.0;
  std::optional<double> rho_G, rho_R, rho_UB;
  std::string error;  // empty on success
};

std::vector<RatioRow> run_experiment(const ExperimentSpec& spec);

// CSV serialization. Header is fixed; MSE and ratio columns carry 17
// significant digits; absent optional columns are empty.
std::string ratio_csv_header();
std::string to_csv_row(const RatioRow& row);

}  // namespace cdfpoison
