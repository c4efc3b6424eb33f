// Command-line front end: dataset generation, poisoning attacks, upper
// bounds, ratio experiments, and the lookup-time benchmark.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cdfpoison/bound.hpp"
#include "cdfpoison/datasets.hpp"
#include "cdfpoison/dispatch.hpp"
#include "cdfpoison/experiment.hpp"
#include "cdfpoison/lookup.hpp"
#include "cdfpoison/seg_e.hpp"
#include "json.hpp"

namespace {

using namespace cdfpoison;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitSearchSpace = 3;
constexpr int kExitIo = 4;

double wall_ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

KeyFileFormat parse_format(const std::string& s) {
  if (s == "bin") return KeyFileFormat::binary;
  if (s == "txt") return KeyFileFormat::text;
  throw DegenerateInput("unknown format: " + s + " (expected bin or txt)");
}

KeySet load_keyset(const std::string& path, const std::string& format) {
  std::vector<Key> keys = read_keys(path, parse_format(format));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return KeySet(std::move(keys));
}

std::uint64_t resolve_lambda(std::optional<std::uint64_t> lambda,
                             std::optional<double> pct, std::size_t n) {
  if (lambda && pct) {
    throw DegenerateInput("give either --lambda or --pct, not both");
  }
  if (lambda) return *lambda;
  if (pct) {
    if (*pct <= 0.0 || *pct > 1.0) {
      throw DegenerateInput("--pct must lie in (0, 1]");
    }
    return static_cast<std::uint64_t>(
        std::llround(*pct * static_cast<double>(n)));
  }
  throw DegenerateInput("one of --lambda or --pct is required");
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot open " + out_path + " for writing");
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + out_path);
}

// Seed lists accept "0..19" ranges and comma-separated values.
std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t comma = spec.find(',', pos);
    std::string tok = spec.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t dots = tok.find("..");
    if (dots != std::string::npos) {
      std::uint64_t lo = std::stoull(tok.substr(0, dots));
      std::uint64_t hi = std::stoull(tok.substr(dots + 2));
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    } else if (!tok.empty()) {
      seeds.push_back(std::stoull(tok));
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (seeds.empty()) throw DegenerateInput("empty seed list");
  return seeds;
}

json report_to_json(const AttackReport& report, std::uint64_t lambda,
                    std::size_t n) {
  json j;
  j["method"] = to_string(report.method);
  j["lambda"] = lambda;
  j["n"] = n;
  j["mse_before"] = report.mse_before;
  j["mse_after"] = report.mse_after;
  j["poisons"] = report.poisons;
  if (!report.counts.empty()) j["counts"] = report.counts;
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"poisoning attacks and provable bounds for rank regression"};
  app.require_subcommand(1);

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic key file");
  std::string gen_dist = "uniform", gen_out, gen_format = "bin";
  std::uint64_t gen_range = 100000, gen_n = 1000, gen_seed = 0;
  gen_cmd->add_option("--dist", gen_dist, "uniform|normal|exponential");
  gen_cmd->add_option("--R,--range", gen_range, "key range upper bound");
  gen_cmd->add_option("--n", gen_n, "sample count before deduplication");
  gen_cmd->add_option("--seed", gen_seed, "generator seed");
  gen_cmd->add_option("--out", gen_out, "output key file")->required();
  gen_cmd->add_option("--format", gen_format, "bin|txt");

  // attack
  auto* atk_cmd = app.add_subcommand("attack", "run a poisoning attack");
  std::string atk_input, atk_format = "bin", atk_method = "greedy", atk_out;
  std::optional<std::uint64_t> atk_lambda;
  std::optional<double> atk_pct;
  double atk_limit = kDefaultEnumerationLimit;
  atk_cmd->add_option("--input", atk_input, "key file")->required();
  atk_cmd->add_option("--format", atk_format, "bin|txt");
  atk_cmd->add_option("--method", atk_method,
                      "single|greedy|sege-exact|sege-heuristic|sege-relaxed|"
                      "optimal|optimal-relaxed");
  atk_cmd->add_option("--lambda", atk_lambda, "poisoning budget");
  atk_cmd->add_option("--pct", atk_pct, "budget as a fraction of n");
  atk_cmd->add_option("--limit", atk_limit, "enumeration candidate cap");
  atk_cmd->add_option("--out", atk_out, "JSON output path (default stdout)");

  // bound
  auto* bnd_cmd = app.add_subcommand("bound", "compute the attack ceiling");
  std::string bnd_input, bnd_format = "bin", bnd_method = "golden", bnd_out;
  std::optional<std::uint64_t> bnd_lambda;
  std::optional<double> bnd_pct;
  int bnd_iters = 50;
  bnd_cmd->add_option("--input", bnd_input, "key file")->required();
  bnd_cmd->add_option("--format", bnd_format, "bin|txt");
  bnd_cmd->add_option("--method", bnd_method, "golden|binary|exact");
  bnd_cmd->add_option("--lambda", bnd_lambda, "poisoning budget");
  bnd_cmd->add_option("--pct", bnd_pct, "budget as a fraction of n");
  bnd_cmd->add_option("--iters", bnd_iters, "solver iterations T");
  bnd_cmd->add_option("--out", bnd_out, "JSON output path (default stdout)");

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "ratio sweep to CSV");
  std::string exp_dist = "uniform", exp_input, exp_format = "bin", exp_out;
  std::string exp_seeds = "0..19", exp_pcts = "0.02,0.04,0.06,0.08,0.1";
  std::uint64_t exp_range = 1000, exp_n = 50;
  double exp_limit = kDefaultEnumerationLimit;
  int exp_iters = 50;
  bool exp_no_optimal = false, exp_no_relaxed = false;
  exp_cmd->add_option("--dist", exp_dist, "uniform|normal|exponential");
  exp_cmd->add_option("--R,--range", exp_range, "synthetic key range");
  exp_cmd->add_option("--n", exp_n, "synthetic sample count or slice length");
  exp_cmd->add_option("--input", exp_input, "real key file (slices per seed)");
  exp_cmd->add_option("--format", exp_format, "bin|txt");
  exp_cmd->add_option("--seeds", exp_seeds, "e.g. 0..19 or 0,3,7");
  exp_cmd->add_option("--pcts", exp_pcts, "comma-separated fractions of n");
  exp_cmd->add_option("--limit", exp_limit, "enumeration candidate cap");
  exp_cmd->add_option("--iters", exp_iters, "bound solver iterations T");
  exp_cmd->add_flag("--no-optimal", exp_no_optimal, "skip mse_OPT column");
  exp_cmd->add_flag("--no-relaxed", exp_no_relaxed, "skip mse_ROPT column");
  bool exp_json = false, exp_csv = false;
  exp_cmd->add_flag("--json", exp_json, "emit rows as a JSON array");
  exp_cmd->add_flag("--csv", exp_csv, "emit CSV (the default)");
  exp_cmd->add_option("--out", exp_out, "output path (default stdout)");

  // lookup-bench
  auto* lkp_cmd = app.add_subcommand("lookup-bench", "lookup-time benchmark");
  std::string lkp_dist = "uniform", lkp_input, lkp_format = "bin";
  std::string lkp_method = "greedy", lkp_out;
  std::uint64_t lkp_range = 100000, lkp_n = 1000, lkp_seed = 0;
  std::optional<std::uint64_t> lkp_lambda;
  std::optional<double> lkp_pct;
  int lkp_reps = 10;
  lkp_cmd->add_option("--dist", lkp_dist, "uniform|normal|exponential");
  lkp_cmd->add_option("--R,--range", lkp_range, "synthetic key range");
  lkp_cmd->add_option("--n", lkp_n, "synthetic sample count");
  lkp_cmd->add_option("--seed", lkp_seed, "dataset and control seed");
  lkp_cmd->add_option("--input", lkp_input, "key file instead of synthetic");
  lkp_cmd->add_option("--format", lkp_format, "bin|txt");
  lkp_cmd->add_option("--method", lkp_method, "attack method");
  lkp_cmd->add_option("--lambda", lkp_lambda, "poisoning budget");
  lkp_cmd->add_option("--pct", lkp_pct, "budget as a fraction of n");
  lkp_cmd->add_option("--reps", lkp_reps, "measurements per key");
  lkp_cmd->add_option("--out", lkp_out, "JSON output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (gen_cmd->parsed()) {
    SynthSpec spec{distribution_from_string(gen_dist), gen_seed, gen_range,
                   gen_n};
    KeySet keys = generate(spec);
    if (parse_format(gen_format) == KeyFileFormat::binary) {
      write_keys_binary(gen_out, keys.keys());
    } else {
      write_keys_text(gen_out, keys.keys());
    }
    std::cout << "n=" << keys.n() << " min=" << keys.front()
              << " max=" << keys.back() << "\n";
    return kExitOk;
  }

  if (atk_cmd->parsed()) {
    KeySet keys = load_keyset(atk_input, atk_format);
    std::uint64_t lambda = resolve_lambda(atk_lambda, atk_pct, keys.n());
    auto method = attack_method_from_string(atk_method);
    if (!method) throw DegenerateInput("unknown method: " + atk_method);
    auto t0 = std::chrono::steady_clock::now();
    AttackReport report = run_attack(keys, *method, lambda, atk_limit);
    json j = report_to_json(report, lambda, keys.n());
    j["wall_ms"] = wall_ms_since(t0);
    emit(j, atk_out);
    return kExitOk;
  }

  if (bnd_cmd->parsed()) {
    KeySet keys = load_keyset(bnd_input, bnd_format);
    std::uint64_t lambda = resolve_lambda(bnd_lambda, bnd_pct, keys.n());
    BoundMethod method;
    if (bnd_method == "golden") {
      method = BoundMethod::golden;
    } else if (bnd_method == "binary") {
      method = BoundMethod::binary;
    } else if (bnd_method == "exact") {
      method = BoundMethod::exact;
    } else {
      throw DegenerateInput("unknown bound method: " + bnd_method);
    }
    auto t0 = std::chrono::steady_clock::now();
    BoundResult res = upper_bound(keys, lambda, method, bnd_iters);
    json j;
    j["method"] = to_string(res.method);
    j["lambda"] = lambda;
    j["n"] = keys.n();
    j["iters"] = bnd_iters;
    j["value"] = res.value;
    j["w_star"] = res.w_star;
    j["wall_ms"] = wall_ms_since(t0);
    emit(j, bnd_out);
    return kExitOk;
  }

  if (exp_cmd->parsed()) {
    ExperimentSpec spec;
    if (!exp_input.empty()) {
      spec.slice = SliceSpec{exp_input, exp_n, 0, parse_format(exp_format)};
      spec.dataset_label = std::filesystem::path(exp_input).stem().string();
    } else {
      spec.synth =
          SynthSpec{distribution_from_string(exp_dist), 0, exp_range, exp_n};
      spec.dataset_label = exp_dist;
    }
    spec.seeds = parse_seeds(exp_seeds);
    for (const std::string& tok : CLI::detail::split(exp_pcts, ',')) {
      if (!tok.empty()) spec.pcts.push_back(std::stod(tok));
    }
    if (spec.pcts.empty()) throw DegenerateInput("empty pct list");
    for (double p : spec.pcts) {
      if (p <= 0.0 || p > 1.0) {
        throw DegenerateInput("--pcts entries must lie in (0, 1]");
      }
    }
    spec.limit_opt = exp_limit;
    spec.limit_ropt = exp_limit;
    spec.iters = exp_iters;
    spec.run_optimal = !exp_no_optimal;
    spec.run_relaxed = !exp_no_relaxed;

    if (exp_json && exp_csv) {
      throw DegenerateInput("pick one of --json or --csv");
    }
    std::vector<RatioRow> rows = run_experiment(spec);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!exp_out.empty()) {
      file.open(exp_out);
      if (!file) throw IoError("cannot open " + exp_out + " for writing");
      out = &file;
    }
    if (exp_json) {
      json arr = json::array();
      for (const RatioRow& row : rows) {
        json j;
        j["seed"] = row.seed;
        j["dataset"] = row.dataset;
        j["pct"] = row.pct;
        if (row.error.empty()) {
          j["mse_L"] = row.mse_L;
          j["mse_G"] = row.mse_G;
          j["mse_segE"] = row.mse_segE;
          j["mse_segE_H"] = row.mse_segE_H;
          if (row.mse_OPT) j["mse_OPT"] = *row.mse_OPT;
          if (row.mse_ROPT) j["mse_ROPT"] = *row.mse_ROPT;
          j["mse_UB"] = row.mse_UB;
          if (row.rho_G) j["rho_G"] = *row.rho_G;
          if (row.rho_R) j["rho_R"] = *row.rho_R;
          if (row.rho_UB) j["rho_UB"] = *row.rho_UB;
        } else {
          j["error"] = row.error;
        }
        arr.push_back(j);
      }
      *out << arr.dump(2) << "\n";
    } else {
      *out << ratio_csv_header() << "\n";
      for (const RatioRow& row : rows) *out << to_csv_row(row) << "\n";
    }
    if (!*out) throw IoError("experiment output write failed");
    return kExitOk;
  }

  if (lkp_cmd->parsed()) {
    KeySet keys = lkp_input.empty()
                      ? generate(SynthSpec{distribution_from_string(lkp_dist),
                                           lkp_seed, lkp_range, lkp_n})
                      : load_keyset(lkp_input, lkp_format);
    std::uint64_t lambda = resolve_lambda(lkp_lambda, lkp_pct, keys.n());
    auto method = attack_method_from_string(lkp_method);
    if (!method) throw DegenerateInput("unknown method: " + lkp_method);
    BenchReport report = run_bench(keys, lambda, *method, lkp_reps, lkp_seed);
    json j;
    j["n"] = report.n;
    j["lambda"] = report.lambda;
    j["reps"] = report.reps;
    j["method"] = to_string(*method);
    j["configs"] = json::array();
    for (const LookupConfig& c : report.configs) {
      j["configs"].push_back({{"name", c.name},
                              {"mean_ns", c.mean_ns},
                              {"mean_probes", c.mean_probes}});
    }
    emit(j, lkp_out);
    return kExitOk;
  }

  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const SearchSpaceTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSearchSpace;
  } catch (const FileTooSmall& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const MalformedFile& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
