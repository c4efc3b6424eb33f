#include "cdfpoison/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "cdfpoison/splitmix64.hpp"

namespace cdfpoison {

namespace {

void put_u64_le(std::ofstream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, 8);
}

std::uint64_t get_u64_le(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  if (!in) throw MalformedFile("truncated 8-byte value");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

double draw(Distribution dist, SplitMix64& rng) {
  switch (dist) {
    case Distribution::uniform:
      return rng.next_unit();
    case Distribution::normal: {
      double u1 = rng.next_unit_open();
      double u2 = rng.next_unit();
      return std::sqrt(-2.0 * std::log(u1)) *
             std::cos(2.0 * std::numbers::pi * u2);
    }
    case Distribution::exponential:
      return -std::log(rng.next_unit_open());
  }
  throw Error("unknown distribution");
}

}  // namespace

std::string to_string(Distribution d) {
  switch (d) {
    case Distribution::uniform: return "uniform";
    case Distribution::normal: return "normal";
    case Distribution::exponential: return "exponential";
  }
  return "unknown";
}

Distribution distribution_from_string(const std::string& s) {
  if (s == "uniform") return Distribution::uniform;
  if (s == "normal") return Distribution::normal;
  if (s == "exponential") return Distribution::exponential;
  throw DegenerateInput("unknown distribution: " + s);
}

KeySet generate(const SynthSpec& spec) {
  if (spec.range < 1) throw DegenerateInput("range must be at least 1");
  if (spec.n_target < 2) throw DegenerateInput("n_target must be at least 2");

  SplitMix64 rng(spec.seed);
  std::vector<double> sample(spec.n_target);
  for (double& v : sample) v = draw(spec.distribution, rng);

  auto [lo_it, hi_it] = std::minmax_element(sample.begin(), sample.end());
  double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) throw DegenerateSample("sample has no spread to scale");

  std::vector<Key> keys;
  keys.reserve(sample.size());
  double range = static_cast<double>(spec.range);
  for (double v : sample) {
    double scaled = (v - lo) / (hi - lo) * range;
    keys.push_back(static_cast<Key>(std::llround(scaled)));
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  if (keys.size() < 2) {
    throw DegenerateSample("fewer than two distinct keys after rounding");
  }
  return KeySet(std::move(keys));
}

void write_keys_binary(const std::filesystem::path& path,
                       const std::vector<Key>& keys) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  put_u64_le(out, keys.size());
  for (Key k : keys) put_u64_le(out, k);
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<Key> read_keys_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::uint64_t count = get_u64_le(in);
  std::vector<Key> keys(count);
  for (std::uint64_t i = 0; i < count; ++i) keys[i] = get_u64_le(in);
  char extra;
  if (in.read(&extra, 1)) throw MalformedFile("trailing bytes after keys");
  return keys;
}

void write_keys_text(const std::filesystem::path& path,
                     const std::vector<Key>& keys) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (Key k : keys) out << k << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<Key> read_keys_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<Key> keys;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(line, &pos);
    } catch (const std::exception&) {
      throw MalformedFile("bad key line: " + line);
    }
    if (pos != line.size()) throw MalformedFile("bad key line: " + line);
    keys.push_back(v);
  }
  return keys;
}

std::vector<Key> read_keys(const std::filesystem::path& path,
                           KeyFileFormat format) {
  return format == KeyFileFormat::binary ? read_keys_binary(path)
                                         : read_keys_text(path);
}

KeySet load_slice(const SliceSpec& spec) {
  if (spec.n < 2) throw DegenerateInput("slice length must be at least 2");
  std::vector<Key> all = read_keys(spec.path, spec.format);
  if (all.size() < spec.n) {
    throw FileTooSmall(spec.path.string() + " holds " +
                       std::to_string(all.size()) + " keys, need " +
                       std::to_string(spec.n));
  }
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i - 1] > all[i]) {
      throw MalformedFile("keys are not non-decreasing at index " +
                          std::to_string(i));
    }
  }

  SplitMix64 rng(spec.seed);
  std::uint64_t start = rng.next() % (all.size() - spec.n + 1);

  std::vector<Key> keys;
  keys.reserve(spec.n);
  for (std::size_t i = start; i < all.size() && keys.size() < spec.n; ++i) {
    if (keys.empty() || keys.back() != all[i]) keys.push_back(all[i]);
  }
  if (keys.size() < 2) {
    throw DegenerateSample("slice holds fewer than two distinct keys");
  }
  return KeySet(std::move(keys));
}

}  // namespace cdfpoison
