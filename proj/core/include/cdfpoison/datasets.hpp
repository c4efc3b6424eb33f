#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cdfpoison/keyset.hpp"

namespace cdfpoison {

enum class Distribution { uniform, normal, exponential };

std::string to_string(Distribution d);
Distribution distribution_from_string(const std::string& s);

// Synthetic key set: draw n_target reals from the distribution, min-max
// scale the sample to [0, R], round half away from zero, deduplicate.
// Deterministic per seed (SplitMix64 pipeline); the result may hold fewer
// than n_target keys after deduplication.
struct SynthSpec {
  Distribution distribution = Distribution::uniform;
  std::uint64_t seed = 0;
  std::uint64_t range = 1;     // keys land in [0, range]
  std::uint64_t n_target = 2;
};

KeySet generate(const SynthSpec& spec);

enum class KeyFileFormat { binary, text };

// Slice of a sorted key file: a seeded random start position with room for
// n consecutive keys, deduplicated and extended forward until n distinct
// keys or file end.
struct SliceSpec {
  std::filesystem::path path;
  std::uint64_t n = 2;
  std::uint64_t seed = 0;
  KeyFileFormat format = KeyFileFormat::binary;
};

KeySet load_slice(const SliceSpec& spec);

// Binary key file: 8-byte little-endian unsigned count, then count 8-byte
// little-endian unsigned keys, non-decreasing.
void write_keys_binary(const std::filesystem::path& path,
                       const std::vector<Key>& keys);
std::vector<Key> read_keys_binary(const std::filesystem::path& path);

// Text key file: one decimal key per line.
void write_keys_text(const std::filesystem::path& path,
                     const std::vector<Key>& keys);
std::vector<Key> read_keys_text(const std::filesystem::path& path);

std::vector<Key> read_keys(const std::filesystem::path& path,
                           KeyFileFormat format);

}  // namespace cdfpoison
