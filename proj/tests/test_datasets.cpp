#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cdfpoison/datasets.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace cdfpoison;

namespace {

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("uniform generation is deterministic and pinned") {
  SynthSpec spec{Distribution::uniform, 42, 10, 3};
  KeySet a = generate(spec);
  KeySet b = generate(spec);
  CHECK(a.keys() == b.keys());
  // frozen from the documented SplitMix64 pipeline
  CHECK(a.keys() == std::vector<Key>{0, 2, 10});
}

TEST_CASE("min-max scaling pins the extremes") {
  for (auto dist :
       {Distribution::uniform, Distribution::normal, Distribution::exponential}) {
    for (std::uint64_t seed : {0ULL, 7ULL, 123ULL}) {
      KeySet ks = generate({dist, seed, 1000, 50});
      CHECK(ks.front() == 0);
      CHECK(ks.back() == 1000);
    }
  }
}

TEST_CASE("generation rejects bad specs") {
  CHECK_THROWS_AS(generate({Distribution::uniform, 0, 0, 10}),
                  DegenerateInput);
  CHECK_THROWS_AS(generate({Distribution::uniform, 0, 10, 1}),
                  DegenerateInput);
}

TEST_CASE("dedup shortfall returns fewer keys without topping up") {
  KeySet ks = generate({Distribution::uniform, 3, 4, 100});
  CHECK(ks.n() <= 5);  // at most range+1 distinct keys exist
  CHECK(ks.n() >= 2);
}

TEST_CASE("binary round trip and slice") {
  auto path = temp_file("cdfpoison_keys_test.bin");
  std::vector<Key> keys;
  for (Key k = 0; k < 1000; ++k) keys.push_back(k);
  write_keys_binary(path, keys);
  CHECK(read_keys_binary(path) == keys);

  SliceSpec spec{path, 10, 5, KeyFileFormat::binary};
  KeySet a = load_slice(spec);
  KeySet b = load_slice(spec);
  CHECK(a.keys() == b.keys());
  CHECK(a.n() == 10);
  for (std::size_t i = 1; i < a.n(); ++i) {
    CHECK(a[i] == a[i - 1] + 1);  // consecutive integers
  }
  std::filesystem::remove(path);
}

TEST_CASE("slice deduplicates and extends forward") {
  auto path = temp_file("cdfpoison_dups_test.bin");
  std::vector<Key> keys = {1, 1, 1, 2, 2, 3, 4, 4, 5, 6, 7, 8};
  write_keys_binary(path, keys);
  SliceSpec spec{path, 5, 0, KeyFileFormat::binary};
  KeySet ks = load_slice(spec);
  for (std::size_t i = 1; i < ks.n(); ++i) CHECK(ks[i] > ks[i - 1]);
  std::filesystem::remove(path);
}

TEST_CASE("slice errors") {
  auto path = temp_file("cdfpoison_small_test.bin");
  write_keys_binary(path, {5, 6, 7});
  CHECK_THROWS_AS(load_slice({path, 10, 0, KeyFileFormat::binary}),
                  FileTooSmall);
  std::filesystem::remove(path);

  auto bad = temp_file("cdfpoison_bad_test.bin");
  write_keys_binary(bad, {5, 3, 7});  // not sorted
  CHECK_THROWS_AS(load_slice({bad, 2, 0, KeyFileFormat::binary}),
                  MalformedFile);
  std::filesystem::remove(bad);

  auto truncated = temp_file("cdfpoison_trunc_test.bin");
  {
    std::vector<Key> keys = {1, 2, 3};
    write_keys_binary(truncated, keys);
    std::filesystem::resize_file(truncated, 20);  // count says 3, data cut
  }
  CHECK_THROWS_AS(read_keys_binary(truncated), MalformedFile);
  std::filesystem::remove(truncated);
}

TEST_CASE("text format round trip") {
  auto path = temp_file("cdfpoison_keys_test.txt");
  std::vector<Key> keys = {2, 11, 13, 19, 32, 36, 39};
  write_keys_text(path, keys);
  CHECK(read_keys_text(path) == keys);
  KeySet ks = load_slice({path, 7, 0, KeyFileFormat::text});
  CHECK(ks.keys() == keys);
  std::filesystem::remove(path);

  auto bad = temp_file("cdfpoison_bad_test.txt");
  {
    std::ofstream out(bad);
    out << "12\nnot_a_key\n";
  }
  CHECK_THROWS_AS(read_keys_text(bad), MalformedFile);
  std::filesystem::remove(bad);
}
