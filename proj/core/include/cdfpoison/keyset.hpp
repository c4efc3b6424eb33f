#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cdfpoison/errors.hpp"

namespace cdfpoison {

using Key = std::uint64_t;

// Strictly increasing legitimate keys. At least two keys, so the key
// variance is always positive.
class KeySet {
 public:
  explicit KeySet(std::vector<Key> keys) : keys_(std::move(keys)) {
    if (keys_.size() < 2) {
      throw DegenerateInput("KeySet needs at least two keys");
    }
    for (std::size_t i = 1; i < keys_.size(); ++i) {
      if (keys_[i - 1] >= keys_[i]) {
        throw DegenerateInput("KeySet keys must be strictly increasing");
      }
    }
  }

  std::size_t n() const { return keys_.size(); }
  const std::vector<Key>& keys() const { return keys_; }
  Key operator[](std::size_t i) const { return keys_[i]; }
  Key front() const { return keys_.front(); }
  Key back() const { return keys_.back(); }

  // Free integers strictly between front() and back() that are not keys.
  std::uint64_t interior_free_count() const {
    return (back() - front() - 1) - (n() - 2);
  }

 private:
  std::vector<Key> keys_;
};

// Non-decreasing values with at least two distinct entries; position i
// carries rank i+1. The regression target of every fit.
class RankedMultiset {
 public:
  explicit RankedMultiset(std::vector<Key> values) : values_(std::move(values)) {
    if (values_.size() < 2 || values_.front() == values_.back()) {
      throw DegenerateInput("RankedMultiset needs two distinct values");
    }
    for (std::size_t i = 1; i < values_.size(); ++i) {
      if (values_[i - 1] > values_[i]) {
        throw DegenerateInput("RankedMultiset values must be non-decreasing");
      }
    }
  }

  std::size_t m() const { return values_.size(); }
  const std::vector<Key>& values() const { return values_; }

 private:
  std::vector<Key> values_;
};

}  // namespace cdfpoison
