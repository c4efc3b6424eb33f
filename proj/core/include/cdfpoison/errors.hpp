#pragma once

#include <stdexcept>
#include <string>

namespace cdfpoison {

// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fewer than two distinct values, or an otherwise unusable key collection.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

// A poison allocation exceeds the stated budget.
class BudgetViolation : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

// An enumeration would visit more candidates than the caller-set cap.
class SearchSpaceTooLarge : public Error {
 public:
  SearchSpaceTooLarge(double candidate_count, double limit)
      : Error("search space of ~" + std::to_string(candidate_count) +
              " candidates exceeds limit " + std::to_string(limit)),
        candidates(candidate_count),
        cap(limit) {}
  double candidates;
  double cap;
};

// No poison placement satisfies the constraints of the requested attack.
class NoFeasiblePoison : public Error {
 public:
  using Error::Error;
};

// The initial value bracket of the binary-search solver is infeasible.
class InvalidBracket : public Error {
 public:
  using Error::Error;
};

class FileTooSmall : public Error {
 public:
  using Error::Error;
};

class MalformedFile : public Error {
 public:
  using Error::Error;
};

// Sampling produced fewer than two distinct keys.
class DegenerateSample : public Error {
 public:
  using Error::Error;
};

// A benchmark lookup asked for a key that is not in the array.
class KeyNotFound : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cdfpoison
