#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdfpoison/keyset.hpp"
#include "cdfpoison/stats.hpp"

namespace cdfpoison {

// Convex quadratic a2*w^2 + a1*w + a0 with a2 > 0.
struct QuadraticFn {
  double a2 = 1.0, a1 = 0.0, a0 = 0.0;

  double eval(double w) const { return (a2 * w + a1) * w + a0; }
  double vertex() const { return -a1 / (2.0 * a2); }
  double vertex_value() const { return eval(vertex()); }

  friend bool operator==(const QuadraticFn&, const QuadraticFn&) = default;
};

// Piecewise quadratic on intervals [thresholds[i], thresholds[i+1]);
// thresholds[0] = -inf and thresholds.back() = +inf. Adjacent pieces are
// distinct after merging.
struct PiecewiseQuadratic {
  std::vector<double> thresholds;
  std::vector<QuadraticFn> pieces;

  double eval(double w) const;
  std::size_t piece_count() const { return pieces.size(); }
};

enum class BoundMethod { golden, binary, exact };

std::string to_string(BoundMethod m);

struct BoundResult {
  double value = 0.0;
  BoundMethod method = BoundMethod::golden;
  double w_star = 0.0;  // arg of the min
};

// One convex quadratic in w per extremal poison-mass placement: the whole
// budget on a single key (n functions) or split between the two endpoint
// keys (lambda+1 functions). Each evaluates the best-intercept loss of the
// poisoned multiset at slope w. lambda = 0 degenerates to the single
// unpoisoned quadratic.
std::vector<QuadraticFn> candidate_quadratics(const KeySet& keys,
                                              std::uint64_t lambda);

// Minimizes max_i f_i(w) by golden-section search over [smallest vertex,
// largest vertex], widened by +-1 when all vertices coincide.
BoundResult upper_bound_golden(const std::vector<QuadraticFn>& fns, int iters);

// Bisects on the value axis: y is feasible iff the sublevel intervals
// {w : f_i(w) <= y} have a common point. Returns the conservative upper end
// of the bracket. The defaults below bracket the minimum for any family.
BoundResult upper_bound_binary(const std::vector<QuadraticFn>& fns, int iters,
                               double y_lo, double y_hi);
BoundResult upper_bound_binary(const std::vector<QuadraticFn>& fns, int iters);

// Exact pointwise maximum of the family as a piecewise quadratic, built by
// divide-and-conquer merging. At most 2m-1 pieces for m functions.
PiecewiseQuadratic upper_envelope(const std::vector<QuadraticFn>& fns);

// Builds the envelope and minimizes it piece by piece (clamped vertices).
BoundResult upper_bound_exact(const std::vector<QuadraticFn>& fns);

// Provable ceiling on the MSE of any attack with budget lambda: the
// candidate family's min-max value. Dominates the relaxed optimum and
// therefore every original-setting attack.
BoundResult upper_bound(const KeySet& keys, std::uint64_t lambda,
                        BoundMethod method = BoundMethod::golden,
                        int iters = 50);

}  // namespace cdfpoison
