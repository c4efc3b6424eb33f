#include "cdfpoison/bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cdfpoison {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double envelope_eval(const std::vector<QuadraticFn>& fns, double w) {
  double best = -kInf;
  for (const QuadraticFn& f : fns) best = std::max(best, f.eval(w));
  return best;
}

// Real roots of f(w) = y for a convex quadratic, in ascending order.
// Returns false when the sublevel set is empty.
bool sublevel_interval(const QuadraticFn& f, double y, double& lo,
                       double& hi) {
  double c = f.a0 - y;
  double disc = f.a1 * f.a1 - 4.0 * f.a2 * c;
  if (disc < 0) return false;
  double sq = std::sqrt(disc);
  double q = -0.5 * (f.a1 + std::copysign(sq, f.a1 == 0 ? 1.0 : f.a1));
  double r1 = q / f.a2;
  double r2 = (q == 0) ? r1 : c / q;
  lo = std::min(r1, r2);
  hi = std::max(r1, r2);
  return true;
}

// Crossing points of two quadratics. Discriminants within 1e-12 of zero
// (relative to the equation's own scale) count as tangency: the curves
// touch without exchanging dominance, so no threshold is produced.
int intersection_points(const QuadraticFn& g, const QuadraticFn& h,
                        double out[2]) {
  double d2 = g.a2 - h.a2;
  double d1 = g.a1 - h.a1;
  double d0 = g.a0 - h.a0;
  if (d2 == 0.0) {
    if (d1 == 0.0) return 0;
    out[0] = -d0 / d1;
    return 1;
  }
  double disc = d1 * d1 - 4.0 * d2 * d0;
  double scale = std::max(d1 * d1, std::fabs(4.0 * d2 * d0));
  if (disc <= 1e-12 * scale) return 0;
  double sq = std::sqrt(disc);
  double q = -0.5 * (d1 + std::copysign(sq, d1 == 0 ? 1.0 : d1));
  double r1 = q / d2;
  double r2 = d0 / q;
  out[0] = std::min(r1, r2);
  out[1] = std::max(r1, r2);
  return out[0] == out[1] ? 1 : 2;
}

double probe_point(double l, double r, int which) {
  static const double offsets[3] = {0.5, 0.25, 0.75};
  if (l == -kInf && r == kInf) return which == 0 ? 0.0 : (which == 1 ? 1.0 : -1.0);
  if (l == -kInf) return r - 1.0 - which;
  if (r == kInf) return l + 1.0 + which;
  return l + (r - l) * offsets[which];
}

// True when g >= h on (l, r), given that no dominance switch happens in the
// interior. A probe can land exactly on a tangency point where both are
// equal, so up to three points are tried; a quadratic difference cannot
// vanish at three distinct points unless the functions are identical.
bool dominates(const QuadraticFn& g, const QuadraticFn& h, double l,
               double r) {
  for (int which = 0; which < 3; ++which) {
    double x = probe_point(l, r, which);
    double gv = g.eval(x);
    double hv = h.eval(x);
    if (gv != hv) return gv > hv;
  }
  return true;
}

void append_piece(PiecewiseQuadratic& out, const QuadraticFn& f, double upto) {
  if (!out.pieces.empty() && out.pieces.back() == f) {
    out.thresholds.back() = upto;
    return;
  }
  out.pieces.push_back(f);
  out.thresholds.push_back(upto);
}

PiecewiseQuadratic merge_envelopes(const PiecewiseQuadratic& g,
                                   const PiecewiseQuadratic& h) {
  PiecewiseQuadratic out;
  out.thresholds.push_back(-kInf);
  std::size_t i = 0, j = 0;
  while (i < g.pieces.size() && j < h.pieces.size()) {
    double a = std::max(g.thresholds[i], h.thresholds[j]);
    double b = std::min(g.thresholds[i + 1], h.thresholds[j + 1]);
    if (a < b) {
      const QuadraticFn& gi = g.pieces[i];
      const QuadraticFn& hj = h.pieces[j];
      double roots[2];
      int nroots = intersection_points(gi, hj, roots);
      double cuts[4] = {a, 0, 0, 0};
      int ncuts = 1;
      for (int r = 0; r < nroots; ++r) {
        if (roots[r] > a && roots[r] < b && roots[r] != cuts[ncuts - 1]) {
          cuts[ncuts++] = roots[r];
        }
      }
      cuts[ncuts++] = b;
      for (int s = 0; s + 1 < ncuts; ++s) {
        append_piece(out, dominates(gi, hj, cuts[s], cuts[s + 1]) ? gi : hj,
                     cuts[s + 1]);
      }
    }
    if (g.thresholds[i + 1] <= b) ++i;
    if (h.thresholds[j + 1] <= b) ++j;
  }
  return out;
}

PiecewiseQuadratic build_envelope(const std::vector<QuadraticFn>& fns,
                                  std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) {
    PiecewiseQuadratic pw;
    pw.thresholds = {-kInf, kInf};
    pw.pieces = {fns[lo]};
    return pw;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return merge_envelopes(build_envelope(fns, lo, mid),
                         build_envelope(fns, mid, hi));
}

std::pair<double, double> vertex_span(const std::vector<QuadraticFn>& fns) {
  double lo = kInf, hi = -kInf;
  for (const QuadraticFn& f : fns) {
    double v = f.vertex();
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo == hi) {
    lo -= 1.0;
    hi += 1.0;
  }
  return {lo, hi};
}

}  // namespace

std::string to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::golden: return "golden";
    case BoundMethod::binary: return "binary";
    case BoundMethod::exact: return "exact";
  }
  return "unknown";
}

double PiecewiseQuadratic::eval(double w) const {
  std::size_t idx =
      std::upper_bound(thresholds.begin() + 1, thresholds.end() - 1, w) -
      (thresholds.begin() + 1);
  return pieces[idx].eval(w);
}

std::vector<QuadraticFn> candidate_quadratics(const KeySet& keys,
                                              std::uint64_t lambda) {
  PrefixSums ps = build_prefix_sums(keys);
  const std::uint64_t n = keys.n();
  std::vector<QuadraticFn> fns;
  auto push = [&](std::uint64_t a, std::uint64_t b, std::uint64_t i) {
    PoisonedMoments mo = poisoned_moments(ps, a, b, i, lambda);
    fns.push_back(QuadraticFn{mo.var_k, -2.0 * mo.cov_kr, mo.var_r});
  };
  if (lambda == 0) {
    push(0, 0, 1);
    return fns;
  }
  // Whole budget on one key.
  push(lambda, 0, 1);
  for (std::uint64_t i = 2; i <= n - 1; ++i) push(0, lambda, i);
  push(0, 0, 1);
  // Budget split between the two endpoint keys.
  for (std::uint64_t a = 0; a <= lambda; ++a) push(a, 0, 1);
  return fns;
}

BoundResult upper_bound_golden(const std::vector<QuadraticFn>& fns,
                               int iters) {
  auto [a, b] = vertex_span(fns);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  double wl = b - (b - a) / phi;
  double wr = a + (b - a) / phi;
  double yl = envelope_eval(fns, wl);
  double yr = envelope_eval(fns, wr);
  for (int t = 0; t < iters; ++t) {
    if (yl > yr) {
      a = wl;
      wl = wr;
      wr = a + (b - a) / phi;
      yl = yr;
      yr = envelope_eval(fns, wr);
    } else {
      b = wr;
      wr = wl;
      wl = b - (b - a) / phi;
      yr = yl;
      yl = envelope_eval(fns, wl);
    }
  }
  BoundResult res;
  res.method = BoundMethod::golden;
  res.w_star = 0.5 * (a + b);
  res.value = envelope_eval(fns, res.w_star);
  return res;
}

BoundResult upper_bound_binary(const std::vector<QuadraticFn>& fns, int iters,
                               double y_lo, double y_hi) {
  auto feasible = [&](double y, double& witness) {
    double wl = -kInf, wr = kInf;
    for (const QuadraticFn& f : fns) {
      double lo, hi;
      if (!sublevel_interval(f, y, lo, hi)) return false;
      wl = std::max(wl, lo);
      wr = std::min(wr, hi);
      if (wl > wr) return false;
    }
    witness = 0.5 * (wl + wr);
    return true;
  };

  double w_star = 0.0;
  if (!feasible(y_hi, w_star)) {
    throw InvalidBracket("upper end of the value bracket is infeasible");
  }
  for (int t = 0; t < iters; ++t) {
    double ym = 0.5 * (y_lo + y_hi);
    double w;
    if (feasible(ym, w)) {
      y_hi = ym;
      w_star = w;
    } else {
      y_lo = ym;
    }
  }
  BoundResult res;
  res.method = BoundMethod::binary;
  res.value = y_hi;
  res.w_star = w_star;
  return res;
}

BoundResult upper_bound_binary(const std::vector<QuadraticFn>& fns,
                               int iters) {
  // 0 lower-bounds any MSE; any pointwise envelope value upper-bounds the
  // min. The mid-vertex evaluation keeps the bracket tight.
  auto [a, b] = vertex_span(fns);
  double y_hi = envelope_eval(fns, 0.5 * (a + b));
  return upper_bound_binary(fns, iters, 0.0, y_hi);
}

PiecewiseQuadratic upper_envelope(const std::vector<QuadraticFn>& fns) {
  if (fns.empty()) {
    throw DegenerateInput("upper_envelope needs at least one quadratic");
  }
  return build_envelope(fns, 0, fns.size());
}

BoundResult upper_bound_exact(const std::vector<QuadraticFn>& fns) {
  PiecewiseQuadratic env = upper_envelope(fns);
  BoundResult res;
  res.method = BoundMethod::exact;
  res.value = kInf;
  for (std::size_t i = 0; i < env.pieces.size(); ++i) {
    const QuadraticFn& f = env.pieces[i];
    double w = std::clamp(f.vertex(), env.thresholds[i], env.thresholds[i + 1]);
    double y = f.eval(w);
    if (y < res.value) {
      res.value = y;
      res.w_star = w;
    }
  }
  return res;
}

BoundResult upper_bound(const KeySet& keys, std::uint64_t lambda,
                        BoundMethod method, int iters) {
  std::vector<QuadraticFn> fns = candidate_quadratics(keys, lambda);
  switch (method) {
    case BoundMethod::golden: return upper_bound_golden(fns, iters);
    case BoundMethod::binary: return upper_bound_binary(fns, iters);
    case BoundMethod::exact: return upper_bound_exact(fns);
  }
  throw Error("unknown bound method");
}

}  // namespace cdfpoison
