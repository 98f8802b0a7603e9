#pragma once

#include <cmath>
#include <utility>

namespace esshist {

/// Root of f on [lo, hi] given f(lo) and f(hi) of opposite sign.
///
/// Regula falsi with the Illinois modification; a bisection step is taken
/// whenever the secant point stalls at the bracket edge. The bracket always
/// shrinks, so the iteration cannot leave [lo, hi].
template <typename F>
double bracketed_root(F&& f, double lo, double hi, double f_lo, double f_hi, double abs_tol,
                      int max_iter = 200) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  int side = 0;
  for (int it = 0; it < max_iter && hi - lo > abs_tol; ++it) {
    double x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    const double guard = 0.01 * (hi - lo);
    if (!(x > lo + guard && x < hi - guard)) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (f_lo < 0.0)) {
      lo = x;
      f_lo = fx;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = x;
      f_hi = fx;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace esshist
