#pragma once

#include <cmath>
#include <utility>

#include "twophase/errors.hpp"

namespace twophase {

// Safeguarded Newton iteration on a bracketing interval [lo, hi].
// f must change sign on the bracket; df may be any callable returning the
// derivative (pass nullptr-like lambda returning 0 to force pure bisection).
// Converges to absolute x tolerance `tol`.
template <class F, class DF>
double find_root(F&& f, DF&& df, double lo, double hi, double tol = 1e-12,
                 int max_iter = 200) {
  double flo = f(lo);
  if (std::abs(flo) <= tol) return lo;
  double fhi = f(hi);
  if (std::abs(fhi) <= tol) return hi;
  if ((flo > 0) == (fhi > 0))
    throw NoRoot("find_root: no sign change on bracket");

  double x = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    double fx = f(x);
    if ((fx > 0) == (flo > 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    if (hi - lo <= tol) return 0.5 * (lo + hi);

    double d = df(x);
    double step = (d != 0.0) ? fx / d : 0.0;
    double xn = x - step;
    // Fall back to bisection when Newton leaves the bracket or stalls.
    if (!(xn > lo && xn < hi) || step == 0.0) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) <= 0.25 * tol) xn = 0.5 * (lo + hi);
    x = xn;
  }
  return x;
}

template <class F>
double find_root_bisect(F&& f, double lo, double hi, double tol = 1e-12,
                        int max_iter = 200) {
  return find_root(std::forward<F>(f), [](double) { return 0.0; }, lo, hi, tol,
                   max_iter);
}

}  // namespace twophase
