#pragma once

// Scalar root finding for monotone or bracketed problems: plain bisection,
// and a safeguarded Newton iteration that falls back to bisection whenever a
// step leaves the current bracket or fails to shrink the residual.

#include <cmath>
#include <string>

#include "tfloc/errors.hpp"

namespace tfloc::roots {

struct Result {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
};

// Root of f on [lo, hi]; f(lo) and f(hi) must have opposite signs (a zero
// endpoint is returned immediately).  Stops when |f| <= ftol or the bracket
// shrinks below xtol_rel relative to |x|.
template <class F>
Result bisect(F&& f, double lo, double hi, double ftol, double xtol_rel,
              int cap = 200) {
  Result res;
  double flo = f(lo);
  double fhi = f(hi);
  res.iterations = 2;
  if (flo == 0.0) return {lo, 0.0, res.iterations};
  if (fhi == 0.0) return {hi, 0.0, res.iterations};
  if ((flo > 0.0) == (fhi > 0.0))
    throw numerical_error("bisect: no sign change on the given bracket");
  for (int i = 0; i < cap; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    ++res.iterations;
    if ((fm > 0.0) == (fhi > 0.0)) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
    res.x = 0.5 * (lo + hi);
    res.fx = fm;
    if (std::abs(fm) <= ftol || (hi - lo) <= xtol_rel * std::abs(res.x))
      return res;
  }
  throw numerical_error("bisect: iteration cap reached");
}

// Newton iteration on f with derivative df, safeguarded by the bracket
// [lo, hi] (opposite signs required).  A small number of bisection steps
// first shrinks the bracket so Newton starts in the basin.
template <class F, class DF>
Result newton(F&& f, DF&& df, double lo, double hi, double ftol,
              double xtol_rel, int bisect_steps = 8, int newton_cap = 50) {
  Result res;
  double flo = f(lo);
  double fhi = f(hi);
  res.iterations = 2;
  if (flo == 0.0) return {lo, 0.0, res.iterations};
  if (fhi == 0.0) return {hi, 0.0, res.iterations};
  if ((flo > 0.0) == (fhi > 0.0))
    throw numerical_error("newton: no sign change on the given bracket");

  auto take = [&](double x, double fx) {
    if ((fx > 0.0) == (fhi > 0.0)) {
      hi = x;
      fhi = fx;
    } else {
      lo = x;
      flo = fx;
    }
  };

  for (int i = 0; i < bisect_steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    ++res.iterations;
    take(mid, fm);
  }

  double x = 0.5 * (lo + hi);
  double fx = f(x);
  ++res.iterations;
  take(x, fx);
  for (int i = 0; i < newton_cap; ++i) {
    res.x = x;
    res.fx = fx;
    if (std::abs(fx) <= ftol || (hi - lo) <= xtol_rel * std::abs(x)) return res;
    const double d = df(x);
    double next = x - fx / d;
    if (!(d != 0.0) || !(next > lo) || !(next < hi))
      next = 0.5 * (lo + hi);  // Newton left the bracket, bisect instead
    x = next;
    fx = f(x);
    ++res.iterations;
    take(x, fx);
  }
  throw numerical_error("newton: iteration cap reached");
}

}  // namespace tfloc::roots
