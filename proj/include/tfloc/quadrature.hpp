#pragma once

// Double-exponential quadrature with level doubling.
//
// tanh_sinh integrates over a finite interval (a, b) and tolerates
// integrable endpoint singularities (log powers, algebraic exponents > -1)
// because the substitution pushes nodes toward the endpoints at a
// double-exponential rate.  Nodes are generated from their distance to the
// nearest endpoint, so an integrand may evaluate log(t - a) at every node it
// sees; nodes whose distance rounds below the endpoint's resolution are
// skipped, which caps the accuracy for integrands singular at an endpoint
// with a nonzero coordinate (or at b for any interval) near sqrt(eps).
// exp_sinh does the same for (0, inf) around a caller-chosen scale.
//
// Each level halves the step in the transformed variable and reuses all
// previous evaluations; refinement stops when two consecutive levels agree
// to the requested relative tolerance.

#include <cmath>
#include <cstddef>
#include <string>

#include "tfloc/errors.hpp"

namespace tfloc::quad {

struct Options {
  double rel_tol = 1e-10;
  int max_level = 12;   // total abscissas roughly 2 * u_max * 2^max_level
  double u_max = 4.0;   // truncation of the transformed axis, keep <= 4.6
};

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  int levels = 0;
  std::size_t evaluations = 0;
};

namespace detail {

inline bool converged(double diff, double value, double rel_tol) {
  return diff <= rel_tol * std::abs(value) || diff == 0.0;
}

[[noreturn]] inline void fail(const char* where) {
  throw numerical_error(std::string(where) + ": tolerance not met at the node cap");
}

}  // namespace detail

// Integral of f over (a, b); f is invoked with nodes strictly inside (a, b).
template <class F>
Result tanh_sinh(F&& f, double a, double b, const Options& opt = {}) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double pi_2 = 1.5707963267948966;

  Result res;
  // node at u = 0: x = 0, weight pi/2
  double sum = pi_2 * f(mid);
  res.evaluations = 1;

  double prev = 0.0;
  double h = 1.0;
  for (int level = 0; level <= opt.max_level; ++level, h *= 0.5) {
    // level 0 visits every multiple of h; later levels only the odd ones
    const int stride = (level == 0) ? 1 : 2;
    const int last = static_cast<int>(opt.u_max / h);
    for (int j = 1; j <= last; j += stride) {
      const double u = j * h;
      const double y = pi_2 * std::sinh(u);
      const double ey = std::exp(-2.0 * y);
      const double dist = half * 2.0 * ey / (1.0 + ey);      // half*(1 -|x|)
      const double sech = 2.0 * std::exp(-y) / (1.0 + ey);   // 1 / cosh(y)
      const double w = pi_2 * std::cosh(u) * sech * sech;
      if (w == 0.0) continue;
      // a node whose distance rounds below the endpoint's ulp would hand f
      // the endpoint itself; skip it instead of evaluating there
      const double left = a + dist;
      const double right = b - dist;
      if (left > a) {
        sum += w * f(left);
        ++res.evaluations;
      }
      if (right < b) {
        sum += w * f(right);
        ++res.evaluations;
      }
    }
    const double value = h * half * sum;
    if (level >= 2) {
      const double diff = std::abs(value - prev);
      res.value = value;
      res.error_estimate = diff;
      res.levels = level;
      if (detail::converged(diff, value, opt.rel_tol)) return res;
    }
    prev = value;
  }
  detail::fail("tanh_sinh");
}

// Integral of f over (0, inf).  Nodes cluster around `scale`, which should
// sit near the bulk of the integrand's mass.
template <class F>
Result exp_sinh(F&& f, double scale = 1.0, const Options& opt = {}) {
  const double pi_2 = 1.5707963267948966;

  Result res;
  double sum = pi_2 * scale * f(scale);  // u = 0: t = scale, dt/du = pi/2 * t
  res.evaluations = 1;

  double prev = 0.0;
  double h = 1.0;
  for (int level = 0; level <= opt.max_level; ++level, h *= 0.5) {
    const int stride = (level == 0) ? 1 : 2;
    const int last = static_cast<int>(opt.u_max / h);
    for (int j = 1; j <= last; j += stride) {
      const double u = j * h;
      const double g = pi_2 * std::sinh(u);
      const double ch = pi_2 * std::cosh(u);
      const double t_hi = scale * std::exp(g);
      const double t_lo = scale * std::exp(-g);
      if (t_hi > 0.0 && std::isfinite(t_hi)) {
        sum += ch * t_hi * f(t_hi);
        ++res.evaluations;
      }
      if (t_lo > 0.0) {
        sum += ch * t_lo * f(t_lo);
        ++res.evaluations;
      }
    }
    const double value = h * sum;
    if (level >= 2) {
      const double diff = std::abs(value - prev);
      res.value = value;
      res.error_estimate = diff;
      res.levels = level;
      if (detail::converged(diff, value, opt.rel_tol)) return res;
    }
    prev = value;
  }
  detail::fail("exp_sinh");
}

}  // namespace tfloc::quad
