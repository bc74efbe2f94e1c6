#pragma once

// Conjugate-exponent helpers, the saturating integral G, regime thresholds,
// and the closed-form Gaussian branches of the operator-norm bound.

#include "tfloc/types.hpp"

namespace tfloc {

// (p - 1) / p, in (0, 1) for p > 1.
double kappa(double p);

// p / (p - 1); an involution on (1, inf).
double conjugate_exponent(double p);

// max(-ln x, 0) for x > 0.
double log_minus(double x);

// g_eval(s, d) = integral over (0, s) of exp(-(d! tau)^(1/d)) dtau.
// Strictly increasing in s, bounded by min(s, 1), limit 1 as s -> inf.
// d = 1 reduces to 1 - exp(-s); d >= 2 is evaluated through the regularized
// lower incomplete gamma function at W = (d! s)^(1/d), with a series branch
// for small W where the complement form would cancel.
double g_eval(double s, int d);

// Branch thresholds for the ratio B / A.  The p-Gaussian branch applies at
// ratios >= threshold_upper, the q-Gaussian branch at ratios <=
// threshold_lower, and strictly between them both constraints bind.
double threshold_upper(double p, double q, int d);
double threshold_lower(double p, double q, int d);

RegimeDecision classify(const ProblemParams& params);

// Bound and attaining Gaussian for the closed-form regimes.  Throws
// std::invalid_argument when called with an intermediate decision, and
// applies the tighter budget min(A, B) in the degenerate p = q case.
ClosedFormBound closed_form_bound(const ProblemParams& params,
                                  const RegimeDecision& decision);

}  // namespace tfloc
