#pragma once

// Independent verification paths for radial weights: Fock-basis
// diagonalization of the localization operator (d = 1), direct L^p norms of
// radial profiles, and the distribution-function bound computed by
// decreasing rearrangement.

#include "tfloc/rng.hpp"
#include "tfloc/types.hpp"

namespace tfloc {

// Eigenvalues mu_k = integral of g(s) s^k e^(-s) / k! over (0, inf) for
// k = 0 .. k_max, where g(s) is the profile evaluated at r = sqrt(s / pi).
// Only d = 1 weights are supported. tail_bound is mu_K when the computed
// sequence is nonincreasing and the profile peak otherwise; either way it
// dominates every eigenvalue past the truncation.
EigenSpectrum eigenvalues_radial(const RadialWeight& weight, int k_max = 200);

// Operator norm of the localization operator with a radially nonincreasing
// weight, namely mu_0. Throws if the profile is not nonincreasing, since
// the norm claim rests on eigenvalue monotonicity.
double operator_norm_radial(const RadialWeight& weight);

// L^p norm of the weight as a function on R^(2d), computed by radial
// quadrature to relative tolerance 1e-9.
double lp_norm_radial(const RadialWeight& weight, double p);

// Distribution-function bound: the integral of G_d(mu(t)) dt where mu is
// the distribution function of the field or profile. The sampled form sums
// exactly over sorted levels; the radial form evaluates mu analytically.
double distribution_bound(const SampledField& field, int d);
double distribution_bound(const RadialWeight& weight);

// Verification fixtures: random tabulated profiles on [0, r_max], either
// nonincreasing or with a guaranteed interior bump (so the rearrangement
// strictly increases the distribution bound).
RadialWeight random_nonincreasing_weight(Rng& rng, int n_points = 40,
                                         double r_max = 2.5);
RadialWeight random_bump_weight(Rng& rng, int n_points = 40,
                                double r_max = 2.5);

}  // namespace tfloc
