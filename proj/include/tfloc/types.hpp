#pragma once

// Shared value types for the localization-operator bound library: problem
// instances, regime decisions, solved variational states, radial weight
// profiles, and sampled phase-space fields.

#include <optional>
#include <vector>

namespace tfloc {

// One constrained problem instance: dimension d, exponents p, q in (1, inf),
// and the norm budgets A (for L^p) and B (for L^q).
struct ProblemParams {
  int d = 1;
  double p = 2.0;
  double q = 2.0;
  double A = 1.0;
  double B = 1.0;
};

// Throws std::domain_error naming the offending field.
void validate(const ProblemParams& params);

enum class Regime {
  p_dominant,
  q_dominant,
  intermediate,
  degenerate_equal_exponents,
};

// Stable uppercase tag, e.g. "P_DOMINANT"; used in CLI output.
const char* to_string(Regime regime);

struct RegimeDecision {
  Regime regime = Regime::degenerate_equal_exponents;
  double threshold_lower = 1.0;
  double threshold_upper = 1.0;
  double ratio = 1.0;  // B / A
};

// Solved intermediate-regime state.  The multipliers are stored both as
// (lambda1, lambda2) and in the solver's parametrization lambda1 = c1^(p-1),
// lambda2 = c2^(q-1).  T is the endpoint of the profile support in the level
// variable t, bound the value of the integral of G(u(t)) over (0, T), and
// the residuals are the raw constraint defects f - A^p and g - B^q.
struct VariationalSolution {
  ProblemParams params;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double T = 0.0;
  double bound = 0.0;
  double residual_p = 0.0;
  double residual_q = 0.0;
  int iterations = 0;
};

// A radial weight profile r -> F(r) on phase space R^(2d).
//   gaussian:    F(r) = amplitude * exp(-pi r^2 / decay)
//   optimal_psi: F(r) = psi(pi r^2) for the attached solved instance
//   tabulated:   piecewise linear between (radii[i], values[i]); constant at
//                values[0] below radii[0] and zero beyond radii.back()
// center and phase are placement metadata carried through exports; every
// computation in this library depends on the radial profile only.
struct RadialWeight {
  enum class Kind { gaussian, optimal_psi, tabulated };
  Kind kind = Kind::gaussian;
  int d = 1;
  double amplitude = 0.0;
  double decay = 1.0;
  std::optional<VariationalSolution> solution;
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<double> center;
  double phase = 0.0;
};

// Profile value F(r); r must be nonnegative.
double weight_value(const RadialWeight& weight, double r);

// True when the profile is nonincreasing in r (exact for gaussian and
// optimal_psi kinds; tabulated profiles are scanned).
bool weight_nonincreasing(const RadialWeight& weight);

// F(0).
double weight_peak(const RadialWeight& weight);

// Closed-form branch result: the bound value and the Gaussian profile that
// attains it.
struct ClosedFormBound {
  double value = 0.0;
  RadialWeight optimizer;
};

// Eigenvalues mu_0 .. mu_K of the localization operator with a radial weight
// (d = 1), plus a certified bound on every eigenvalue past the truncation.
struct EigenSpectrum {
  std::vector<double> eigenvalues;
  int truncation_K = 0;
  double tail_bound = 0.0;
  double norm = 0.0;     // max over the computed eigenvalues
  bool monotone = true;  // whether the computed sequence is nonincreasing
};

// A square grid of nonnegative reals over {-R, -R+h, ..., R}^2 with uniform
// cell measure h^2.  Grid coordinates are (i - (n-1)/2) * h so the lattice is
// exactly symmetric about the origin.
struct SampledField {
  double R = 0.0;
  double h = 1.0;
  int n = 0;
  std::vector<double> values;  // row-major, index(ix, iw) = ix * n + iw

  double cell_measure() const { return h * h; }
  double coord(int i) const { return (i - (n - 1) / 2) * h; }
  double& at(int ix, int iw) { return values[static_cast<std::size_t>(ix) * n + iw]; }
  double at(int ix, int iw) const { return values[static_cast<std::size_t>(ix) * n + iw]; }
};

// Zero-initialized field; validates that R is a positive integer multiple
// of h so the grid contains the origin.
SampledField make_field(double R, double h);

}  // namespace tfloc
