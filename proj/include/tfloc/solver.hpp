#pragma once

// Intermediate-regime variational solver: the level profile u, the support
// endpoint T, the inverse profile psi, the constraint integrals and their
// partial derivatives, the nested multiplier solve, the bound integral, and
// profile sampling for export.

#include "tfloc/types.hpp"

namespace tfloc {

// u(t) = (1/d!) * max(-ln(lambda1 t^(p-1) + lambda2 t^(q-1)), 0)^d.
// Zero for t >= T, strictly decreasing on (0, T).
double u_eval(double t, double lambda1, double lambda2, double p, double q,
              int d);

// Unique T with lambda1 T^(p-1) + lambda2 T^(q-1) = 1, to defect <= 1e-12.
// Multipliers must lie in [1e-150, 1e150] so the derived quantities stay
// inside the normal double range.
double support_endpoint_T(double lambda1, double lambda2, double p, double q);

// Inverse of t -> -ln(lambda1 t^(p-1) + lambda2 t^(q-1)) on (0, T]:
// the unique t with that value equal to v, solved in log coordinates to a
// relative defect of 1e-12.  psi_eval(0) returns T exactly.
double psi_eval(double v, const VariationalSolution& solution);

// Constraint integrals in the solver parametrization lambda1 = c1^(p-1),
// lambda2 = c2^(q-1):
//   f = p * integral of t^(p-1) u(t) over (0, T)
//   g = q * integral of t^(q-1) u(t) over (0, T)
// c1, c2 >= 0 with at least one positive; both integrals are strictly
// decreasing in each of c1, c2.
struct ConstraintValues {
  double f = 0.0;
  double g = 0.0;
};
ConstraintValues constraint_integrals(double c1, double c2,
                                      const ProblemParams& params);

// Analytic partial derivatives of the constraint integrals, all negative.
struct ConstraintPartials {
  double df_dc1 = 0.0;
  double df_dc2 = 0.0;
  double dg_dc1 = 0.0;
  double dg_dc2 = 0.0;
};
ConstraintPartials constraint_partials(double c1, double c2,
                                       const ProblemParams& params);

// Bracket endpoints for the nested solve; requires c1, c2 > 0.
struct SolveOptions {
  double tol = 1e-9;            // on residuals normalized by A^p resp. B^q
  double outer_lo_factor = 1e-6;   // initial c1 bracket, fraction of c1_f
  double outer_hi_factor = 1.0 - 1e-9;
};

// Unique multipliers with f = A^p and g = B^q, found by the nested scheme:
// for fixed c1 the inner solve finds c2 with f(c1, c2) = A^p (f is monotone
// in c2 with a certified bracket (0, c2_f]), and the outer solve drives
// g(c1, inner(c1)) - B^q to zero over c1 in (0, c1_f).  A final two-variable
// Newton step polishes both residuals.  Requires an intermediate regime.
VariationalSolution solve_multipliers(const ProblemParams& params,
                                      const SolveOptions& options = {});
VariationalSolution solve_multipliers(const ProblemParams& params, double tol);

// Completes a solution record (c's, T, bound, residuals) from given
// multipliers; used to evaluate known-multiplier instances directly.
VariationalSolution solution_from_multipliers(double lambda1, double lambda2,
                                              const ProblemParams& params);

// Integral of G(u(t)) over (0, T) by quadrature.  For d = 1 the closed form
// T - lambda1 T^p / p - lambda2 T^q / q is also evaluated and the two must
// agree to 1e-8.
double bound_value(const VariationalSolution& solution);

// The d = 1 closed form above; valid only for solutions with d = 1.
double bound_closed_form_d1(const VariationalSolution& solution);

// n equispaced samples of the profile on [0, r_max]: F(r) = psi(pi r^2) for
// solved instances, the Gaussian formula for closed-form optimizers.  The
// result keeps the originating parameters as metadata.
RadialWeight sample_profile(const VariationalSolution& solution, double r_max,
                            int n);
RadialWeight sample_profile(const RadialWeight& gaussian, double r_max, int n);

}  // namespace tfloc
