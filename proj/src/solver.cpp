#include "tfloc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tfloc/quadrature.hpp"
#include "tfloc/regimes.hpp"
#include "tfloc/roots.hpp"

namespace tfloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;
constexpr double kMultiplierFloor = 1e-150;
constexpr double kMultiplierCeil = 1e150;

// quadrature tolerances: the solver works a digit below the documented
// 1e-10 contract, the final polish a digit below that
const quad::Options kQuadOpts{1e-11, 12, 4.0};
const quad::Options kQuadPolish{1e-12, 12, 4.0};

void require_multiplier(double lambda, const char* where) {
  if (!(lambda >= kMultiplierFloor) || !(lambda <= kMultiplierCeil))
    throw std::domain_error(std::string(where) +
                            ": multipliers must lie in [1e-150, 1e150]");
}

void require_exponents(double p, double q, const char* where) {
  if (!(p > 1.0) || !(q > 1.0) || !std::isfinite(p) || !std::isfinite(q))
    throw std::domain_error(std::string(where) +
                            ": exponents must be finite reals > 1");
}

// ln(lambda1 t^(p-1) + lambda2 t^(q-1)) as a function of x = ln t, kept in
// log space so it is evaluable for any t > 0 without overflow or underflow.
// Each term is a_i + e_i x; an absent term has a_i = -inf.
struct LogSigma {
  double a1 = -kInf, e1 = 1.0;
  double a2 = -kInf, e2 = 1.0;

  static LogSigma from_lambdas(double l1, double l2, double p, double q) {
    LogSigma s;
    s.e1 = p - 1.0;
    s.e2 = q - 1.0;
    if (l1 > 0.0) s.a1 = std::log(l1);
    if (l2 > 0.0) s.a2 = std::log(l2);
    return s;
  }

  static LogSigma from_cs(double c1, double c2, double p, double q) {
    LogSigma s;
    s.e1 = p - 1.0;
    s.e2 = q - 1.0;
    if (c1 > 0.0) s.a1 = s.e1 * std::log(c1);
    if (c2 > 0.0) s.a2 = s.e2 * std::log(c2);
    return s;
  }

  double value(double x) const {
    const double t1 = a1 == -kInf ? -kInf : a1 + e1 * x;
    const double t2 = a2 == -kInf ? -kInf : a2 + e2 * x;
    if (t1 == -kInf) return t2;
    if (t2 == -kInf) return t1;
    const double m = std::max(t1, t2);
    return m + std::log1p(std::exp(std::min(t1, t2) - m));
  }

  // derivative of value with respect to x, a convex combination of e1, e2
  double slope(double x) const {
    const double t1 = a1 == -kInf ? -kInf : a1 + e1 * x;
    const double t2 = a2 == -kInf ? -kInf : a2 + e2 * x;
    if (t1 == -kInf) return e2;
    if (t2 == -kInf) return e1;
    const double m = std::max(t1, t2);
    const double w1 = std::exp(t1 - m);
    const double w2 = std::exp(t2 - m);
    return (e1 * w1 + e2 * w2) / (w1 + w2);
  }

  // unique x with value(x) = target
  double solve_level(double target) const {
    if (a1 == -kInf) return (target - a2) / e2;
    if (a2 == -kInf) return (target - a1) / e1;
    // at the smaller single-term crossing both terms are <= target, so the
    // total exceeds target by at most ln 2; rounding in the crossing itself
    // can land value(hi) a few ulp below target, so push hi up until the
    // bracket is certain
    double hi = std::min((target - a1) / e1, (target - a2) / e2);
    double up = std::max(1e-9, 1e-9 * std::abs(hi));
    for (int i = 0; i < 80 && value(hi) < target; ++i) {
      hi += up;
      up *= 2.0;
    }
    if (value(hi) < target)
      throw numerical_error("solve_level: bracket expansion failed");
    double step = 0.5;
    double lo = hi - step;
    for (int i = 0; i < 80 && value(lo) >= target; ++i) {
      step *= 2.0;
      lo = hi - step;
    }
    if (value(lo) >= target)
      throw numerical_error("solve_level: bracket expansion failed");
    auto fn = [&](double x) { return value(x) - target; };
    auto dfn = [&](double x) { return slope(x); };
    return roots::newton(fn, dfn, lo, hi, 1e-13, 1e-15).x;
  }
};

double factorial_log(int d) { return std::lgamma(d + 1.0); }

// u(t) as a function of x = ln t; returns +inf when the level overflows,
// which downstream consumers map to G = 1
double u_from_x(const LogSigma& sigma, double x, int d) {
  const double ls = sigma.value(x);
  if (ls >= 0.0) return 0.0;
  const double v = -ls;
  if (d == 1) return v;
  if (d == 2) return 0.5 * v * v;
  return std::exp(d * std::log(v) - factorial_log(d));
}

// integral over (0, T) of t^(e-1) u(t) dt, via the log-space integrand
// exp((e-1) x + d ln v - ln d!)
double level_integral(const LogSigma& sigma, double T, double e, int d,
                      const quad::Options& opts) {
  const double lgd = factorial_log(d);
  auto integrand = [&](double t) {
    const double x = std::log(t);
    const double ls = sigma.value(x);
    if (ls >= 0.0) return 0.0;
    const double v = -ls;
    return std::exp((e - 1.0) * x + d * std::log(v) - lgd);
  };
  return quad::tanh_sinh(integrand, 0.0, T, opts).value;
}

// integral over (0, T) of t^theta sigma(t)^-1 v(t)^(d-1) / (d-1)! dt,
// the common kernel of all four constraint partial derivatives
double kernel_integral(const LogSigma& sigma, double T, double theta, int d,
                       const quad::Options& opts) {
  const double lgd = factorial_log(d - 1);
  auto integrand = [&](double t) {
    const double x = std::log(t);
    const double ls = sigma.value(x);
    double le = theta * x - ls - lgd;
    if (d >= 2) {
      if (ls >= 0.0) return 0.0;
      le += (d - 1) * std::log(-ls);
    }
    return std::exp(le);
  };
  return quad::tanh_sinh(integrand, 0.0, T, opts).value;
}

void require_cs(double c1, double c2, const char* where) {
  if (!(c1 >= 0.0) || !(c2 >= 0.0) || !std::isfinite(c1) || !std::isfinite(c2))
    throw std::domain_error(std::string(where) +
                            ": c1 and c2 must be finite and nonnegative");
  if (c1 == 0.0 && c2 == 0.0)
    throw std::domain_error(std::string(where) +
                            ": c1 and c2 must not both be zero");
  if ((c1 > 0.0 && c1 < kMultiplierFloor) || c1 > kMultiplierCeil ||
      (c2 > 0.0 && c2 < kMultiplierFloor) || c2 > kMultiplierCeil)
    throw std::domain_error(std::string(where) +
                            ": c values must lie in [1e-150, 1e150]");
}

double endpoint_from_sigma(const LogSigma& sigma) {
  return std::exp(sigma.solve_level(0.0));
}

struct InnerResult {
  double c2 = 0.0;
  int iterations = 0;
};

}  // namespace

double u_eval(double t, double lambda1, double lambda2, double p, double q,
              int d) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::domain_error("u_eval: t must be a finite real > 0");
  require_exponents(p, q, "u_eval");
  if (d < 1) throw std::domain_error("u_eval: d must be >= 1");
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
    throw std::domain_error("u_eval: multipliers must be positive");
  const LogSigma sigma = LogSigma::from_lambdas(lambda1, lambda2, p, q);
  return u_from_x(sigma, std::log(t), d);
}

double support_endpoint_T(double lambda1, double lambda2, double p, double q) {
  require_exponents(p, q, "support_endpoint_T");
  require_multiplier(lambda1, "support_endpoint_T");
  require_multiplier(lambda2, "support_endpoint_T");
  const LogSigma sigma = LogSigma::from_lambdas(lambda1, lambda2, p, q);
  return endpoint_from_sigma(sigma);
}

double psi_eval(double v, const VariationalSolution& solution) {
  if (!(v >= 0.0)) throw std::domain_error("psi_eval: v must be nonnegative");
  if (v == 0.0) return solution.T;
  const ProblemParams& pp = solution.params;
  const LogSigma sigma = LogSigma::from_lambdas(solution.lambda1,
                                                solution.lambda2, pp.p, pp.q);
  return std::exp(sigma.solve_level(-v));
}

ConstraintValues constraint_integrals(double c1, double c2,
                                      const ProblemParams& params) {
  validate(params);
  require_cs(c1, c2, "constraint_integrals");
  const LogSigma sigma = LogSigma::from_cs(c1, c2, params.p, params.q);
  const double T = endpoint_from_sigma(sigma);
  ConstraintValues out;
  out.f = params.p * level_integral(sigma, T, params.p, params.d, kQuadOpts);
  out.g = params.q * level_integral(sigma, T, params.q, params.d, kQuadOpts);
  return out;
}

ConstraintPartials constraint_partials(double c1, double c2,
                                       const ProblemParams& params) {
  validate(params);
  require_cs(c1, c2, "constraint_partials");
  if (c1 == 0.0 || c2 == 0.0)
    throw std::domain_error(
        "constraint_partials: both c values must be positive");
  const double p = params.p;
  const double q = params.q;
  const int d = params.d;
  const LogSigma sigma = LogSigma::from_cs(c1, c2, p, q);
  const double T = endpoint_from_sigma(sigma);
  const double k11 = kernel_integral(sigma, T, 2.0 * (p - 1.0), d, kQuadOpts);
  const double k12 = kernel_integral(sigma, T, p + q - 2.0, d, kQuadOpts);
  const double k22 = kernel_integral(sigma, T, 2.0 * (q - 1.0), d, kQuadOpts);
  const double dp1 = (p - 1.0) * std::pow(c1, p - 2.0);
  const double dq2 = (q - 1.0) * std::pow(c2, q - 2.0);
  ConstraintPartials out;
  out.df_dc1 = -p * dp1 * k11;
  out.df_dc2 = -p * dq2 * k12;
  out.dg_dc1 = -q * dp1 * k12;
  out.dg_dc2 = -q * dq2 * k22;
  return out;
}

namespace {

// single constraint integral f(c1, c2) and its c2 partial, shared by the
// inner solve
double constraint_f(double c1, double c2, const ProblemParams& params,
                    const quad::Options& opts) {
  const LogSigma sigma = LogSigma::from_cs(c1, c2, params.p, params.q);
  const double T = endpoint_from_sigma(sigma);
  return params.p * level_integral(sigma, T, params.p, params.d, opts);
}

double constraint_g(double c1, double c2, const ProblemParams& params,
                    const quad::Options& opts) {
  const LogSigma sigma = LogSigma::from_cs(c1, c2, params.p, params.q);
  const double T = endpoint_from_sigma(sigma);
  return params.q * level_integral(sigma, T, params.q, params.d, opts);
}

double partial_f_c2(double c1, double c2, const ProblemParams& params) {
  const double p = params.p;
  const double q = params.q;
  const LogSigma sigma = LogSigma::from_cs(c1, c2, p, q);
  const double T = endpoint_from_sigma(sigma);
  const double k12 =
      kernel_integral(sigma, T, p + q - 2.0, params.d, kQuadOpts);
  return -p * (q - 1.0) * std::pow(c2, q - 2.0) * k12;
}

// solve f(c1, c2) = target for c2 on the certified bracket (0, c2_hi]
InnerResult inner_solve(double c1, double c2_hi, double target,
                        const ProblemParams& params) {
  auto fn = [&](double c2) {
    return constraint_f(c1, c2, params, kQuadOpts) - target;
  };
  auto dfn = [&](double c2) { return partial_f_c2(c1, c2, params); };
  const double ftol = std::max(3e-11 * target, 1e-280);
  const auto r = roots::newton(fn, dfn, 0.0, c2_hi, ftol, 1e-13);
  return {r.x, r.iterations};
}

VariationalSolution assemble(double c1, double c2, const ProblemParams& params,
                             int iterations, double res_p, double res_q) {
  VariationalSolution sol;
  sol.params = params;
  sol.c1 = c1;
  sol.c2 = c2;
  sol.lambda1 = std::pow(c1, params.p - 1.0);
  sol.lambda2 = std::pow(c2, params.q - 1.0);
  const LogSigma sigma = LogSigma::from_cs(c1, c2, params.p, params.q);
  sol.T = endpoint_from_sigma(sigma);
  sol.iterations = iterations;
  sol.residual_p = res_p;
  sol.residual_q = res_q;
  sol.bound = bound_value(sol);
  return sol;
}

}  // namespace

VariationalSolution solve_multipliers(const ProblemParams& params,
                                      const SolveOptions& options) {
  const RegimeDecision decision = classify(params);
  if (decision.regime != Regime::intermediate)
    throw std::invalid_argument(
        "solve_multipliers: parameters are not in the intermediate regime");
  if (!(options.tol > 0.0) || options.tol > 1e-2)
    throw std::domain_error("solve_multipliers: tol must be in (0, 1e-2]");

  const double p = params.p;
  const double q = params.q;
  const int d = params.d;
  const double fp_target = std::pow(params.A, p);
  const double gq_target = std::pow(params.B, q);
  // boundary points of the two level curves: f(c1_f, 0) = A^p and
  // f(0, c2_f) = A^p
  const double c1_f = std::pow(kappa(p), double(d) / p) / params.A;
  const double c2_f = std::pow((q - 1.0) / p, double(d) / p) / params.A;

  int iterations = 0;

  // cache of the most recent inner solve, so the outer derivative can reuse
  // the matching c2
  double last_c1 = -1.0;
  double last_c2 = 0.0;

  auto inner = [&](double c1) {
    if (c1 == last_c1) return last_c2;
    const InnerResult r = inner_solve(c1, c2_f, fp_target, params);
    iterations += r.iterations;
    last_c1 = c1;
    last_c2 = r.c2;
    return r.c2;
  };

  auto outer_fn = [&](double c1) {
    const double c2 = inner(c1);
    ++iterations;
    return constraint_g(c1, c2, params, kQuadOpts) - gq_target;
  };

  auto outer_dfn = [&](double c1) {
    const double c2 = inner(c1);
    const ConstraintPartials pd = constraint_partials(c1, c2, params);
    // total derivative along the f level curve: dc2/dc1 = -f_c1 / f_c2
    return pd.dg_dc1 - pd.dg_dc2 * pd.df_dc1 / pd.df_dc2;
  };

  // bracket the outer root; in the intermediate regime the residual is
  // negative near c1 = 0 and positive near c1 = c1_f
  double lo = options.outer_lo_factor * c1_f;
  double hi = options.outer_hi_factor * c1_f;
  for (int i = 0; i < 60 && outer_fn(lo) >= 0.0; ++i) lo *= 0.125;
  if (outer_fn(lo) >= 0.0)
    throw numerical_error("solve_multipliers: failed to bracket from below");
  for (int i = 0; i < 60 && outer_fn(hi) <= 0.0; ++i)
    hi = c1_f - 0.125 * (c1_f - hi);
  if (outer_fn(hi) <= 0.0)
    throw numerical_error("solve_multipliers: failed to bracket from above");

  const double outer_ftol = 0.5 * options.tol * gq_target;
  const auto outer =
      roots::newton(outer_fn, outer_dfn, lo, hi, outer_ftol, 1e-14);
  iterations += outer.iterations;

  double c1 = outer.x;
  double c2 = inner(c1);

  // two-variable Newton polish on (f - A^p, g - B^q) with the analytic
  // Jacobian, at tightened quadrature tolerance
  double res_p = constraint_f(c1, c2, params, kQuadPolish) - fp_target;
  double res_q = constraint_g(c1, c2, params, kQuadPolish) - gq_target;
  for (int i = 0; i < 4; ++i) {
    if (std::abs(res_p) <= 0.25 * options.tol * fp_target &&
        std::abs(res_q) <= 0.25 * options.tol * gq_target && i > 0)
      break;
    const ConstraintPartials J = constraint_partials(c1, c2, params);
    const double det = J.df_dc1 * J.dg_dc2 - J.df_dc2 * J.dg_dc1;
    if (det == 0.0) break;
    double step1 = (-res_p * J.dg_dc2 + res_q * J.df_dc2) / det;
    double step2 = (-res_q * J.df_dc1 + res_p * J.dg_dc1) / det;
    while (c1 + step1 <= 0.0 || c2 + step2 <= 0.0) {
      step1 *= 0.5;
      step2 *= 0.5;
    }
    c1 += step1;
    c2 += step2;
    ++iterations;
    res_p = constraint_f(c1, c2, params, kQuadPolish) - fp_target;
    res_q = constraint_g(c1, c2, params, kQuadPolish) - gq_target;
  }

  if (std::abs(res_p) > options.tol * fp_target ||
      std::abs(res_q) > options.tol * gq_target)
    throw numerical_error("solve_multipliers: residual tolerance not reached");

  return assemble(c1, c2, params, iterations, res_p, res_q);
}

VariationalSolution solve_multipliers(const ProblemParams& params, double tol) {
  SolveOptions options;
  options.tol = tol;
  return solve_multipliers(params, options);
}

VariationalSolution solution_from_multipliers(double lambda1, double lambda2,
                                              const ProblemParams& params) {
  validate(params);
  require_multiplier(lambda1, "solution_from_multipliers");
  require_multiplier(lambda2, "solution_from_multipliers");
  const double c1 = std::pow(lambda1, 1.0 / (params.p - 1.0));
  const double c2 = std::pow(lambda2, 1.0 / (params.q - 1.0));
  const ConstraintValues cv = constraint_integrals(c1, c2, params);
  VariationalSolution sol;
  sol.params = params;
  sol.lambda1 = lambda1;
  sol.lambda2 = lambda2;
  sol.c1 = c1;
  sol.c2 = c2;
  const LogSigma sigma =
      LogSigma::from_lambdas(lambda1, lambda2, params.p, params.q);
  sol.T = endpoint_from_sigma(sigma);
  sol.residual_p = cv.f - std::pow(params.A, params.p);
  sol.residual_q = cv.g - std::pow(params.B, params.q);
  sol.iterations = 0;
  sol.bound = bound_value(sol);
  return sol;
}

double bound_closed_form_d1(const VariationalSolution& solution) {
  if (solution.params.d != 1)
    throw std::domain_error("bound_closed_form_d1: requires d = 1");
  const double p = solution.params.p;
  const double q = solution.params.q;
  const double T = solution.T;
  return T - solution.lambda1 / p * std::pow(T, p) -
         solution.lambda2 / q * std::pow(T, q);
}

double bound_value(const VariationalSolution& solution) {
  const ProblemParams& pp = solution.params;
  validate(pp);
  if (!(solution.lambda1 > 0.0) || !(solution.lambda2 > 0.0))
    throw std::domain_error("bound_value: multipliers must be positive");
  const LogSigma sigma =
      LogSigma::from_lambdas(solution.lambda1, solution.lambda2, pp.p, pp.q);
  const double T =
      solution.T > 0.0 ? solution.T : endpoint_from_sigma(sigma);
  auto integrand = [&](double t) {
    return g_eval(u_from_x(sigma, std::log(t), pp.d), pp.d);
  };
  const double quadrature = quad::tanh_sinh(integrand, 0.0, T, kQuadOpts).value;
  if (pp.d == 1) {
    VariationalSolution tmp = solution;
    tmp.T = T;
    const double closed = bound_closed_form_d1(tmp);
    if (std::abs(closed - quadrature) > 1e-8 * std::max(1.0, std::abs(closed)))
      throw numerical_error(
          "bound_value: quadrature disagrees with the d=1 closed form");
  }
  return quadrature;
}

RadialWeight sample_profile(const VariationalSolution& solution, double r_max,
                            int n) {
  if (!(r_max > 0.0)) throw std::domain_error("sample_profile: r_max must be > 0");
  if (n < 2) throw std::domain_error("sample_profile: n must be >= 2");
  RadialWeight w;
  w.kind = RadialWeight::Kind::tabulated;
  w.d = solution.params.d;
  w.solution = solution;
  w.radii.resize(n);
  w.values.resize(n);
  for (int i = 0; i < n; ++i) {
    const double r = r_max * i / (n - 1);
    w.radii[i] = r;
    w.values[i] = psi_eval(kPi * r * r, solution);
  }
  return w;
}

RadialWeight sample_profile(const RadialWeight& gaussian, double r_max, int n) {
  if (gaussian.kind != RadialWeight::Kind::gaussian)
    throw std::domain_error("sample_profile: expected a gaussian weight");
  if (!(r_max > 0.0)) throw std::domain_error("sample_profile: r_max must be > 0");
  if (n < 2) throw std::domain_error("sample_profile: n must be >= 2");
  RadialWeight w;
  w.kind = RadialWeight::Kind::tabulated;
  w.d = gaussian.d;
  w.amplitude = gaussian.amplitude;
  w.decay = gaussian.decay;
  w.radii.resize(n);
  w.values.resize(n);
  for (int i = 0; i < n; ++i) {
    const double r = r_max * i / (n - 1);
    w.radii[i] = r;
    w.values[i] = weight_value(gaussian, r);
  }
  return w;
}

// defined here so the optimal_psi case can reuse psi_eval
double weight_value(const RadialWeight& weight, double r) {
  if (!(r >= 0.0)) throw std::domain_error("weight_value: r must be nonnegative");
  switch (weight.kind) {
    case RadialWeight::Kind::gaussian:
      return weight.amplitude * std::exp(-kPi * r * r / weight.decay);
    case RadialWeight::Kind::optimal_psi:
      if (!weight.solution)
        throw std::domain_error("weight_value: optimal_psi weight has no solution");
      return psi_eval(kPi * r * r, *weight.solution);
    case RadialWeight::Kind::tabulated: {
      const auto& rs = weight.radii;
      const auto& vs = weight.values;
      if (rs.empty() || rs.size() != vs.size())
        throw std::domain_error("weight_value: malformed table");
      if (r <= rs.front()) return vs.front();
      if (r >= rs.back()) return r == rs.back() ? vs.back() : 0.0;
      const auto it = std::upper_bound(rs.begin(), rs.end(), r);
      const std::size_t j = it - rs.begin();
      const double w = (r - rs[j - 1]) / (rs[j] - rs[j - 1]);
      return vs[j - 1] + w * (vs[j] - vs[j - 1]);
    }
  }
  throw std::domain_error("weight_value: unknown weight kind");
}

bool weight_nonincreasing(const RadialWeight& weight) {
  switch (weight.kind) {
    case RadialWeight::Kind::gaussian:
      return weight.amplitude >= 0.0 && weight.decay > 0.0;
    case RadialWeight::Kind::optimal_psi:
      return true;
    case RadialWeight::Kind::tabulated:
      for (std::size_t i = 1; i < weight.values.size(); ++i)
        if (weight.values[i] > weight.values[i - 1]) return false;
      return true;
  }
  return false;
}

double weight_peak(const RadialWeight& weight) {
  return weight_value(weight, 0.0);
}

}  // namespace tfloc
