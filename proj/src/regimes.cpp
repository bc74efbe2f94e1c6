#include "tfloc/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tfloc {

namespace {

void require_exponent(double p, const char* name) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::domain_error(std::string(name) + " must be a finite real > 1");
}

// Regularized lower incomplete gamma P(a, x) for integer a >= 1.
double gamma_p(int a, double x) {
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) {
    // series: P(a,x) = x^a e^-x / a! * sum_{n>=0} x^n / ((a+1)...(a+n))
    double term = 1.0;
    double sum = 1.0;
    for (int n = 1; n < 500; ++n) {
      term *= x / (a + n);
      sum += term;
      if (term < sum * 1e-17) break;
    }
    const double log_pref = a * std::log(x) - x - std::lgamma(a + 1.0);
    return std::exp(log_pref) * sum;
  }
  // complement: Q(a,x) = e^-x sum_{j=0}^{a-1} x^j / j!
  double q = 0.0;
  for (int j = 0; j < a; ++j)
    q += std::exp(j * std::log(x) - x - std::lgamma(j + 1.0));
  return q < 1.0 ? 1.0 - q : 0.0;
}

}  // namespace

double kappa(double p) {
  require_exponent(p, "kappa: p");
  return (p - 1.0) / p;
}

double conjugate_exponent(double p) {
  require_exponent(p, "conjugate_exponent: p");
  return p / (p - 1.0);
}

double log_minus(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_minus: x must be positive");
  return x >= 1.0 ? 0.0 : -std::log(x);
}

double g_eval(double s, int d) {
  if (d < 1 || d > 170) throw std::domain_error("g_eval: d must be in [1, 170]");
  if (!(s >= 0.0)) throw std::domain_error("g_eval: s must be nonnegative");
  if (s == 0.0) return 0.0;
  if (std::isinf(s)) return 1.0;
  if (d == 1) return -std::expm1(-s);
  const double log_w = (std::lgamma(d + 1.0) + std::log(s)) / d;
  return gamma_p(d, std::exp(log_w));
}

double threshold_upper(double p, double q, int d) {
  require_exponent(p, "threshold_upper: p");
  require_exponent(q, "threshold_upper: q");
  if (d < 1) throw std::domain_error("threshold_upper: d must be >= 1");
  return std::pow(kappa(p), d * (1.0 / q - 1.0 / p)) * std::pow(p / q, d / q);
}

double threshold_lower(double p, double q, int d) {
  require_exponent(p, "threshold_lower: p");
  require_exponent(q, "threshold_lower: q");
  if (d < 1) throw std::domain_error("threshold_lower: d must be >= 1");
  return std::pow(kappa(q), d * (1.0 / q - 1.0 / p)) * std::pow(p / q, d / p);
}

void validate(const ProblemParams& params) {
  if (params.d < 1) throw std::domain_error("params: d must be a positive integer");
  require_exponent(params.p, "params: p");
  require_exponent(params.q, "params: q");
  if (!(params.A > 0.0) || !std::isfinite(params.A))
    throw std::domain_error("params: A must be a finite real > 0");
  if (!(params.B > 0.0) || !std::isfinite(params.B))
    throw std::domain_error("params: B must be a finite real > 0");
}

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::p_dominant: return "P_DOMINANT";
    case Regime::q_dominant: return "Q_DOMINANT";
    case Regime::intermediate: return "INTERMEDIATE";
    case Regime::degenerate_equal_exponents: return "DEGENERATE_EQUAL_EXPONENTS";
  }
  return "UNKNOWN";
}

RegimeDecision classify(const ProblemParams& params) {
  validate(params);
  RegimeDecision decision;
  decision.ratio = params.B / params.A;
  if (params.p == params.q) {
    decision.regime = Regime::degenerate_equal_exponents;
    decision.threshold_lower = 1.0;
    decision.threshold_upper = 1.0;
    return decision;
  }
  decision.threshold_lower = threshold_lower(params.p, params.q, params.d);
  decision.threshold_upper = threshold_upper(params.p, params.q, params.d);
  if (decision.ratio >= decision.threshold_upper)
    decision.regime = Regime::p_dominant;
  else if (decision.ratio <= decision.threshold_lower)
    decision.regime = Regime::q_dominant;
  else
    decision.regime = Regime::intermediate;
  return decision;
}

ClosedFormBound closed_form_bound(const ProblemParams& params,
                                  const RegimeDecision& decision) {
  validate(params);
  double exponent = 0.0;
  double budget = 0.0;
  switch (decision.regime) {
    case Regime::p_dominant:
      exponent = params.p;
      budget = params.A;
      break;
    case Regime::q_dominant:
      exponent = params.q;
      budget = params.B;
      break;
    case Regime::degenerate_equal_exponents:
      exponent = params.p;
      budget = std::min(params.A, params.B);
      break;
    case Regime::intermediate:
      throw std::invalid_argument(
          "closed_form_bound: the intermediate regime has no closed form; "
          "use solve_multipliers");
  }
  const double k = kappa(exponent);
  ClosedFormBound result;
  result.value = std::pow(k, params.d * k) * budget;
  result.optimizer.kind = RadialWeight::Kind::gaussian;
  result.optimizer.d = params.d;
  result.optimizer.amplitude = std::pow(k, -double(params.d) / exponent) * budget;
  result.optimizer.decay = exponent - 1.0;
  return result;
}

}  // namespace tfloc
