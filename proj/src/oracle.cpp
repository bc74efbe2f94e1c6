#include "tfloc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tfloc/errors.hpp"
#include "tfloc/quadrature.hpp"
#include "tfloc/regimes.hpp"
#include "tfloc/solver.hpp"

namespace tfloc {

namespace {

constexpr double kPi = 3.14159265358979323846;

const quad::Options kQuadOpts{1e-11, 12, 4.0};
const quad::Options kNormOpts{1e-10, 12, 4.0};

void validate_weight(const RadialWeight& weight, const char* where) {
  switch (weight.kind) {
    case RadialWeight::Kind::gaussian:
      if (!(weight.amplitude >= 0.0) || !std::isfinite(weight.amplitude))
        throw std::domain_error(std::string(where) +
                                ": gaussian amplitude must be >= 0");
      if (!(weight.decay > 0.0) || !std::isfinite(weight.decay))
        throw std::domain_error(std::string(where) +
                                ": gaussian decay must be > 0");
      return;
    case RadialWeight::Kind::optimal_psi:
      if (!weight.solution)
        throw std::domain_error(std::string(where) +
                                ": optimal_psi weight has no attached solution");
      if (weight.solution->params.d != weight.d)
        throw std::domain_error(std::string(where) +
                                ": weight dimension disagrees with its solution");
      return;
    case RadialWeight::Kind::tabulated: {
      const auto& rs = weight.radii;
      const auto& vs = weight.values;
      if (rs.empty() || rs.size() != vs.size())
        throw std::domain_error(std::string(where) + ": malformed table");
      if (!(rs.front() >= 0.0))
        throw std::domain_error(std::string(where) + ": radii must be >= 0");
      for (std::size_t i = 1; i < rs.size(); ++i)
        if (!(rs[i] > rs[i - 1]))
          throw std::domain_error(std::string(where) +
                                  ": radii must be strictly increasing");
      for (double v : vs)
        if (!(v >= 0.0) || !std::isfinite(v))
          throw std::domain_error(std::string(where) +
                                  ": profile values must be finite and >= 0");
      return;
    }
  }
  throw std::domain_error(std::string(where) + ": unknown weight kind");
}

// s^k e^(-s) / k! assembled in logs so k past 170 cannot overflow
double gamma_density(double s, int k) {
  if (k == 0) return std::exp(-s);
  if (s <= 0.0) return 0.0;
  return std::exp(k * std::log(s) - s - std::lgamma(k + 1.0));
}

// segment cuts of a tabulated profile in the s = pi r^2 variable, starting
// at 0 (the profile is constant below the first radius)
std::vector<double> tabulated_cuts(const RadialWeight& weight) {
  std::vector<double> cuts;
  cuts.push_back(0.0);
  for (double r : weight.radii) {
    const double s = kPi * r * r;
    if (s > cuts.back()) cuts.push_back(s);
  }
  return cuts;
}

double eigenvalue_k(const RadialWeight& weight, int k) {
  auto integrand = [&](double s) {
    return weight_value(weight, std::sqrt(s / kPi)) * gamma_density(s, k);
  };
  if (weight.kind == RadialWeight::Kind::tabulated) {
    const std::vector<double> cuts = tabulated_cuts(weight);
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j)
      total += quad::tanh_sinh(integrand, cuts[j], cuts[j + 1], kQuadOpts).value;
    return total;
  }
  const double scale = std::max(1.0, double(k));
  return quad::exp_sinh(integrand, scale, kQuadOpts).value;
}

// ball volume in R^(2d) of radius r, as a function of s = pi r^2
double ball_volume_s(double s, int d) {
  if (s <= 0.0) return 0.0;
  return std::exp(d * std::log(s) - std::lgamma(d + 1.0));
}

// distribution function mu(t) of a tabulated profile: the measure in
// R^(2d) of the super-level set {rho > t}, found by scanning the polyline
double tabulated_level_measure(const std::vector<double>& rs,
                               const std::vector<double>& vs, double t,
                               int d) {
  double measure = 0.0;
  double prev_r = 0.0;
  double prev_v = vs.front();
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double r = rs[i];
    const double v = vs[i];
    if (r > prev_r) {
      if (prev_v > t && v > t) {
        measure += ball_volume_s(kPi * r * r, d) -
                   ball_volume_s(kPi * prev_r * prev_r, d);
      } else if (prev_v > t && v <= t) {
        const double rc = prev_r + (r - prev_r) * (prev_v - t) / (prev_v - v);
        measure += ball_volume_s(kPi * rc * rc, d) -
                   ball_volume_s(kPi * prev_r * prev_r, d);
      } else if (prev_v <= t && v > t) {
        const double rc = prev_r + (r - prev_r) * (t - prev_v) / (v - prev_v);
        measure += ball_volume_s(kPi * r * r, d) -
                   ball_volume_s(kPi * rc * rc, d);
      }
    }
    prev_r = r;
    prev_v = v;
  }
  return measure;
}

}  // namespace

EigenSpectrum eigenvalues_radial(const RadialWeight& weight, int k_max) {
  validate_weight(weight, "eigenvalues_radial");
  if (weight.d != 1)
    throw std::domain_error(
        "eigenvalues_radial: only d = 1 weights are supported");
  if (k_max < 0)
    throw std::domain_error("eigenvalues_radial: k_max must be >= 0");

  EigenSpectrum out;
  out.truncation_K = k_max;
  out.eigenvalues.resize(k_max + 1);
  for (int k = 0; k <= k_max; ++k)
    out.eigenvalues[k] = eigenvalue_k(weight, k);

  const double mu0 = out.eigenvalues.front();
  out.monotone = true;
  for (int k = 0; k + 1 <= k_max; ++k) {
    if (out.eigenvalues[k + 1] >
        out.eigenvalues[k] + 1e-12 * std::max(mu0, 1e-30)) {
      out.monotone = false;
      break;
    }
  }
  out.tail_bound =
      out.monotone ? out.eigenvalues.back() : weight_peak(weight);
  out.norm = *std::max_element(out.eigenvalues.begin(), out.eigenvalues.end());
  return out;
}

double operator_norm_radial(const RadialWeight& weight) {
  validate_weight(weight, "operator_norm_radial");
  if (weight.d != 1)
    throw std::domain_error(
        "operator_norm_radial: only d = 1 weights are supported");
  if (!weight_nonincreasing(weight))
    throw std::domain_error(
        "operator_norm_radial: profile is not radially nonincreasing");
  return eigenvalues_radial(weight, 5).eigenvalues.front();
}

double lp_norm_radial(const RadialWeight& weight, double p) {
  validate_weight(weight, "lp_norm_radial");
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::domain_error("lp_norm_radial: p must be a finite real >= 1");
  const int d = weight.d;
  if (d < 1) throw std::domain_error("lp_norm_radial: d must be >= 1");
  const double lgd = std::lgamma(double(d));
  // integral of rho(sqrt(s/pi))^p s^(d-1) / (d-1)! ds over (0, inf)
  auto integrand = [&](double s) {
    const double g = weight_value(weight, std::sqrt(s / kPi));
    if (g <= 0.0) return 0.0;
    double le = p * std::log(g) - lgd;
    if (d >= 2) le += (d - 1) * std::log(s);
    return std::exp(le);
  };

  double total = 0.0;
  if (weight.kind == RadialWeight::Kind::tabulated) {
    const std::vector<double> cuts = tabulated_cuts(weight);
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j)
      total += quad::tanh_sinh(integrand, cuts[j], cuts[j + 1], kNormOpts).value;
  } else {
    double scale = 1.0;
    if (weight.kind == RadialWeight::Kind::gaussian) {
      scale = std::max(1.0, d * weight.decay / p);
      if (weight.amplitude == 0.0) return 0.0;
    } else {
      const auto& pp = weight.solution->params;
      scale = std::max(1.0, d * (std::max(pp.p, pp.q) - 1.0) / p);
    }
    total = quad::exp_sinh(integrand, scale, kNormOpts).value;
  }
  return std::pow(total, 1.0 / p);
}

double distribution_bound(const SampledField& field, int d) {
  if (d < 1) throw std::domain_error("distribution_bound: d must be >= 1");
  if (field.values.empty())
    throw std::domain_error("distribution_bound: empty field");
  for (double v : field.values)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::domain_error(
          "distribution_bound: samples must be finite and >= 0");

  std::vector<double> sorted = field.values;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  const double cell = field.cell_measure();
  double total = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] == 0.0) break;
    const double next = i + 1 < sorted.size() ? sorted[i + 1] : 0.0;
    if (sorted[i] > next)
      total += g_eval((i + 1) * cell, d) * (sorted[i] - next);
  }
  return total;
}

double distribution_bound(const RadialWeight& weight) {
  validate_weight(weight, "distribution_bound");
  const int d = weight.d;
  if (d < 1) throw std::domain_error("distribution_bound: d must be >= 1");

  switch (weight.kind) {
    case RadialWeight::Kind::gaussian: {
      const double amp = weight.amplitude;
      if (amp == 0.0) return 0.0;
      // substituting t = amp e^(-tau) gives mu = (decay tau)^d / d!
      const double lgd = std::lgamma(d + 1.0);
      auto integrand = [&](double tau) {
        const double mu = std::exp(d * std::log(weight.decay * tau) - lgd);
        return g_eval(mu, d) * std::exp(-tau);
      };
      return amp * quad::exp_sinh(integrand, 1.0, kQuadOpts).value;
    }
    case RadialWeight::Kind::optimal_psi:
      // for the optimal profile the distribution function is u(t) itself
      return bound_value(*weight.solution);
    case RadialWeight::Kind::tabulated: {
      // integrate G_d(mu(t)) between consecutive distinct profile values,
      // where mu is smooth
      std::vector<double> levels = weight.values;
      levels.push_back(0.0);
      std::sort(levels.begin(), levels.end());
      levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
      auto integrand = [&](double t) {
        return g_eval(
            tabulated_level_measure(weight.radii, weight.values, t, d), d);
      };
      double total = 0.0;
      for (std::size_t i = 0; i + 1 < levels.size(); ++i)
        total +=
            quad::tanh_sinh(integrand, levels[i], levels[i + 1], kQuadOpts)
                .value;
      return total;
    }
  }
  throw std::domain_error("distribution_bound: unknown weight kind");
}

RadialWeight random_nonincreasing_weight(Rng& rng, int n_points,
                                         double r_max) {
  if (n_points < 2 || !(r_max > 0.0))
    throw std::domain_error("random_nonincreasing_weight: bad shape");
  RadialWeight w;
  w.kind = RadialWeight::Kind::tabulated;
  w.d = 1;
  w.radii.resize(n_points);
  w.values.resize(n_points);
  double v = 0.3 + 1.2 * rng.uniform();
  for (int i = 0; i < n_points; ++i) {
    w.radii[i] = r_max * i / (n_points - 1);
    w.values[i] = v;
    v *= 0.55 + 0.45 * rng.uniform();
  }
  return w;
}

RadialWeight random_bump_weight(Rng& rng, int n_points, double r_max) {
  RadialWeight w = random_nonincreasing_weight(rng, n_points, r_max);
  const int lo = n_points / 4;
  const int hi = 3 * n_points / 4;
  const int j = lo + int(rng.uniform() * (hi - lo));
  w.values[j] = w.values.front() * (1.3 + 0.5 * rng.uniform());
  return w;
}

}  // namespace tfloc
