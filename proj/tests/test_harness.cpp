#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "tfloc/harness.hpp"
#include "tfloc/regimes.hpp"
#include "tfloc/solver.hpp"

using namespace tfloc;

namespace {

constexpr double kPi = 3.14159265358979324;

double gaussian_spectrogram_value(double x, double w) {
  return std::exp(-kPi * (x * x + w * w));
}

double hermite1_spectrogram_value(double x, double w) {
  const double s = kPi * (x * x + w * w);
  return s * std::exp(-s);
}

double max_abs_error(const SampledField& field, double (*model)(double, double)) {
  double worst = 0.0;
  for (int ix = 0; ix < field.n; ++ix) {
    for (int iw = 0; iw < field.n; ++iw) {
      const double err =
          std::abs(field.at(ix, iw) - model(field.coord(ix), field.coord(iw)));
      worst = std::max(worst, err);
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("hermite values and discrete orthonormality") {
  CHECK(hermite_value(0, 0.3) ==
        doctest::Approx(std::pow(2.0, 0.25) * std::exp(-kPi * 0.09))
            .epsilon(1e-14));
  CHECK(hermite_value(1, 0.3) ==
        doctest::Approx(std::pow(2.0, 0.25) * 2.0 * std::sqrt(kPi) * 0.3 *
                        std::exp(-kPi * 0.09))
            .epsilon(1e-13));
  CHECK(hermite_value(1, 0.0) == 0.0);

  const double dt = 1.0 / 64;
  for (int j = 0; j <= 5; ++j) {
    for (int k = j; k <= 5; ++k) {
      double acc = 0.0;
      for (double t = -8.0; t <= 8.0 + 0.5 * dt; t += dt) {
        acc += hermite_value(j, t) * hermite_value(k, t) * dt;
      }
      const double expected = (j == k) ? 1.0 : 0.0;
      CHECK(std::abs(acc - expected) <= 1e-10);
    }
  }

  CHECK_THROWS_AS(hermite_value(-1, 0.0), std::domain_error);
  CHECK_THROWS_AS(hermite_value(31, 0.0), std::domain_error);
}

TEST_CASE("built-in signals are unit-normalized and deterministic") {
  const Signal g = signal_gaussian();
  CHECK(signal_l2_squared(g) == doctest::Approx(1.0).epsilon(1e-10));

  const Signal h1 = signal_hermite(1);
  CHECK(signal_l2_squared(h1) == doctest::Approx(1.0).epsilon(1e-10));

  const Signal mix_a = signal_random_mixture(42);
  const Signal mix_b = signal_random_mixture(42);
  const Signal mix_c = signal_random_mixture(43);
  CHECK(signal_l2_squared(mix_a) == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(mix_a.samples.size() == mix_b.samples.size());
  bool identical = true;
  bool differs_from_c = false;
  for (std::size_t i = 0; i < mix_a.samples.size(); ++i) {
    if (mix_a.samples[i] != mix_b.samples[i]) identical = false;
    if (mix_a.samples[i] != mix_c.samples[i]) differs_from_c = true;
  }
  CHECK(identical);
  CHECK(differs_from_c);
}

TEST_CASE("gaussian spectrogram matches the closed form") {
  const Signal g = signal_gaussian();
  const SampledField field = spectrogram(g, 4.0, 1.0 / 16);
  CHECK(field.n == 129);
  CHECK(max_abs_error(field, gaussian_spectrogram_value) < 1e-6);
}

TEST_CASE("first hermite spectrogram matches the closed form") {
  const Signal h1 = signal_hermite(1);
  const SampledField field = spectrogram(h1, 4.0, 1.0 / 16);
  CHECK(max_abs_error(field, hermite1_spectrogram_value) < 1e-6);
}

TEST_CASE("spectrogram is an l2 isometry up to discretization") {
  const Signal mix = signal_random_mixture(9);
  const SampledField field = spectrogram(mix, 4.0, 0.0625);
  double mass = 0.0;
  for (double v : field.values) mass += v;
  mass *= field.cell_measure();
  CHECK(mass == doctest::Approx(signal_l2_squared(mix)).epsilon(1e-4));
}

TEST_CASE("spectrogram of the zero signal is zero") {
  Signal zero = signal_gaussian();
  for (auto& s : zero.samples) s = 0.0;
  const SampledField field = spectrogram(zero, 2.0, 0.125);
  for (double v : field.values) CHECK(v == 0.0);
}

TEST_CASE("spectrogram rejects signals that underfill the window support") {
  const Signal narrow = signal_gaussian(1.0);
  CHECK_THROWS_AS(spectrogram(narrow, 4.0, 0.0625), std::domain_error);
}

TEST_CASE("time shift translates the spectrogram grid") {
  const double dt = 1.0 / 64;
  const double h = 4 * dt;
  const Signal base = signal_hermite(1);
  Signal shifted = base;
  shifted.t0 += h;

  const SampledField a = spectrogram(base, 2.0, h);
  const SampledField b = spectrogram(shifted, 2.0, h);
  // f(t - h) moves each time column one grid step to the right
  double worst = 0.0;
  for (int ix = 0; ix + 1 < a.n; ++ix) {
    for (int iw = 0; iw < a.n; ++iw) {
      worst = std::max(worst, std::abs(b.at(ix + 1, iw) - a.at(ix, iw)));
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("field_from_weight samples the radial profile exactly") {
  RadialWeight gauss;
  gauss.kind = RadialWeight::Kind::gaussian;
  gauss.d = 1;
  gauss.amplitude = std::sqrt(2.0);
  gauss.decay = 1.0;
  const SampledField field = field_from_weight(gauss, 2.0, 0.25);
  for (int ix = 0; ix < field.n; ++ix) {
    for (int iw = 0; iw < field.n; ++iw) {
      const double x = field.coord(ix);
      const double w = field.coord(iw);
      const double expected = std::sqrt(2.0) * std::exp(-kPi * (x * x + w * w));
      CHECK(field.at(ix, iw) == doctest::Approx(expected).epsilon(1e-13));
    }
  }
}

TEST_CASE("make_field validates the grid") {
  const SampledField f = make_field(2.0, 0.5);
  CHECK(f.n == 9);
  CHECK(f.coord(4) == 0.0);
  CHECK_THROWS_AS(make_field(2.0, 0.3), std::domain_error);
  CHECK_THROWS_AS(make_field(0.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(make_field(-1.0, 0.5), std::domain_error);
}

TEST_CASE("pairing against the extremal weight recovers the sharp constant") {
  const Signal g = signal_gaussian();
  const SampledField spec = spectrogram(g, 4.0, 0.0625);

  RadialWeight lieb;
  lieb.kind = RadialWeight::Kind::gaussian;
  lieb.d = 1;
  lieb.amplitude = std::sqrt(2.0);
  lieb.decay = 1.0;
  const SampledField weight = field_from_weight(lieb, 4.0, 0.0625);

  // <|Vg|^2, sqrt(2) e^(-pi r^2)> = sqrt(2)/2: the ground eigenvalue of the
  // localization operator with the extremal weight
  CHECK(pairing(spec, weight) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(2e-4));

  SampledField ones = make_field(4.0, 0.0625);
  for (double& v : ones.values) v = 1.0;
  CHECK(pairing(spec, ones) ==
        doctest::Approx(signal_l2_squared(g)).epsilon(1e-4));

  SampledField zero = make_field(4.0, 0.0625);
  CHECK(pairing(spec, zero) == 0.0);

  SampledField mismatched = make_field(4.0, 0.125);
  CHECK_THROWS_AS(pairing(spec, mismatched), std::invalid_argument);
}

TEST_CASE("sum norm brackets on closed-form fields") {
  // indicator of a unit-measure square: both norms 1, best split trivial
  SampledField box = make_field(2.0, 0.125);
  const double cell = box.cell_measure();
  const int per_side = static_cast<int>(std::lround(1.0 / 0.125));
  const int lo = (box.n - per_side) / 2;
  double mass = 0.0;
  for (int ix = lo; ix < lo + per_side; ++ix) {
    for (int iw = lo; iw < lo + per_side; ++iw) {
      box.at(ix, iw) = 1.0;
      mass += cell;
    }
  }
  REQUIRE(mass == doctest::Approx(1.0).epsilon(1e-12));
  const SumNorm box_norm = lp_lq_sum_norm(box, 2.0, 3.0);
  CHECK(box_norm.upper == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(box_norm.lower == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(box_norm.lower <= box_norm.upper + 1e-12);

  // p = q = 2 collapses to the plain L^2 norm
  RadialWeight lieb;
  lieb.kind = RadialWeight::Kind::gaussian;
  lieb.d = 1;
  lieb.amplitude = std::sqrt(2.0);
  lieb.decay = 1.0;
  const SampledField gauss = field_from_weight(lieb, 4.0, 0.0625);
  // ||sqrt(2) e^(-pi r^2)||_2 over the plane is exactly 1
  const SumNorm gauss_norm = lp_lq_sum_norm(gauss, 2.0, 2.0);
  CHECK(gauss_norm.upper == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(gauss_norm.lower <= gauss_norm.upper + 1e-12);

  const SampledField zero = make_field(2.0, 0.125);
  const SumNorm zero_norm = lp_lq_sum_norm(zero, 2.0, 3.0);
  CHECK(zero_norm.upper == 0.0);
  CHECK(zero_norm.lower == 0.0);

  CHECK_THROWS_AS(lp_lq_sum_norm(box, 1.0, 3.0), std::domain_error);
  CHECK_THROWS_AS(lp_lq_sum_norm(box, 2.0, 0.5), std::domain_error);
  SampledField empty;
  CHECK_THROWS_AS(lp_lq_sum_norm(empty, 2.0, 3.0), std::domain_error);
}

TEST_CASE("sum norm bracket ordering and exponent symmetry on a mixture") {
  const Signal mix = signal_random_mixture(3);
  const SampledField spec = spectrogram(mix, 4.0, 0.0625);
  const SumNorm ab = lp_lq_sum_norm(spec, 2.0, 3.0);
  const SumNorm ba = lp_lq_sum_norm(spec, 3.0, 2.0);
  CHECK(ab.lower <= ab.upper + 1e-12);
  CHECK(ab.upper == doctest::Approx(ba.upper).epsilon(1e-12));
  CHECK(ab.lower == doctest::Approx(ba.lower).epsilon(1e-12));
}

TEST_CASE("spectrogram verification brackets the sharp constant") {
  struct Case {
    double p, q;
  };
  const Case cases[] = {{2.0, 2.0}, {1.8, 2.4}, {3.0, 1.5}};
  for (const auto& c : cases) {
    const LiebReport report =
        verify_lieb_extension(signal_gaussian(), c.p, c.q);
    CAPTURE(c.p);
    CAPTURE(c.q);
    CHECK(report.pass);
    CHECK(report.l2sq == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(report.upper - report.constant) <= 1e-3);
    CHECK(std::abs(report.lower - report.constant) <= 1e-3);
    CHECK(report.gap <= report.tol);
    CHECK(report.p_dual ==
          doctest::Approx(conjugate_exponent(c.p)).epsilon(1e-14));
    CHECK(report.q_dual ==
          doctest::Approx(conjugate_exponent(c.q)).epsilon(1e-14));
  }
}

TEST_CASE("first hermite signal stays strictly inside the bound") {
  const LiebReport report = verify_lieb_extension(signal_hermite(1), 2.0, 2.0);
  CHECK(report.pass);
  CHECK(report.upper == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(report.constant == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK(report.upper < report.constant);
}

TEST_CASE("oracle suite passes end to end") {
  const OracleSuiteReport report = run_oracle_suite(1);
  CHECK(report.pass);
  CHECK(report.checks.size() == 7);
  for (const auto& check : report.checks) {
    CAPTURE(check.name);
    CHECK(check.pass);
  }
}

TEST_CASE("lieb suite passes on a reduced configuration") {
  LiebSuiteConfig config;
  config.mixtures = 3;
  const LiebSuiteReport report = run_lieb_suite(config);
  CHECK(report.pass);
  CHECK(report.cases.size() == 4 + 3);
  CHECK(report.cases[0].signal == "gaussian");
  for (const auto& item : report.cases) {
    CAPTURE(item.signal);
    CHECK(item.pass);
  }
}
