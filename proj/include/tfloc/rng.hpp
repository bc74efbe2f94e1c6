#pragma once

// Deterministic random numbers for tests and the verification suites.
// std::mt19937_64 has a standard-specified sequence, and the uniform draw
// below uses the raw bits directly, so results are identical across
// platforms and library implementations.

#include <complex>
#include <random>

namespace tfloc {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // uniform on [0, 1)
  double uniform() { return (engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform on the complex unit square, recentered to [-1, 1)^2
  std::complex<double> complex_box() {
    double re = uniform(-1.0, 1.0);
    double im = uniform(-1.0, 1.0);
    return {re, im};
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tfloc
