#pragma once

#include <complex>
#include <cstddef>

// Small dense kernels used by the sampled-field code paths. Each has a
// scalar reference implementation and, on x86 machines with AVX2+FMA, a
// vectorized variant. The active variant is chosen once at startup and can
// be overridden for testing.
namespace tfloc::kernels {

enum class Backend { best, scalar, avx2 };

// selects the backend; returns false (leaving the selection unchanged) if
// the requested one is unavailable on this machine
bool set_backend(Backend backend);
Backend active_backend();
const char* backend_name();

double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
// largest element; 0 for an empty range
double max_value(const double* x, std::size_t n);

// sum of x[k] * w^k for a unit-modulus phasor w = wr + i wi, with the real
// and imaginary parts of x supplied as separate arrays
std::complex<double> phasor_dot(const double* xr, const double* xi,
                                std::size_t n, double wr, double wi);

}  // namespace tfloc::kernels
