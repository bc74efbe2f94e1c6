#include "tfloc/kernels.hpp"

#include <algorithm>

namespace tfloc::kernels {

namespace detail {

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double max_scalar(const double* x, std::size_t n) {
  if (n == 0) return 0.0;
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i) m = std::max(m, x[i]);
  return m;
}

std::complex<double> phasor_scalar(const double* xr, const double* xi,
                                   std::size_t n, double wr, double wi) {
  // Horner-free forward recurrence keeps the phasor power exact to within
  // rounding of repeated complex multiplies
  double pr = 1.0, pi = 0.0;
  double ar = 0.0, ai = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    ar += xr[k] * pr - xi[k] * pi;
    ai += xr[k] * pi + xi[k] * pr;
    const double nr = pr * wr - pi * wi;
    pi = pr * wi + pi * wr;
    pr = nr;
  }
  return {ar, ai};
}

#if defined(TFLOC_HAVE_AVX2)
double sum_avx2(const double* x, std::size_t n);
double dot_avx2(const double* x, const double* y, std::size_t n);
double max_avx2(const double* x, std::size_t n);
std::complex<double> phasor_avx2(const double* xr, const double* xi,
                                 std::size_t n, double wr, double wi);
#endif

bool avx2_available() {
#if defined(TFLOC_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend g_backend = avx2_available() ? Backend::avx2 : Backend::scalar;

}  // namespace detail

bool set_backend(Backend backend) {
  if (backend == Backend::best) {
    detail::g_backend =
        detail::avx2_available() ? Backend::avx2 : Backend::scalar;
    return true;
  }
  if (backend == Backend::avx2 && !detail::avx2_available()) return false;
  detail::g_backend = backend;
  return true;
}

Backend active_backend() { return detail::g_backend; }

const char* backend_name() {
  return detail::g_backend == Backend::avx2 ? "avx2" : "scalar";
}

double sum(const double* x, std::size_t n) {
#if defined(TFLOC_HAVE_AVX2)
  if (detail::g_backend == Backend::avx2) return detail::sum_avx2(x, n);
#endif
  return detail::sum_scalar(x, n);
}

double dot(const double* x, const double* y, std::size_t n) {
#if defined(TFLOC_HAVE_AVX2)
  if (detail::g_backend == Backend::avx2) return detail::dot_avx2(x, y, n);
#endif
  return detail::dot_scalar(x, y, n);
}

double max_value(const double* x, std::size_t n) {
#if defined(TFLOC_HAVE_AVX2)
  if (detail::g_backend == Backend::avx2) return detail::max_avx2(x, n);
#endif
  return detail::max_scalar(x, n);
}

std::complex<double> phasor_dot(const double* xr, const double* xi,
                                std::size_t n, double wr, double wi) {
#if defined(TFLOC_HAVE_AVX2)
  if (detail::g_backend == Backend::avx2)
    return detail::phasor_avx2(xr, xi, n, wr, wi);
#endif
  return detail::phasor_scalar(xr, xi, n, wr, wi);
}

}  // namespace tfloc::kernels
