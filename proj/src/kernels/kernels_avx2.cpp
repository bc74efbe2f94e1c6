#include "tfloc/kernels.hpp"

#if defined(TFLOC_HAVE_AVX2)

#include <immintrin.h>

namespace tfloc::kernels::detail {

namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

}  // namespace

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double out = hsum(acc);
  for (; i < n; ++i) out += x[i];
  return out;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double out = hsum(acc);
  for (; i < n; ++i) out += x[i] * y[i];
  return out;
}

double max_avx2(const double* x, std::size_t n) {
  if (n < 4) {
    double out = n ? x[0] : 0.0;
    for (std::size_t i = 1; i < n; ++i) out = out < x[i] ? x[i] : out;
    return out;
  }
  __m256d acc = _mm256_loadu_pd(x);
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
  double out = hmax(acc);
  for (; i < n; ++i) out = out < x[i] ? x[i] : out;
  return out;
}

std::complex<double> phasor_avx2(const double* xr, const double* xi,
                                 std::size_t n, double wr, double wi) {
  // four lanes carry w^k, w^(k+1), w^(k+2), w^(k+3) and advance by w^4
  const double w2r = wr * wr - wi * wi;
  const double w2i = 2.0 * wr * wi;
  const double w3r = w2r * wr - w2i * wi;
  const double w3i = w2r * wi + w2i * wr;
  const double w4r = w2r * w2r - w2i * w2i;
  const double w4i = 2.0 * w2r * w2i;

  __m256d pr = _mm256_set_pd(w3r, w2r, wr, 1.0);
  __m256d pi = _mm256_set_pd(w3i, w2i, wi, 0.0);
  const __m256d sr = _mm256_set1_pd(w4r);
  const __m256d si = _mm256_set1_pd(w4i);
  __m256d ar = _mm256_setzero_pd();
  __m256d ai = _mm256_setzero_pd();

  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d vr = _mm256_loadu_pd(xr + k);
    const __m256d vi = _mm256_loadu_pd(xi + k);
    ar = _mm256_fmadd_pd(vr, pr, ar);
    ar = _mm256_fnmadd_pd(vi, pi, ar);
    ai = _mm256_fmadd_pd(vr, pi, ai);
    ai = _mm256_fmadd_pd(vi, pr, ai);
    const __m256d npr = _mm256_fmsub_pd(pr, sr, _mm256_mul_pd(pi, si));
    pi = _mm256_fmadd_pd(pr, si, _mm256_mul_pd(pi, sr));
    pr = npr;
  }

  double out_r = hsum(ar);
  double out_i = hsum(ai);
  double tr = _mm_cvtsd_f64(_mm256_castpd256_pd128(pr));
  double ti = _mm_cvtsd_f64(_mm256_castpd256_pd128(pi));
  for (; k < n; ++k) {
    out_r += xr[k] * tr - xi[k] * ti;
    out_i += xr[k] * ti + xi[k] * tr;
    const double nr = tr * wr - ti * wi;
    ti = tr * wi + ti * wr;
    tr = nr;
  }
  return {out_r, out_i};
}

}  // namespace tfloc::kernels::detail

#endif
