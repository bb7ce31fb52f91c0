// Compiled with -mavx2 -mfma; only reached through the dispatch table after a
// CPU feature check.
#include <immintrin.h>

#include "trocap/kernels.hpp"

namespace trocap::kernels::avx2 {

namespace {

// One __m256d holds two complex numbers laid out as (re0, im0, re1, im1).
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }
inline __m256d swap_re_im(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void gemm(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const cplx* arow = a + i * k;
    cplx* crow = c + i * n;
    std::size_t j = 0;
    // 4 complex outputs per step, real/imag partial products kept apart and
    // recombined with a single addsub at the end.
    for (; j + 4 <= n; j += 4) {
      __m256d r0 = _mm256_setzero_pd(), s0 = _mm256_setzero_pd();
      __m256d r1 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
      for (std::size_t p = 0; p < k; ++p) {
        const __m256d ar = _mm256_set1_pd(arow[p].real());
        const __m256d ai = _mm256_set1_pd(arow[p].imag());
        const __m256d b0 = load2(b + p * n + j);
        const __m256d b1 = load2(b + p * n + j + 2);
        r0 = _mm256_fmadd_pd(ar, b0, r0);
        s0 = _mm256_fmadd_pd(ai, swap_re_im(b0), s0);
        r1 = _mm256_fmadd_pd(ar, b1, r1);
        s1 = _mm256_fmadd_pd(ai, swap_re_im(b1), s1);
      }
      store2(crow + j, _mm256_addsub_pd(r0, s0));
      store2(crow + j + 2, _mm256_addsub_pd(r1, s1));
    }
    for (; j + 2 <= n; j += 2) {
      __m256d r0 = _mm256_setzero_pd(), s0 = _mm256_setzero_pd();
      for (std::size_t p = 0; p < k; ++p) {
        const __m256d ar = _mm256_set1_pd(arow[p].real());
        const __m256d ai = _mm256_set1_pd(arow[p].imag());
        const __m256d b0 = load2(b + p * n + j);
        r0 = _mm256_fmadd_pd(ar, b0, r0);
        s0 = _mm256_fmadd_pd(ai, swap_re_im(b0), s0);
      }
      store2(crow + j, _mm256_addsub_pd(r0, s0));
    }
    for (; j < n; ++j) {
      cplx acc(0.0, 0.0);
      for (std::size_t p = 0; p < k; ++p) acc += arow[p] * b[p * n + j];
      crow[j] = acc;
    }
  }
}

cplx dotc(const cplx* x, const cplx* y, std::size_t n) {
  __m256d re = _mm256_setzero_pd();
  __m256d im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = load2(x + i);
    const __m256d yv = load2(y + i);
    re = _mm256_fmadd_pd(xv, yv, re);              // xr*yr, xi*yi
    im = _mm256_fmadd_pd(xv, swap_re_im(yv), im);  // xr*yi, xi*yr
  }
  // im lanes alternate (+, -): fold with a sign mask.
  const __m256d sign = _mm256_set_pd(-1.0, 1.0, -1.0, 1.0);
  double r = hsum(re);
  double q = hsum(_mm256_mul_pd(im, sign));
  for (; i < n; ++i) {
    r += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    q += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {r, q};
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = load2(x + i);
    const __m256d prod = _mm256_fmaddsub_pd(ar, xv, _mm256_mul_pd(ai, swap_re_im(xv)));
    store2(y + i, _mm256_add_pd(load2(y + i), prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double norm2(const cplx* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = load2(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

}  // namespace trocap::kernels::avx2
