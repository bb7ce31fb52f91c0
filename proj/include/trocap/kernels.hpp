#pragma once

// Complex double-precision inner-loop kernels. Every kernel has a portable
// scalar reference; wider variants are compiled in separate translation units
// and chosen once at startup from the CPU feature set. Set TROCAP_SIMD=scalar
// in the environment to force the reference path.

#include <complex>
#include <cstddef>
#include <string_view>

namespace trocap::kernels {

using cplx = std::complex<double>;

struct KernelTable {
  std::string_view name;
  // Row-major C[m x n] = A[m x k] * B[k x n]; C must not alias A or B.
  void (*gemm)(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k, std::size_t n);
  // sum_i conj(x_i) * y_i
  cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);
  // y += alpha * x
  void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
  // sum_i |x_i|^2
  double (*norm2)(const cplx* x, std::size_t n);
};

const KernelTable& scalar_table();

/// nullptr when the variant was not compiled in or the CPU lacks AVX2+FMA.
const KernelTable* avx2_table();

/// The table used by the library; resolved on first call.
const KernelTable& active();

namespace scalar {
void gemm(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k, std::size_t n);
cplx dotc(const cplx* x, const cplx* y, std::size_t n);
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
double norm2(const cplx* x, std::size_t n);
}  // namespace scalar

#if defined(TROCAP_HAVE_AVX2)
namespace avx2 {
void gemm(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k, std::size_t n);
cplx dotc(const cplx* x, const cplx* y, std::size_t n);
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
double norm2(const cplx* x, std::size_t n);
}  // namespace avx2
#endif

}  // namespace trocap::kernels
