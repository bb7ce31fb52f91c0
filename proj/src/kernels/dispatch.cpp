#include <cstdlib>
#include <string_view>

#include "trocap/kernels.hpp"

namespace trocap::kernels {

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", &scalar::gemm, &scalar::dotc, &scalar::axpy, &scalar::norm2};
  return table;
}

const KernelTable* avx2_table() {
#if defined(TROCAP_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  static const KernelTable table{"avx2", &avx2::gemm, &avx2::dotc, &avx2::axpy, &avx2::norm2};
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable* chosen = [] {
    const char* env = std::getenv("TROCAP_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return &scalar_table();
    if (const KernelTable* wide = avx2_table()) return wide;
    return &scalar_table();
  }();
  return *chosen;
}

}  // namespace trocap::kernels
