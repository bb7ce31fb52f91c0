#include "trocap/random.hpp"

#include <cmath>
#include <cstring>

namespace trocap {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

Rng make_rng(std::uint64_t seed, std::uint64_t index) { return Rng(derive_seed(seed, index)); }

CMatrix random_gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix g(rows, cols);
  for (auto& x : g.entries()) {
    const double re = normal(rng);
    const double im = normal(rng);
    x = cplx(re, im);
  }
  return g;
}

CMatrix random_unitary(std::size_t n, Rng& rng) {
  // Modified Gram-Schmidt on the columns of a Ginibre matrix; equivalent to
  // QR with a positive diagonal of R, which gives the Haar measure.
  CMatrix q = random_gaussian(n, n, rng);
  for (std::size_t c = 0; c < n; ++c) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < c; ++k) {
        cplx dot(0.0, 0.0);
        for (std::size_t r = 0; r < n; ++r) dot += std::conj(q(r, k)) * q(r, c);
        for (std::size_t r = 0; r < n; ++r) q(r, c) -= dot * q(r, k);
      }
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) norm += std::norm(q(r, c));
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < n; ++r) q(r, c) /= norm;
  }
  return q;
}

CMatrix random_density(std::size_t n, Rng& rng) {
  const CMatrix g = random_gaussian(n, n, rng);
  CMatrix rho = g * g.adjoint();
  rho *= cplx(1.0 / rho.trace().real(), 0.0);
  return hermitian_part(rho);
}

CMatrix random_pure_vector(std::size_t n, Rng& rng) {
  CMatrix v = random_gaussian(n, 1, rng);
  v *= cplx(1.0 / v.frobenius_norm(), 0.0);
  return v;
}

CMatrix random_hermitian(std::size_t n, Rng& rng) { return hermitian_part(random_gaussian(n, n, rng)); }

std::uint64_t fnv1a(const CMatrix& m, std::uint64_t state) {
  auto mix = [&state](const void* p, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      state ^= bytes[i];
      state *= 0x100000001b3ULL;
    }
  };
  const std::uint64_t shape[2] = {m.rows(), m.cols()};
  mix(shape, sizeof(shape));
  mix(m.data(), m.size() * sizeof(cplx));
  return state;
}

}  // namespace trocap
