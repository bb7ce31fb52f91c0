#pragma once

// Seeded sampling helpers. Every consumer derives an independent generator
// from (seed, index) so parallel fan-out never changes results.

#include <cstdint>
#include <random>

#include "trocap/matcore.hpp"

namespace trocap {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
/// Seed for the index-th independent stream under a master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);
Rng make_rng(std::uint64_t seed, std::uint64_t index);

/// Entries i.i.d. complex standard normal (real and imaginary parts N(0, 1/2)).
CMatrix random_gaussian(std::size_t rows, std::size_t cols, Rng& rng);
/// Haar-distributed unitary via QR of a Ginibre matrix with phase fix.
CMatrix random_unitary(std::size_t n, Rng& rng);
/// G G^dagger / tr(G G^dagger) with square Ginibre G (full rank almost surely).
CMatrix random_density(std::size_t n, Rng& rng);
/// Unit vector, uniformly distributed on the sphere, as an n x 1 matrix.
CMatrix random_pure_vector(std::size_t n, Rng& rng);
/// Random Hermitian matrix with Gaussian entries.
CMatrix random_hermitian(std::size_t n, Rng& rng);

/// FNV-1a over the raw bytes of the entries; used for input digests.
std::uint64_t fnv1a(const CMatrix& m, std::uint64_t state = 0xcbf29ce484222325ULL);

}  // namespace trocap
