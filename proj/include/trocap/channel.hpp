#pragma once

// Channels as Kraus families, their dilations, and the operator-space view of
// the Stinespring range.
//
// The dilation is V|i> = sum_e K_e|i> (x) |e>, output index b*|E| + e. The
// operator attached to input basis vector i is h_i in B(H_E, H_B) with column
// e equal to K_e|i>, so that N(|x><y|) = x y^dagger.

#include <cstdint>
#include <vector>

#include "trocap/matcore.hpp"

namespace trocap {

class Channel {
 public:
  Channel() = default;

  /// Validates uniform shapes and sum K^dagger K = 1 within tol.
  static Channel from_kraus(std::vector<CMatrix> kraus, double tol = 1e-10);

  std::size_t dim_in() const noexcept { return dim_in_; }
  std::size_t dim_out() const noexcept { return dim_out_; }
  std::size_t dim_env() const noexcept { return kraus_.size(); }
  const std::vector<CMatrix>& kraus() const noexcept { return kraus_; }

 private:
  std::size_t dim_in_ = 0;
  std::size_t dim_out_ = 0;
  std::vector<CMatrix> kraus_;
};

CMatrix apply(const Channel& ch, const CMatrix& rho);
/// Heisenberg-picture dual sum K^dagger Y K.
CMatrix apply_adjoint(const Channel& ch, const CMatrix& y);
/// |E| x |E| output with tr(K_e rho K_e'^dagger) placed at (e', e).
CMatrix complement_apply(const Channel& ch, const CMatrix& rho);
/// Dual of complement_apply under the trace pairing.
CMatrix complement_apply_adjoint(const Channel& ch, const CMatrix& z);
/// (id_A (x) N)(rho) for rho on H_A (x) H_A'.
CMatrix apply_with_ancilla(const Channel& ch, const CMatrix& rho, std::size_t dim_ancilla);
/// Dual of apply_with_ancilla.
CMatrix apply_adjoint_with_ancilla(const Channel& ch, const CMatrix& y, std::size_t dim_ancilla);

/// Unnormalized Choi matrix sum_ij e_ij (x) N(e_ij), A' first.
CMatrix choi(const Channel& ch);
/// The isometry V as a (|B||E|) x |A'| matrix.
CMatrix stinespring_isometry(const Channel& ch);

/// The range of V viewed inside B(H_E, H_B). basis[i] is the operator of the
/// i-th input basis vector, so the list is both a basis of the space and the
/// map H_A' -> X.
struct StinespringSpace {
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;
  std::size_t dim_env = 0;
  std::vector<CMatrix> basis;

  std::uint64_t digest() const;
};

StinespringSpace stinespring_space(const Channel& ch);
/// The channel |x><y| -> x y^dagger determined by a space; inverse of stinespring_space.
Channel channel_from_space(const StinespringSpace& space);

struct TroBlock {
  std::size_t n = 0;  // output-side block size
  std::size_t m = 0;  // environment-side block size
  std::size_t l = 1;  // multiplicity
  friend bool operator==(const TroBlock&, const TroBlock&) = default;
};

/// What validate_symbol established about a density f.
struct SymbolCertificate {
  bool valid = false;
  std::uint64_t space_digest = 0;
  /// Blocks of the smallest TRO containing the space.
  std::vector<TroBlock> tro_blocks;
  /// Dimension of that TRO and of its right algebra.
  std::size_t tro_dim = 0;
  std::size_t right_algebra_dim = 0;
  /// Largest |E(P) - tau(P) 1| entry over spectral projections P of f.
  double independence_residual = 0.0;
  std::size_t spectral_projections = 0;
  double tau = 1.0;
  /// True when the space itself is a TRO (no enlargement needed).
  bool space_is_tro = false;
};

struct Symbol {
  CMatrix f;
  SymbolCertificate certificate;
};

/// N_f(|x><y|) = x f y^dagger, realized with Kraus operators
/// L_j = sum_e (sqrt f)_{ej} K_e. Throws InvalidSymbol unless the certificate
/// is valid for this space.
Channel modified_channel(const StinespringSpace& space, const Symbol& f);
/// Same map without certificate checks; f must be PSD on H_E. For oracles and
/// for inputs that are deliberately not symbols, in which case the result is
/// completely positive but need not preserve trace.
Channel modified_channel_unchecked(const StinespringSpace& space, const CMatrix& f);

/// Kraus family {K_e (x) L_e'}, environment index e*|E'| + e'.
Channel tensor_channels(const Channel& a, const Channel& b);
/// Output lambda N(rho) (+) (1 - lambda) M(rho), block-diagonal.
Channel heralded_channel(const Channel& a, const Channel& b, double lambda);

/// Conjugation by a unitary or isometry as a one-Kraus channel.
Channel unitary_channel(const CMatrix& u);
/// rho -> tr(rho) 1/d, with the d^2 Weyl operators scaled by 1/d as Kraus family.
Channel depolarizing_channel(std::size_t d);

}  // namespace trocap
