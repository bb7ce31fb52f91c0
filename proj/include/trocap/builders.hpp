#pragma once

// Constructors for the standard families of modified TRO channels: direct sums
// of partial traces, random unitaries over projective group representations,
// Schur multipliers, and the 4 -> 3 example Phi_alpha.

#include <cstddef>
#include <vector>

#include "trocap/algebra.hpp"
#include "trocap/channel.hpp"
#include "trocap/matcore.hpp"

namespace trocap {

/// Elements are 0..n-1; mul(g, h) is the index of gh.
class FiniteGroup {
 public:
  /// Validates the table (Latin square, associativity, two-sided identity) and
  /// the cocycle conditions within 1e-12. An empty cocycle means all ones.
  FiniteGroup(std::vector<std::vector<std::size_t>> table, std::vector<std::vector<cplx>> cocycle = {});

  std::size_t order() const noexcept { return table_.size(); }
  std::size_t identity() const noexcept { return identity_; }
  std::size_t mul(std::size_t g, std::size_t h) const { return table_[g][h]; }
  std::size_t inverse(std::size_t g) const { return inverse_[g]; }
  cplx cocycle(std::size_t g, std::size_t h) const { return cocycle_[g][h]; }
  const std::vector<std::vector<std::size_t>>& table() const noexcept { return table_; }

  /// Same group with a different cocycle.
  FiniteGroup with_cocycle(std::vector<std::vector<cplx>> cocycle) const;

 private:
  std::vector<std::vector<std::size_t>> table_;
  std::vector<std::vector<cplx>> cocycle_;
  std::vector<std::size_t> inverse_;
  std::size_t identity_ = 0;
};

/// Z_n with g*h = (g + h) mod n.
FiniteGroup cyclic_group(std::size_t n);
/// G x H with element (g, h) at index g*|H| + h; cocycles multiply.
FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h);
/// D_n of order 2n: index k is the rotation r^k, index n + k is r^k s.
FiniteGroup dihedral_group(std::size_t n);

/// u(g) u(h) = sigma(g, h) u(gh), checked within 1e-10 along with unitarity.
class ProjectiveRep {
 public:
  ProjectiveRep(FiniteGroup group, std::vector<CMatrix> unitaries);

  /// Reads the multiplication table and cocycle off the products of a list of
  /// unitaries closed under multiplication up to phase, with u[0] = 1.
  static ProjectiveRep from_unitaries(std::vector<CMatrix> unitaries);

  const FiniteGroup& group() const noexcept { return group_; }
  const std::vector<CMatrix>& unitaries() const noexcept { return unitaries_; }
  const CMatrix& operator()(std::size_t g) const { return unitaries_[g]; }
  std::size_t dim() const noexcept { return unitaries_.empty() ? 0 : unitaries_.front().rows(); }

 private:
  FiniteGroup group_;
  std::vector<CMatrix> unitaries_;
};

/// I, X, Y, Z on C^2 as a projective representation of Z_2 x Z_2.
ProjectiveRep pauli_rep();
/// Left regular representation u(g)|h> = |gh>.
ProjectiveRep regular_rep(const FiniteGroup& group);
/// u(g) = 1_d for every g.
ProjectiveRep trivial_rep(const FiniteGroup& group, std::size_t d);

/// A modified channel together with the base it modifies.
struct ModifiedFamily {
  Channel channel;         // N_f
  Channel base;            // N
  StinespringSpace space;  // of the base
  Symbol symbol;
};

/// (+)_i id_{n_i} (x) tr_{m_i}. One Kraus operator per (block, traced index),
/// so |E| = sum m_i. Throws EmptyBlocks, or OutOfRange for a zero count.
Channel partial_trace_sum_channel(const std::vector<std::pair<std::size_t, std::size_t>>& blocks);

/// rho -> sum_g p(g) u(g) rho u(g)^dagger for a probability vector p; the
/// symbol is diag(|G| p) on l_2(G) over the uniform base. Throws
/// BadDistribution unless p >= 0 and sums to 1 within 1e-10.
ModifiedFamily group_random_unitary(const ProjectiveRep& rep, const std::vector<double>& probs);

/// One summand M_n (x) 1_m of the commutant u(G)'.
struct CommutantBlock {
  std::size_t multiplicity = 0;  // n
  std::size_t irrep_dim = 0;     // m
  friend bool operator==(const CommutantBlock&, const CommutantBlock&) = default;
};

/// Blocks of u(G)', ordered by the first basis index each one touches.
std::vector<CommutantBlock> commutant_blocks(const ProjectiveRep& rep);

/// M_phi(|g><g'|) = phi(g'^-1 g) |g><g'| as the modification of complete
/// dephasing by f = [phi(g'^-1 g)]. Throws NotPositiveDefinite unless f is PSD
/// within 1e-10 with unit diagonal.
ModifiedFamily schur_multiplier_channel(const FiniteGroup& group, const std::vector<cplx>& phi);

/// Qubit dephasing [[a, q b], [q c, d]]; q in [-1, 1].
ModifiedFamily dephasing_family(double q);

/// The environment swap S (0 <-> 2, 1 <-> 3) of Phi_alpha.
CMatrix phi_alpha_swap();
/// Phi_alpha over the base Phi_0 = id_1 (x) tr_2 (+) id_1 (+) id_1 with symbol
/// 1 + alpha S. Throws OutOfRange for |alpha| > 1.
ModifiedFamily phi_alpha(double alpha);

/// Inputs supported on {0, 2} or on {1, 3}, where Phi_alpha acts as the qubit
/// dephasing with parameter alpha.
CMatrix phi_alpha_block_input(const CMatrix& qubit, bool second_pair);

}  // namespace trocap
