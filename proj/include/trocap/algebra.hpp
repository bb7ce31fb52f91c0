#pragma once

// Finite-dimensional operator algebra on dense matrices: *-algebra closure,
// conditional expectations, TRO detection and block decomposition, and the
// independence tests behind symbol validation.
//
// Spans are represented by Hilbert-Schmidt orthonormal lists. Rank decisions
// use a relative threshold of 1e-9 against the norm of the candidate.

#include <cstdint>
#include <optional>
#include <vector>

#include "trocap/channel.hpp"
#include "trocap/matcore.hpp"
#include "trocap/random.hpp"

namespace trocap {

inline constexpr double kRankTolerance = 1e-9;
inline constexpr std::uint64_t kDefaultDecompositionSeed = 0x7472'6f63'6170ULL;

/// Appends to an HS-orthonormal list when x has a component outside its span.
/// Returns true if the list grew.
bool extend_orthonormal(std::vector<CMatrix>& basis, const CMatrix& x, double rel_tol = kRankTolerance);
std::vector<CMatrix> orthonormal_span(const std::vector<CMatrix>& items, double rel_tol = kRankTolerance);
/// Frobenius norm of x minus its projection onto span(basis); basis orthonormal.
double span_residual(const std::vector<CMatrix>& basis, const CMatrix& x);
/// Orthogonal projection onto span(basis); basis orthonormal.
CMatrix project_onto_span(const std::vector<CMatrix>& basis, const CMatrix& x);

struct AlgebraBasis {
  std::size_t dim = 0;  // ambient matrix size
  std::vector<CMatrix> basis;
  bool unital = false;

  std::size_t size() const noexcept { return basis.size(); }
};

/// Smallest adjoint- and product-closed span containing the generators.
AlgebraBasis generate_star_algebra(const std::vector<CMatrix>& generators, double rel_tol = kRankTolerance);
/// C*-algebra spanned by x y^dagger for x, y in the space.
AlgebraBasis left_algebra(const std::vector<CMatrix>& space);
/// C*-algebra spanned by x^dagger y for x, y in the space.
AlgebraBasis right_algebra(const std::vector<CMatrix>& space);
AlgebraBasis left_algebra(const StinespringSpace& space);
AlgebraBasis right_algebra(const StinespringSpace& space);

struct TroCheck {
  bool is_tro = true;
  // Indices into the input list of the first violating triple x y^dagger z.
  std::size_t x = 0, y = 0, z = 0;
  double residual = 0.0;
  CMatrix product;
};

/// Triples are scanned in input order (x outer, z inner); the first product
/// whose distance to the span exceeds tol * max(1, |product|) is the witness.
TroCheck is_tro(const std::vector<CMatrix>& space, double tol = kRankTolerance);

/// Y R(Y), the smallest TRO containing span(Y), as an orthonormal list.
std::vector<CMatrix> smallest_tro(const std::vector<CMatrix>& y);

/// Trace-preserving conditional expectation onto an algebra, with the identity
/// adjoined when the algebra is not unital.
class ConditionalExpectation {
 public:
  explicit ConditionalExpectation(const AlgebraBasis& algebra);
  CMatrix operator()(const CMatrix& x) const;
  std::size_t dim() const noexcept { return dim_; }

 private:
  std::size_t dim_ = 0;
  std::vector<CMatrix> basis_;
};

CMatrix conditional_expectation(const AlgebraBasis& algebra, const CMatrix& x);

/// E_M(x) = tau(x) 1 within 1e-9 (relative to 1 + max|x|).
bool is_independent(const CMatrix& x, const AlgebraBasis& algebra);

struct IndependenceCheck {
  bool independent = true;
  double residual = 0.0;          // worst entry of E(P) - tau(P) 1
  std::size_t projections = 0;    // distinct eigenvalues of f
  std::optional<double> failing_eigenvalue;
};

/// Strong independence through the spectral projections of a Hermitian f.
IndependenceCheck check_strong_independence(const CMatrix& f, const AlgebraBasis& algebra);
bool is_strongly_independent(const CMatrix& f, const AlgebraBasis& algebra);

/// Checks that f is a symbol for the space: PSD, tau(f) = 1, strongly
/// independent of the right algebra of the smallest TRO containing the space.
/// Throws NotNormalized, NotIndependent, NotPSD or DimMismatch.
Symbol validate_symbol(const StinespringSpace& space, const CMatrix& f);
Symbol validate_symbol(const Channel& ch, const CMatrix& f);

// ---- Wedderburn structure -------------------------------------------------

/// One simple summand M_n (x) 1_l of a *-algebra. `units` holds n*l orthonormal
/// columns ordered a*l + j, in which every algebra element of this summand
/// reads z (x) 1_l.
struct AlgebraBlock {
  std::size_t n = 0;
  std::size_t l = 0;
  CMatrix central_projection;
  CMatrix units;
};

/// Summands sorted by the first ambient index their central projection touches.
std::vector<AlgebraBlock> wedderburn_blocks(const AlgebraBasis& algebra, Rng& rng);

struct TroDecomposition {
  std::vector<TroBlock> blocks;
  /// U on H_B and W on H_E with U^dagger x W = (+)_i z_i (x) 1_{l_i}, zero padded.
  CMatrix basis_change_out;
  CMatrix basis_change_env;
  double residual = 0.0;
  std::size_t dim = 0;  // linear dimension of the TRO
};

/// Throws NotTro when the span is not a TRO.
TroDecomposition tro_block_decomposition(const std::vector<CMatrix>& space, Rng& rng);
TroDecomposition tro_block_decomposition(const StinespringSpace& space,
                                         std::uint64_t seed = kDefaultDecompositionSeed);

/// Largest entry of U^dagger x W outside the declared block pattern, over x in the space.
double block_form_residual(const TroDecomposition& dec, const std::vector<CMatrix>& space);

/// Commutant {c : c g = g c for all generators}, as an algebra.
AlgebraBasis commutant(const std::vector<CMatrix>& generators);

}  // namespace trocap
