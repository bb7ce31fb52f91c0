#pragma once

// Entropies and divergences in bits, and the conditional/mutual Rényi
// quantities that need an optimization over states on B.

#include <cstdint>
#include <optional>
#include <string>

#include "trocap/algebra.hpp"
#include "trocap/channel.hpp"
#include "trocap/matcore.hpp"

namespace trocap {

/// A density on H_A (x) H_B, A first.
class BipartiteState {
 public:
  /// Throws NotState unless rho is PSD with unit trace (both within 1e-10)
  /// and DimMismatch unless rho is (da*db) square.
  BipartiteState(CMatrix rho, std::size_t dim_a, std::size_t dim_b);

  const CMatrix& rho() const noexcept { return rho_; }
  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }
  CMatrix marginal_a() const { return partial_trace(rho_, dim_a_, dim_b_, Keep::A); }
  CMatrix marginal_b() const { return partial_trace(rho_, dim_a_, dim_b_, Keep::B); }

 private:
  CMatrix rho_;
  std::size_t dim_a_;
  std::size_t dim_b_;
};

/// Throws NotState for non-PSD input or trace off by more than 1e-8.
double von_neumann_entropy(const CMatrix& rho);
/// kInf when supp(rho) is not inside supp(sigma).
double relative_entropy(const CMatrix& rho, const CMatrix& sigma);
/// p' log || sigma^(-1/2p') rho sigma^(-1/2p') ||_p for p > 1, p = kInf allowed.
double sandwiched_renyi(const CMatrix& rho, const CMatrix& sigma, double p);

/// H(B) - H(AB).
double coherent_information(const BipartiteState& w);
/// H(A) + H(B) - H(AB).
double mutual_information(const BipartiteState& w);

struct RenyiOptimizerOptions {
  /// Restricts sigma^B to this algebra (with its unit) when set.
  std::optional<AlgebraBasis> restrict_b;
  std::uint64_t seed = 0x5eed;
  /// Random starting points for the fallback, besides the marginal and 1/|B|.
  int restarts = 2;
  int max_iterations = 4000;
};

struct RenyiOptimum {
  double value = 0.0;       // the entropy or information requested
  double divergence = 0.0;  // the minimized D_p
  CMatrix sigma;            // minimizer on B
  std::string method;       // "fixed-point" or "gradient"
  int iterations = 0;
};

/// H_p(A|B) = -inf_sigma D_p(rho || 1_A (x) sigma). Throws BadExponent for
/// p <= 1 or infinite p, OptimizerFailed when no strategy converges.
RenyiOptimum conditional_renyi(const BipartiteState& w, double p, const RenyiOptimizerOptions& opts = {});
/// I_p(A:B) = inf_sigma D_p(rho || rho_A (x) sigma).
RenyiOptimum renyi_mutual_information(const BipartiteState& w, double p, const RenyiOptimizerOptions& opts = {});
/// -H_p(A|B).
double renyi_coherent_information(const BipartiteState& w, double p, const RenyiOptimizerOptions& opts = {});
/// Norm of the positive element w in S_1(B, S_p(A)), i.e. 2^(-H_p(A|B)/p').
double s1_sp_norm(const BipartiteState& w, double p, const RenyiOptimizerOptions& opts = {});

/// tau(f log f) with tau the normalized trace; throws NotNormalized unless tau(f) = 1 within 1e-10.
double tau_f_log_f(const CMatrix& f);
double tau_f_log_f(const Symbol& f);
/// p' log ||f||_{p,tau}; the Rényi analogue of tau(f log f). p = kInf gives log ||f||.
double symbol_renyi_gap(const CMatrix& f, double p);

/// Throws OutOfRange outside [0, 1].
double binary_entropy(double lambda);

/// Hoelder conjugate p/(p-1); 1 for p = kInf.
double conjugate_exponent(double p);

}  // namespace trocap
