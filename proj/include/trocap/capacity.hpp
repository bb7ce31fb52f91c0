#pragma once

// Capacity values and windows in bits: exact formulas for direct sums of
// partial traces, comparison windows for modified channels, multi-start
// optimizers for one-shot quantities, and the TRO capacity-region families.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trocap/channel.hpp"
#include "trocap/matcore.hpp"

namespace trocap {

namespace quantity {
inline constexpr const char* C = "C";
inline constexpr const char* Q = "Q";
inline constexpr const char* P = "P";
inline constexpr const char* C_EA = "C_EA";
inline constexpr const char* C_dagger = "C_dagger";
inline constexpr const char* Q_dagger = "Q_dagger";
inline constexpr const char* P_dagger = "P_dagger";
inline constexpr const char* Q1 = "Q1";
inline constexpr const char* neg_S_cb = "neg_S_cb";
}  // namespace quantity

struct Bound {
  double lower = 0.0;
  double upper = kInf;
  std::string provenance;
};

/// Named windows. Entries are only ever tightened: merging keeps the larger
/// lower and the smaller upper bound and records both provenances.
class BoundReport {
 public:
  /// Replaces an entry.
  void set(const std::string& name, double lower, double upper, std::string provenance);
  /// Intersects an entry with [lower, upper]; creates it when absent.
  void tighten(const std::string& name, double lower, double upper, const std::string& provenance);
  void merge(const BoundReport& other);
  /// Raises lower bounds along Q <= P, Q <= Q_dagger, P <= P_dagger, C <= C_dagger, Q1 <= Q.
  void propagate_orderings();

  bool has(const std::string& name) const { return entries_.count(name) != 0; }
  const Bound& at(const std::string& name) const;
  const std::map<std::string, Bound>& entries() const noexcept { return entries_; }
  /// lower <= upper + tol for every entry.
  bool consistent(double tol = 1e-9) const;

  std::vector<std::string> notes;

 private:
  std::map<std::string, Bound> entries_;
};

/// Exact values for (+)_i id_{n_i} (x) tr_{m_i}: Q = P = Q1 = log max n,
/// C = log sum n, C_EA = log sum n^2, with the strong converse rates equal to
/// the capacities. Only n_i enters. Throws EmptyBlocks, OutOfRange for n = 0.
BoundReport tro_capacities(const std::vector<TroBlock>& blocks);

/// Windows [base, base + tau(f log f)] for C, Q, P, C_EA, their strong
/// converse rates and Q1. The base values are those of the smallest TRO
/// containing the space; when the space is itself a TRO they are also the
/// lower bounds, otherwise lower bounds fall back to 0. Throws InvalidSymbol
/// unless the certificate belongs to this space.
BoundReport comparison_bounds(const StinespringSpace& space, const Symbol& f);

struct OptimizerOptions {
  int restarts = 8;
  std::uint64_t seed = 0x0ce1;
  /// Extra starting densities on the input, tried besides the random ones.
  std::vector<CMatrix> initial_states;
  /// Worker cap; 0 uses the hardware concurrency.
  unsigned threads = 0;
  int max_iterations = 3000;
};

struct OptimizerResult {
  double value = 0.0;
  CMatrix rho;  // best input density found
  int start = 0;  // index of the winning start (pool first, then random restarts)
};

/// max_rho H(N(rho)) - H(N^E(rho)) by gradient ascent over rho = G G^dagger / tr
/// from |0><0|, 1/d, the pool and `restarts` random starts. A lower bound on Q1.
OptimizerResult one_shot_q(const Channel& ch, const OptimizerOptions& opts = {});

/// log(|A'|/|E|) + tau(f log f), valid when N^E(1) = (|A'|/|E|) 1 for the base
/// channel of the space (checked within 1e-9, else HypothesisFailed).
double negative_cb_entropy_formula(const StinespringSpace& space, const Symbol& f);
/// sup over pure inputs of H(A) - H(AB), i.e. max_rho H(rho) - H(N^E(rho));
/// a lower bound from the same multi-start ascent.
OptimizerResult negative_cb_entropy_numeric(const Channel& ch, const OptimizerOptions& opts = {});

/// m^(-1/p') 2^(q1p/p'). Throws BadExponent for p <= 1, OutOfRange for m < 1.
double fidelity_bound(double m, double q1p, double p);

/// max over inputs of -H_p(A|B) for omega = (id (x) N)(psi), psi purifying rho.
/// Derivative-free search seeded with the one-shot coherent-information
/// maximizer; a lower bound on the Rényi one-shot quantity. Throws
/// BadExponent unless 1 < p < kInf.
OptimizerResult renyi_coherent_channel(const Channel& ch, double p, const OptimizerOptions& opts = {});

struct RegionConstraint {
  std::string name;
  double rhs = 0.0;
};

struct RegionPoint {
  double lambda = 0.0;
  double mu = 0.0;
  std::vector<double> distribution;
  std::vector<RegionConstraint> constraints;
};

/// p(i) ~ n_i^((2+lambda+mu)/(1+mu)) with the right-hand sides of C+2Q, Q+E
/// and C+Q+E. Throws EmptyBlocks, or OutOfRange for negative lambda or mu.
RegionPoint cqe_region_vertices(const std::vector<TroBlock>& blocks, double lambda, double mu);
/// q(i) ~ n_i^((1+lambda+mu)/(1+mu)) with the right-hand sides of R+P, P+S
/// and R+P+S.
RegionPoint rps_region_vertices(const std::vector<TroBlock>& blocks, double lambda, double mu);

/// Everything the bounds report of a channel needs: comparison windows when a
/// symbol is given (exact TRO values when the space is a TRO and no symbol is
/// given), the one-shot optimizer as a lower bound for Q1, Q and P, and the
/// negative cb-entropy (formula when its hypothesis holds, numeric otherwise).
BoundReport assemble_bounds(const StinespringSpace& base, const std::optional<Symbol>& f, const Channel& ch,
                            const OptimizerOptions& opts);

}  // namespace trocap
