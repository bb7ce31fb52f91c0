#pragma once

// Randomized checks of the comparison inequalities between a base channel N
// and its modification N_f. Every check is an inequality a <= b recorded as
// the slack b - a; a check fails when its slack is below -tolerance.

#include <cstdint>
#include <string>
#include <vector>

#include "trocap/channel.hpp"
#include "trocap/matcore.hpp"

namespace trocap {

struct VerificationFailure {
  std::uint64_t digest = 0;  // fnv1a of the sampled input
  std::string check;
  double slack = 0.0;
};

struct VerificationReport {
  std::string theorem;
  std::size_t samples = 0;
  std::size_t checks = 0;
  double worst_slack = kInf;
  double max_slack = -kInf;  // saturation diagnostic: 0 when every inequality is tight
  std::vector<VerificationFailure> failures;
  std::uint64_t seed = 0;
  double tolerance = 0.0;

  bool passed() const noexcept { return failures.empty(); }
  void record(std::uint64_t digest, const std::string& check, double slack);
  /// Appends other's checks after this one's; associative.
  void merge(const VerificationReport& other);
};

struct VerifyOptions {
  std::size_t samples = 100;
  std::uint64_t seed = 0x5a17;
  unsigned threads = 0;
};

/// Norm sandwiches ||N(rho)||_p <= ||N_f(rho)||_p <= ||f||_{p,tau} ||N(rho)||_p,
/// plain and weighted by sigma^(-1/2p'), at p in {1.3, 2, 4, inf}. rho is a
/// random full-rank density; sigma is the conditional expectation of one onto
/// the left algebra. Slacks are log2 differences, tolerance 1e-9. Throws
/// InvalidSymbol unless f is certified for the space.
VerificationReport verify_local_comparison(const StinespringSpace& space, const Symbol& f,
                                           const VerifyOptions& opts = {});

/// Entropy, coherent and mutual information sandwiches with gap tau(f log f),
/// and the Rényi coherent and mutual information with gap p' log ||f||_{p,tau}
/// at p in {1.5, 2}, on (id_A (x) N)(rho) for random rho with |A| = |A'|.
/// Tolerance 1e-7.
VerificationReport verify_entropic(const StinespringSpace& space, const Symbol& f, const VerifyOptions& opts = {});

/// f (x) g is a symbol of the tensor channel, (N (x) M)_{f (x) g} = N_f (x) M_g
/// on Choi matrices and on random inputs, and tau(f log f) is additive.
/// Tolerance 1e-9.
VerificationReport verify_tensor_symbol(const StinespringSpace& space_a, const Symbol& f_a,
                                        const StinespringSpace& space_b, const Symbol& f_b,
                                        const VerifyOptions& opts = {});

/// Stable JSON rendering: fixed key order, shortest round-trip doubles.
std::string report_json(const VerificationReport& report);

}  // namespace trocap
