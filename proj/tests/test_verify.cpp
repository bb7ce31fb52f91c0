#include <cmath>

#include "test_support.hpp"
#include "trocap/algebra.hpp"
#include "trocap/builders.hpp"
#include "trocap/entropy.hpp"
#include "trocap/random.hpp"
#include "trocap/verify.hpp"

using namespace trocap;
using trocap::test::error_kind_of;
using trocap::test::h2;

namespace {

VerifyOptions samples(std::size_t n, std::uint64_t seed = 11) {
  VerifyOptions o;
  o.samples = n;
  o.seed = seed;
  return o;
}

Symbol trivial_symbol(const StinespringSpace& space) { return validate_symbol(space, CMatrix::identity(space.dim_env)); }

}  // namespace

TEST_CASE("report bookkeeping") {
  VerificationReport a;
  a.tolerance = 1e-9;
  a.record(1, "x", 0.5);
  a.record(2, "y", -1e-10);
  a.record(3, "z", -1e-3);
  CHECK(a.checks == 3);
  CHECK(a.worst_slack == -1e-3);
  CHECK(a.max_slack == 0.5);
  REQUIRE(a.failures.size() == 1);
  CHECK(a.failures[0].digest == 3);
  a.record(4, "nan", std::nan(""));
  CHECK(a.failures.size() == 2);
  CHECK(std::isnan(a.worst_slack));

  VerificationReport b, c;
  b.tolerance = c.tolerance = 1e-9;
  b.record(5, "b", -1.0);
  c.record(6, "c", 2.0);
  VerificationReport left = b, right = c;
  left.merge(c);
  CHECK(left.worst_slack == -1.0);
  CHECK(left.max_slack == 2.0);
  CHECK(left.checks == 2);
}

TEST_CASE("local comparison: the trivial symbol saturates both sides") {
  for (const Channel& ch : {partial_trace_sum_channel({{1, 2}, {1, 1}, {1, 1}}), partial_trace_sum_channel({{2, 3}})}) {
    const StinespringSpace space = stinespring_space(ch);
    const VerificationReport r = verify_local_comparison(space, trivial_symbol(space), samples(20));
    CHECK(r.passed());
    CHECK(r.samples == 20);
    CHECK(r.checks == 20 * 16);
    CHECK(r.worst_slack >= -1e-10);
    CHECK(r.max_slack <= 1e-10);
  }
}

TEST_CASE("local comparison holds on the standard families") {
  for (double q : {0.0, 0.3, 0.7, 1.0}) {
    const ModifiedFamily fam = dephasing_family(q);
    const VerificationReport r = verify_local_comparison(fam.space, fam.symbol, samples(100));
    CHECK(r.passed());
    CHECK(r.worst_slack >= -1e-9);
  }
  for (double alpha : {0.0, 0.5, 1.0}) {
    const ModifiedFamily fam = phi_alpha(alpha);
    CHECK(verify_local_comparison(fam.space, fam.symbol, samples(50)).passed());
  }
  const ModifiedFamily pauli = group_random_unitary(pauli_rep(), {0.55, 0.25, 0.15, 0.05});
  CHECK(verify_local_comparison(pauli.space, pauli.symbol, samples(50)).passed());
}

TEST_CASE("verification rejects uncertified symbols and catches a forged certificate") {
  const ModifiedFamily a = dephasing_family(0.5);
  const ModifiedFamily b = phi_alpha(0.5);
  CHECK(error_kind_of([&] { verify_local_comparison(a.space, b.symbol); }) == ErrorKind::InvalidSymbol);
  CHECK(error_kind_of([&] { verify_entropic(b.space, a.symbol); }) == ErrorKind::InvalidSymbol);

  // diag(1.5, 0.5) is not independent of the diagonal algebra; with a copied
  // certificate the modified map is not even trace preserving.
  Symbol forged = a.symbol;
  forged.f = CMatrix::diag({1.5, 0.5});
  const VerificationReport r = verify_local_comparison(a.space, forged, samples(30));
  CHECK_FALSE(r.passed());
  CHECK(r.worst_slack < -1e-3);
}

TEST_CASE("reports are reproducible by seed and independent of threads") {
  const ModifiedFamily fam = phi_alpha(0.5);
  VerifyOptions o = samples(12, 99);
  o.threads = 1;
  const std::string serial = report_json(verify_local_comparison(fam.space, fam.symbol, o));
  o.threads = 4;
  const std::string parallel = report_json(verify_local_comparison(fam.space, fam.symbol, o));
  CHECK(serial == parallel);
  CHECK(serial.find("\"seed\": 99") != std::string::npos);
  o.seed = 100;
  CHECK(report_json(verify_local_comparison(fam.space, fam.symbol, o)) != serial);
}

TEST_CASE("entropic sandwiches on Phi_alpha and dephasing") {
  for (double alpha : {0.5, 1.0}) {
    const ModifiedFamily fam = phi_alpha(alpha);
    const VerificationReport r = verify_entropic(fam.space, fam.symbol, samples(10));
    CHECK(r.passed());
    CHECK(r.checks == 10 * 14);
  }
  const ModifiedFamily deph = dephasing_family(0.3);
  CHECK(verify_entropic(deph.space, deph.symbol, samples(20)).passed());
}

TEST_CASE("entropic gaps collapse for the trivial symbol") {
  const Channel ch = partial_trace_sum_channel({{2, 1}, {1, 2}});
  const StinespringSpace space = stinespring_space(ch);
  const VerificationReport r = verify_entropic(space, trivial_symbol(space), samples(6));
  CHECK(r.passed());
  CHECK(std::abs(r.worst_slack) <= 1e-8);
  CHECK(std::abs(r.max_slack) <= 1e-8);
}

TEST_CASE("maximally entangled input saturates the coherent-information gap of dephasing") {
  for (double q : {0.0, 0.4, 0.9}) {
    const ModifiedFamily fam = dephasing_family(q);
    std::vector<cplx> phi(4);
    phi[0] = phi[3] = 1.0 / std::sqrt(2.0);
    const CMatrix rho = CMatrix::outer(phi, phi);
    const BipartiteState w(hermitian_part(apply_with_ancilla(fam.base, rho, 2)), 2, 2);
    const BipartiteState wf(hermitian_part(apply_with_ancilla(fam.channel, rho, 2)), 2, 2);
    const double gap = 1.0 - h2((1.0 + q) / 2.0);
    CHECK(std::abs(coherent_information(w)) <= 1e-10);
    CHECK(coherent_information(wf) == doctest::Approx(gap).epsilon(1e-10));
    CHECK(tau_f_log_f(fam.symbol) == doctest::Approx(gap).epsilon(1e-10));
  }
}

TEST_CASE("tensor symbols") {
  const Channel id2 = partial_trace_sum_channel({{2, 1}});
  const StinespringSpace s_id = stinespring_space(id2);
  const VerificationReport trivial = verify_tensor_symbol(s_id, trivial_symbol(s_id), s_id, trivial_symbol(s_id), samples(5));
  CHECK(trivial.passed());
  CHECK(trivial.worst_slack >= -1e-12);

  const ModifiedFamily a = dephasing_family(0.3);
  const ModifiedFamily b = dephasing_family(-0.6);
  const VerificationReport both = verify_tensor_symbol(a.space, a.symbol, b.space, b.symbol, samples(10));
  CHECK(both.passed());
  CHECK(both.worst_slack >= -1e-10);

  Rng rng = make_rng(8, 0);
  std::vector<CMatrix> kraus;
  const CMatrix stacked = random_unitary(8, rng);
  for (std::size_t e = 0; e < 2; ++e) kraus.push_back(stacked.block(4 * e, 0, 4, 4));
  const Channel random_2q = Channel::from_kraus(kraus, 1e-9);
  const StinespringSpace s_r = stinespring_space(random_2q);
  const VerificationReport mixed = verify_tensor_symbol(a.space, a.symbol, s_r, trivial_symbol(s_r), samples(5));
  CHECK(mixed.passed());
}
