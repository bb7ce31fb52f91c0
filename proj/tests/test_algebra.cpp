#include <algorithm>
#include <cmath>

#include "test_support.hpp"
#include "trocap/algebra.hpp"
#include "trocap/error.hpp"
#include "trocap/random.hpp"

using namespace trocap;
using trocap::test::check_close;

namespace {

const CMatrix kX{{0.0, 1.0}, {1.0, 0.0}};
const CMatrix kZ{{1.0, 0.0}, {0.0, -1.0}};

// Stinespring operators of the 4 -> 3 map that sums the first two diagonal
// entries and keeps the last two: h_1, h_2 on row 0, h_3 and h_4 below.
std::vector<CMatrix> phi0_space() {
  return {CMatrix::unit(3, 4, 0, 0), CMatrix::unit(3, 4, 0, 1), CMatrix::unit(3, 4, 1, 2),
          CMatrix::unit(3, 4, 2, 3)};
}

StinespringSpace as_space(std::vector<CMatrix> basis) {
  StinespringSpace s;
  s.dim_in = basis.size();
  s.dim_out = basis.front().rows();
  s.dim_env = basis.front().cols();
  s.basis = std::move(basis);
  return s;
}

// Swaps environment 0 <-> 2 and 1 <-> 3.
CMatrix swap_s() {
  CMatrix s(4, 4);
  s(0, 2) = s(2, 0) = s(1, 3) = s(3, 1) = 1.0;
  return s;
}

std::vector<TroBlock> sorted(std::vector<TroBlock> b) {
  std::sort(b.begin(), b.end(), [](const TroBlock& x, const TroBlock& y) {
    return std::tie(x.n, x.m, x.l) < std::tie(y.n, y.m, y.l);
  });
  return b;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::ParseError;
}

}  // namespace

TEST_CASE("star algebra closure dimensions") {
  CHECK(generate_star_algebra({kX, kZ}).size() == 4);
  CHECK(generate_star_algebra({kZ}).size() == 2);
  CHECK(generate_star_algebra({CMatrix::unit(2, 2, 0, 1)}).size() == 4);
  const auto e11 = generate_star_algebra({CMatrix::unit(2, 2, 0, 0)});
  CHECK(e11.size() == 1);
  CHECK_FALSE(e11.unital);
  const auto m2 = generate_star_algebra({tensor(kX, CMatrix::identity(2)), tensor(kZ, CMatrix::identity(2))});
  CHECK(m2.size() == 4);
  CHECK(m2.unital);
}

TEST_CASE("left and right algebras of the block space") {
  const auto x = phi0_space();
  CHECK(left_algebra(x).size() == 3);   // C + C + C
  CHECK(right_algebra(x).size() == 6);  // M_2 + C + C
}

TEST_CASE("is_tro on examples") {
  CHECK(is_tro(phi0_space()).is_tro);
  CHECK(is_tro({CMatrix::identity(2), kX, kZ, kX * kZ}).is_tro);

  const std::vector<CMatrix> upper{CMatrix::unit(2, 2, 0, 0), CMatrix::unit(2, 2, 0, 1), CMatrix::unit(2, 2, 1, 1)};
  const TroCheck c = is_tro(upper);
  CHECK_FALSE(c.is_tro);
  CHECK(c.x == 2);
  CHECK(c.y == 1);
  CHECK(c.z == 0);
  check_close(c.product, CMatrix::unit(2, 2, 1, 0), 1e-15);
}

TEST_CASE("smallest TRO contains the space and is closed") {
  Rng rng(31);
  std::vector<CMatrix> y{random_gaussian(3, 4, rng), random_gaussian(3, 4, rng)};
  const auto x = smallest_tro(y);
  CHECK(is_tro(x).is_tro);
  for (const auto& v : y) CHECK(span_residual(x, v) < 1e-10 * v.frobenius_norm());
  // A TRO is its own smallest TRO.
  CHECK(smallest_tro(phi0_space()).size() == 4);
  // The upper-triangular span closes to all of M_2.
  CHECK(smallest_tro({CMatrix::unit(2, 2, 0, 0), CMatrix::unit(2, 2, 0, 1), CMatrix::unit(2, 2, 1, 1)}).size() == 4);
}

TEST_CASE("conditional expectation properties") {
  Rng rng(32);
  const auto alg = right_algebra(phi0_space());
  const ConditionalExpectation e(alg);
  const CMatrix x = random_gaussian(4, 4, rng);
  const CMatrix ex = e(x);
  check_close(e(ex), ex, 1e-13);
  CHECK(std::abs(ex.trace() - x.trace()) < 1e-13);
  // Bimodule property over algebra elements.
  const CMatrix a = alg.basis[0] + alg.basis[3] * cplx(0.0, 2.0);
  check_close(e(a * x), a * ex, 1e-12);
  // Block pinching: M_2 + C + C keeps the top-left 2x2 and the last two diagonal entries.
  CMatrix expect(4, 4);
  expect.set_block(0, 0, x.block(0, 0, 2, 2));
  expect(2, 2) = x(2, 2);
  expect(3, 3) = x(3, 3);
  check_close(ex, expect, 1e-13);
  CHECK_THROWS_AS(e(CMatrix::identity(3)), Error);
}

TEST_CASE("conditional expectation onto a nonunital algebra adjoins the identity") {
  const auto alg = generate_star_algebra({CMatrix::unit(2, 2, 0, 0)});
  const CMatrix x{{1.0, 5.0}, {5.0, 3.0}};
  check_close(conditional_expectation(alg, x), CMatrix::diag({1.0, 3.0}), 1e-13);
}

TEST_CASE("independence and strong independence") {
  const auto r = right_algebra(phi0_space());
  CHECK(is_independent(swap_s(), r));
  CHECK_FALSE(is_independent(CMatrix::diag({1.0, 0.0, 0.0, 0.0}), r));
  for (double a : {-1.0, -0.4, 0.0, 0.5, 1.0}) {
    const CMatrix f = CMatrix::identity(4) + swap_s() * a;
    CHECK(is_strongly_independent(f, r));
  }
  // Lies in the algebra itself, so E(f) = f is not scalar.
  CHECK_FALSE(is_strongly_independent(CMatrix::diag({1.0, 1.0, 3.0, 3.0}), r));
  // A matrix independent as a whole whose spectral projections are not.
  const CMatrix y = CMatrix::diag({1.0, -1.0, 0.0, 0.0}) + swap_s();
  const auto chk = check_strong_independence(y, generate_star_algebra({CMatrix::diag({1.0, 1.0, 0.0, 0.0})}));
  CHECK(chk.projections >= 2);
}

TEST_CASE("validate_symbol on the block space") {
  const auto space = as_space(phi0_space());
  const Symbol s = validate_symbol(space, CMatrix::identity(4) + swap_s() * 0.5);
  CHECK(s.certificate.valid);
  CHECK(s.certificate.space_is_tro);
  CHECK(s.certificate.tro_dim == 4);
  CHECK(s.certificate.right_algebra_dim == 6);
  CHECK(s.certificate.spectral_projections == 2);
  CHECK(sorted(s.certificate.tro_blocks) == sorted({{1, 2, 1}, {1, 1, 1}, {1, 1, 1}}));

  CHECK(kind_of([&] { validate_symbol(space, CMatrix::diag({2.0, 2.0, 0.0, 0.0})); }) ==
        ErrorKind::NotIndependent);
  CHECK(kind_of([&] { validate_symbol(space, CMatrix::identity(4) * 2.0); }) == ErrorKind::NotNormalized);
  CHECK(kind_of([&] { validate_symbol(space, CMatrix::identity(4) + swap_s() * 1.5); }) == ErrorKind::NotPSD);
  CHECK(kind_of([&] { validate_symbol(space, CMatrix::identity(3)); }) == ErrorKind::DimMismatch);
  CMatrix nh = CMatrix::identity(4);
  nh(0, 1) = 0.3;
  CHECK(kind_of([&] { validate_symbol(space, nh); }) == ErrorKind::NotHermitian);
}

TEST_CASE("wedderburn blocks") {
  Rng rng(33);
  const auto m2l2 = generate_star_algebra({tensor(kX, CMatrix::identity(2)), tensor(kZ, CMatrix::identity(2))});
  const auto blocks = wedderburn_blocks(m2l2, rng);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].n == 2);
  CHECK(blocks[0].l == 2);
  // In the unit basis every element reads z (x) 1_l.
  const CMatrix u = blocks[0].units;
  check_close(u.adjoint() * u, CMatrix::identity(4), 1e-10);
  const CMatrix y = u.adjoint() * tensor(kX, CMatrix::identity(2)) * u;
  const CMatrix z{{y(0, 0), y(0, 2)}, {y(2, 0), y(2, 2)}};
  check_close(y, tensor(z, CMatrix::identity(2)), 1e-9);

  const auto diag3 = generate_star_algebra({CMatrix::diag({1.0, 2.0, 3.0})});
  const auto b3 = wedderburn_blocks(diag3, rng);
  CHECK(b3.size() == 3);
  for (const auto& b : b3) CHECK(b.n * b.l == 1);
}

TEST_CASE("TRO block decomposition of the block space, in a disguised basis") {
  Rng rng(34);
  const CMatrix u = random_unitary(3, rng);
  const CMatrix w = random_unitary(4, rng);
  std::vector<CMatrix> disguised;
  for (const auto& h : phi0_space()) disguised.push_back(u * h * w);
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Rng r(seed);
    const TroDecomposition dec = tro_block_decomposition(disguised, r);
    CHECK(sorted(dec.blocks) == sorted({{1, 2, 1}, {1, 1, 1}, {1, 1, 1}}));
    CHECK(dec.dim == 4);
    CHECK(block_form_residual(dec, disguised) < 1e-8);
    check_close(dec.basis_change_out.adjoint() * dec.basis_change_out, CMatrix::identity(3), 1e-10);
    check_close(dec.basis_change_env.adjoint() * dec.basis_change_env, CMatrix::identity(4), 1e-10);
  }
}

TEST_CASE("TRO block decomposition with multiplicity") {
  // X = M_{2,3} (x) 1_2 inside 4 x 6 matrices.
  std::vector<CMatrix> x;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) x.push_back(tensor(CMatrix::unit(2, 3, i, j), CMatrix::identity(2)));
  Rng rng(35);
  const TroDecomposition dec = tro_block_decomposition(x, rng);
  REQUIRE(dec.blocks.size() == 1);
  CHECK(dec.blocks[0] == TroBlock{2, 3, 2});
  CHECK(block_form_residual(dec, x) < 1e-8);
  std::size_t nm = 0;
  for (const auto& b : dec.blocks) nm += b.n * b.m;
  CHECK(nm == dec.dim);
}

TEST_CASE("TRO decomposition refuses non-TROs") {
  Rng rng(36);
  const std::vector<CMatrix> upper{CMatrix::unit(2, 2, 0, 0), CMatrix::unit(2, 2, 0, 1), CMatrix::unit(2, 2, 1, 1)};
  CHECK(kind_of([&] { tro_block_decomposition(upper, rng); }) == ErrorKind::NotTro);
}

TEST_CASE("random TRO property: decomposition invariants") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(100 + seed);
    std::vector<CMatrix> y{random_gaussian(3, 3, rng)};
    if (seed % 2) y.push_back(random_gaussian(3, 3, rng));
    const auto x = smallest_tro(y);
    const auto dec = tro_block_decomposition(x, rng);
    CHECK(block_form_residual(dec, x) < 1e-8);
    std::size_t nm = 0;
    for (const auto& b : dec.blocks) nm += b.n * b.m;
    CHECK(nm == x.size());
  }
}

TEST_CASE("commutant") {
  CHECK(commutant({kX, kZ}).size() == 1);
  CHECK(commutant({CMatrix::identity(3)}).size() == 9);
  CHECK(commutant({kZ}).size() == 2);
  const auto c = commutant({tensor(kX, CMatrix::identity(2)), tensor(kZ, CMatrix::identity(2))});
  CHECK(c.size() == 4);
  for (const auto& b : c.basis) {
    const CMatrix g = tensor(kX, CMatrix::identity(2));
    CHECK(max_abs_diff(b * g, g * b) < 1e-10);
  }
}
