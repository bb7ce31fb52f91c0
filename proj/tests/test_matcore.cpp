#include <cmath>
#include <vector>

#include "test_support.hpp"
#include "trocap/error.hpp"
#include "trocap/matcore.hpp"
#include "trocap/random.hpp"

using namespace trocap;
using trocap::test::check_close;

namespace {

CMatrix random_psd(std::size_t n, std::size_t rank, Rng& rng) {
  const CMatrix g = random_gaussian(n, rank, rng);
  return hermitian_part(g * g.adjoint());
}

// Entry-by-entry Kronecker product, independent of tensor().
cplx kron_entry(const CMatrix& a, const CMatrix& b, std::size_t r, std::size_t c) {
  return a(r / b.rows(), c / b.cols()) * b(r % b.rows(), c % b.cols());
}

}  // namespace

TEST_CASE("herm_eig on a diagonal matrix") {
  const auto eig = herm_eig(CMatrix::diag({3.0, 1.0, 2.0}));
  REQUIRE(eig.eigenvalues.size() == 3);
  CHECK(eig.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(eig.eigenvalues[1] == doctest::Approx(2.0));
  CHECK(eig.eigenvalues[2] == doctest::Approx(3.0));
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
  const CMatrix a{{1.0, 1.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(herm_eig(a), Error);
  try {
    herm_eig(a);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotHermitian);
  }
}

TEST_CASE("herm_eig reconstructs and is unitary") {
  Rng rng(11);
  for (std::size_t n : {1u, 2u, 5u, 9u}) {
    const CMatrix h = random_hermitian(n, rng);
    const auto eig = herm_eig(h);
    check_close(spectral_apply(eig, [](double x) { return x; }), h, 1e-10);
    check_close(eig.eigenvectors.adjoint() * eig.eigenvectors, CMatrix::identity(n), 1e-12);
    for (std::size_t i = 1; i < n; ++i) CHECK(eig.eigenvalues[i - 1] <= eig.eigenvalues[i]);
  }
}

TEST_CASE("matrix_func on the support") {
  const CMatrix a = CMatrix::diag({4.0, 0.0});
  check_close(matrix_func(a, MatrixFunction::power(0.5)), CMatrix::diag({2.0, 0.0}), 1e-14);
  check_close(matrix_func(a, MatrixFunction::log2()), CMatrix::diag({2.0, 0.0}), 1e-14);
  check_close(matrix_func(a, MatrixFunction::pinv_power(-1.0)), CMatrix::diag({0.25, 0.0}), 1e-14);
  check_close(support_projection(a), CMatrix::diag({1.0, 0.0}), 1e-14);
}

TEST_CASE("matrix_func rejects negative spectrum") {
  try {
    matrix_func(CMatrix::diag({1.0, -0.1}), MatrixFunction::power(0.5));
    FAIL("expected NotPSD");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotPSD);
  }
  // Round-off below the tolerance is clipped, not rejected.
  CHECK_NOTHROW(matrix_func(CMatrix::diag({1.0, -1e-13}), MatrixFunction::power(0.5)));
}

TEST_CASE("matrix_func power identities on rank-deficient PSD") {
  Rng rng(3);
  for (double alpha : {0.3, 0.5, 2.0, 1.7}) {
    const CMatrix a = random_psd(6, 3, rng);
    const CMatrix aa = matrix_func(a, MatrixFunction::power(alpha));
    check_close(matrix_func(aa, MatrixFunction::power(1.0 / alpha)), a, 1e-8);
    const CMatrix prod = aa * matrix_func(a, MatrixFunction::pinv_power(-alpha));
    check_close(prod, support_projection(a), 1e-8);
  }
}

TEST_CASE("log2 of a commuting product adds") {
  Rng rng(5);
  const CMatrix u = random_unitary(4, rng);
  const CMatrix a = u * CMatrix::diag({0.5, 1.0, 2.0, 3.0}) * u.adjoint();
  const CMatrix b = u * CMatrix::diag({4.0, 0.25, 1.5, 1.0}) * u.adjoint();
  const CMatrix lhs = matrix_func(hermitian_part(a * b), MatrixFunction::log2());
  const CMatrix rhs = matrix_func(a, MatrixFunction::log2()) + matrix_func(b, MatrixFunction::log2());
  check_close(lhs, rhs, 1e-10);
}

TEST_CASE("schatten norms") {
  const CMatrix a = CMatrix::diag({3.0, -4.0});
  CHECK(schatten_norm(a, 1.0) == doctest::Approx(7.0));
  CHECK(schatten_norm(a, 2.0) == doctest::Approx(5.0));
  CHECK(schatten_norm(a, kInf) == doctest::Approx(4.0));
  CHECK(schatten_norm_hermitian(a, 2.0) == doctest::Approx(5.0));
  CHECK(normalized_p_norm(CMatrix::identity(3), 2.5) == doctest::Approx(1.0));
  CHECK_THROWS_AS(schatten_norm(a, 0.5), Error);
  CHECK_THROWS_AS(schatten_norm(a, std::nan("")), Error);

  // Frobenius oracle and Hoelder-type monotonicity in p.
  Rng rng(9);
  const CMatrix g = random_gaussian(4, 6, rng);
  CHECK(schatten_norm(g, 2.0) == doctest::Approx(g.frobenius_norm()).epsilon(1e-12));
  double prev = kInf;
  for (double p : {1.0, 1.5, 2.0, 3.0, 10.0}) {
    const double v = schatten_norm(g, p);
    CHECK(v <= prev * (1 + 1e-12));
    prev = v;
  }
  CHECK(schatten_norm(g, kInf) <= prev * (1 + 1e-12));

  // Hermitian route and singular-value route agree.
  const CMatrix h = random_hermitian(5, rng);
  for (double p : {1.0, 1.3, 2.0, 4.0})
    CHECK(schatten_norm_hermitian(h, p) == doctest::Approx(schatten_norm(h, p)).epsilon(1e-10));
}

TEST_CASE("tensor matches the entrywise Kronecker formula") {
  Rng rng(2);
  const CMatrix a = random_gaussian(2, 3, rng);
  const CMatrix b = random_gaussian(3, 2, rng);
  const CMatrix t = tensor(a, b);
  REQUIRE(t.rows() == 6);
  REQUIRE(t.cols() == 6);
  double worst = 0.0;
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 6; ++c) worst = std::max(worst, std::abs(t(r, c) - kron_entry(a, b, r, c)));
  CHECK(worst < 1e-15);
}

TEST_CASE("partial trace examples and invariants") {
  const CMatrix e00 = CMatrix::unit(2, 2, 0, 0);
  const CMatrix e11 = CMatrix::unit(2, 2, 1, 1);
  const CMatrix rho = tensor(e00, e11);
  check_close(partial_trace(rho, 2, 2, Keep::A), e00, 1e-15);
  check_close(partial_trace(rho, 2, 2, Keep::B), e11, 1e-15);

  Rng rng(4);
  const CMatrix a = random_density(2, rng);
  const CMatrix b = random_density(3, rng);
  check_close(partial_trace(tensor(a, b), 2, 3, Keep::A), a, 1e-14);
  check_close(partial_trace(tensor(a, b), 2, 3, Keep::B), b, 1e-14);

  // Duality: tr(rho (X (x) 1)) = tr(tr_B(rho) X).
  const CMatrix big = random_density(6, rng);
  const CMatrix x = random_hermitian(2, rng);
  const cplx lhs = (big * tensor(x, CMatrix::identity(3))).trace();
  const cplx rhs = (partial_trace(big, 2, 3, Keep::A) * x).trace();
  CHECK(std::abs(lhs - rhs) < 1e-13);
}

TEST_CASE("permute_subsystems swaps tensor factors") {
  Rng rng(6);
  const CMatrix a = random_gaussian(2, 2, rng);
  const CMatrix b = random_gaussian(3, 3, rng);
  const CMatrix c = random_gaussian(2, 2, rng);
  const std::vector<std::size_t> dims{2, 3, 2};
  const std::vector<std::size_t> perm{2, 0, 1};
  check_close(permute_subsystems(tensor(tensor(a, b), c), dims, perm), tensor(tensor(c, a), b), 1e-14);
}

TEST_CASE("null space and range") {
  const CMatrix a{{1.0, 1.0, 0.0}, {2.0, 2.0, 0.0}};
  const CMatrix ns = null_space(a, 1e-12);
  CHECK(ns.cols() == 2);
  CHECK((a * ns).max_abs() < 1e-13);
  check_close(ns.adjoint() * ns, CMatrix::identity(2), 1e-13);
  const CMatrix rb = range_basis(a, 1e-12);
  CHECK(rb.cols() == 1);
  // The range vector is parallel to (1, 2)/sqrt(5).
  CHECK(std::abs(rb(1, 0)) == doctest::Approx(2.0 / std::sqrt(5.0)));
}

TEST_CASE("reshape and vectorize are inverse") {
  Rng rng(8);
  const CMatrix m = random_gaussian(3, 4, rng);
  const CMatrix v = vectorize(m);
  CHECK(v.rows() == 12);
  check_close(reshape_vector(v.entries(), 3, 4), m, 0.0);
  // A product vector reshapes to the outer product.
  const CMatrix x = random_pure_vector(3, rng);
  const CMatrix y = random_pure_vector(4, rng);
  check_close(reshape_vector(tensor(x, y).entries(), 3, 4), x * y.transpose(), 1e-15);
}

TEST_CASE("random helpers are reproducible") {
  Rng r1 = make_rng(42, 3);
  Rng r2 = make_rng(42, 3);
  check_close(random_unitary(4, r1), random_unitary(4, r2), 0.0);
  CHECK(derive_seed(42, 3) != derive_seed(42, 4));
  Rng rng(1);
  const CMatrix u = random_unitary(5, rng);
  check_close(u * u.adjoint(), CMatrix::identity(5), 1e-13);
  const CMatrix rho = random_density(4, rng);
  CHECK(rho.trace().real() == doctest::Approx(1.0));
  CHECK(herm_eig(rho).eigenvalues.front() > 0.0);
}
