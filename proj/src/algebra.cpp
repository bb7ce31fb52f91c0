#include "trocap/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <string>

#include "trocap/error.hpp"

namespace trocap {

namespace {

// Products of unit-norm elements that come out below this are round-off of an
// exact zero.
constexpr double kZeroFloor = 1e-12;

void require_uniform(const std::vector<CMatrix>& items, const char* where) {
  for (const auto& x : items)
    if (x.rows() != items.front().rows() || x.cols() != items.front().cols())
      throw Error(ErrorKind::DimMismatch, std::string(where) + ": operators of different shapes");
}

}  // namespace

bool extend_orthonormal(std::vector<CMatrix>& basis, const CMatrix& x, double rel_tol) {
  const double norm = x.frobenius_norm();
  if (norm <= kZeroFloor) return false;
  CMatrix r = x;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) r.add_scaled(-hs_inner(b, r), b);
  const double rn = r.frobenius_norm();
  if (rn <= rel_tol * norm || rn <= kZeroFloor) return false;
  r *= cplx(1.0 / rn, 0.0);
  basis.push_back(std::move(r));
  return true;
}

std::vector<CMatrix> orthonormal_span(const std::vector<CMatrix>& items, double rel_tol) {
  std::vector<CMatrix> basis;
  for (const auto& x : items) extend_orthonormal(basis, x, rel_tol);
  return basis;
}

CMatrix project_onto_span(const std::vector<CMatrix>& basis, const CMatrix& x) {
  CMatrix p(x.rows(), x.cols());
  for (const auto& b : basis) p.add_scaled(hs_inner(b, x), b);
  return p;
}

double span_residual(const std::vector<CMatrix>& basis, const CMatrix& x) {
  CMatrix r = x;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) r.add_scaled(-hs_inner(b, r), b);
  return r.frobenius_norm();
}

AlgebraBasis generate_star_algebra(const std::vector<CMatrix>& generators, double rel_tol) {
  AlgebraBasis alg;
  if (generators.empty()) return alg;
  require_uniform(generators, "generate_star_algebra");
  alg.dim = generators.front().rows();
  if (!generators.front().is_square()) throw Error(ErrorKind::DimMismatch, "generate_star_algebra: non-square generator");

  // Span of all words in a *-closed generating set: start from the
  // generators and close under right multiplication by them.
  double largest = 0.0;
  for (const auto& g : generators) largest = std::max(largest, g.frobenius_norm());
  std::vector<CMatrix> gens;
  for (const auto& g : generators) {
    // Exact zeros computed in floating point must not be normalized into noise.
    const double n = g.frobenius_norm();
    if (n <= kZeroFloor * largest) continue;
    const CMatrix unit = g * cplx(1.0 / n, 0.0);
    extend_orthonormal(gens, unit, rel_tol);
    extend_orthonormal(gens, unit.adjoint(), rel_tol);
  }
  auto& basis = alg.basis;
  basis = gens;
  std::deque<std::size_t> pending;
  for (std::size_t i = 0; i < basis.size(); ++i) pending.push_back(i);
  while (!pending.empty()) {
    const CMatrix a = basis[pending.front()];
    pending.pop_front();
    for (const auto& g : gens)
      if (extend_orthonormal(basis, a * g, rel_tol)) pending.push_back(basis.size() - 1);
  }
  alg.unital = span_residual(basis, CMatrix::identity(alg.dim)) <= 1e-9 * std::sqrt(double(alg.dim));
  return alg;
}

AlgebraBasis left_algebra(const std::vector<CMatrix>& space) {
  std::vector<CMatrix> gens;
  for (const auto& x : space)
    for (const auto& y : space) gens.push_back(x * y.adjoint());
  return generate_star_algebra(gens);
}

AlgebraBasis right_algebra(const std::vector<CMatrix>& space) {
  std::vector<CMatrix> gens;
  for (const auto& x : space)
    for (const auto& y : space) gens.push_back(x.adjoint() * y);
  return generate_star_algebra(gens);
}

AlgebraBasis left_algebra(const StinespringSpace& space) { return left_algebra(space.basis); }
AlgebraBasis right_algebra(const StinespringSpace& space) { return right_algebra(space.basis); }

TroCheck is_tro(const std::vector<CMatrix>& space, double tol) {
  TroCheck check;
  if (space.empty()) return check;
  require_uniform(space, "is_tro");
  const auto basis = orthonormal_span(space);
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t j = 0; j < space.size(); ++j) {
      const CMatrix xy = space[i] * space[j].adjoint();
      for (std::size_t k = 0; k < space.size(); ++k) {
        CMatrix p = xy * space[k];
        const double res = span_residual(basis, p);
        if (res > tol * std::max(1.0, p.frobenius_norm())) {
          check.is_tro = false;
          check.x = i;
          check.y = j;
          check.z = k;
          check.residual = res;
          check.product = std::move(p);
          return check;
        }
      }
    }
  return check;
}

std::vector<CMatrix> smallest_tro(const std::vector<CMatrix>& y) {
  if (y.empty()) return {};
  const AlgebraBasis r = right_algebra(y);
  std::vector<CMatrix> products;
  products.reserve(y.size() * (r.size() + 1));
  for (const auto& v : y) {
    products.push_back(v);
    for (const auto& b : r.basis) products.push_back(v * b);
  }
  return orthonormal_span(products);
}

ConditionalExpectation::ConditionalExpectation(const AlgebraBasis& algebra)
    : dim_(algebra.dim), basis_(algebra.basis) {
  if (!algebra.unital && dim_ > 0) extend_orthonormal(basis_, CMatrix::identity(dim_));
}

CMatrix ConditionalExpectation::operator()(const CMatrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_)
    throw Error(ErrorKind::DimMismatch, "conditional_expectation: operand is " + std::to_string(x.rows()) + "x" +
                                            std::to_string(x.cols()) + ", algebra acts on " + std::to_string(dim_));
  return project_onto_span(basis_, x);
}

CMatrix conditional_expectation(const AlgebraBasis& algebra, const CMatrix& x) {
  return ConditionalExpectation(algebra)(x);
}

namespace {

double independence_residual(const ConditionalExpectation& e, const CMatrix& x) {
  const cplx tau = x.trace() / static_cast<double>(x.rows());
  return max_abs_diff(e(x), CMatrix::identity(x.rows()) * tau);
}

}  // namespace

bool is_independent(const CMatrix& x, const AlgebraBasis& algebra) {
  const ConditionalExpectation e(algebra);
  return independence_residual(e, x) <= 1e-9 * (1.0 + x.max_abs());
}

IndependenceCheck check_strong_independence(const CMatrix& f, const AlgebraBasis& algebra) {
  IndependenceCheck out;
  if (f.rows() != algebra.dim) throw Error(ErrorKind::DimMismatch, "strong independence: dimension mismatch");
  const ConditionalExpectation e(algebra);
  const HermEig eig = herm_eig(f);
  const auto& ev = eig.eigenvalues;
  const std::size_t n = ev.size();
  double scale = 1.0;
  for (double v : ev) scale = std::max(scale, std::abs(v));
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && ev[end] - ev[end - 1] <= 1e-8 * scale) ++end;
    CMatrix p(n, n);
    for (std::size_t c = start; c < end; ++c) {
      const auto v = eig.eigenvectors.column(c);
      p += CMatrix::outer(v, v);
    }
    const double res = independence_residual(e, p);
    ++out.projections;
    if (res > out.residual) out.residual = res;
    if (res > 1e-9 && out.independent) {
      out.independent = false;
      out.failing_eigenvalue = ev[start];
    }
    start = end;
  }
  return out;
}

bool is_strongly_independent(const CMatrix& f, const AlgebraBasis& algebra) {
  return check_strong_independence(f, algebra).independent;
}

Symbol validate_symbol(const StinespringSpace& space, const CMatrix& f) {
  if (f.rows() != space.dim_env || f.cols() != space.dim_env)
    throw Error(ErrorKind::DimMismatch, "symbol must be " + std::to_string(space.dim_env) + "x" +
                                            std::to_string(space.dim_env));
  if (!is_hermitian(f)) throw Error(ErrorKind::NotHermitian, "symbol is not Hermitian");
  const HermEig eig = herm_eig(f);
  const double lmax = std::max(1.0, eig.eigenvalues.back());
  if (eig.eigenvalues.front() < -kPsdTolerance * lmax)
    throw Error(ErrorKind::NotPSD, "symbol has eigenvalue " + std::to_string(eig.eigenvalues.front()));
  const double tau = f.trace().real() / static_cast<double>(space.dim_env);
  if (std::abs(tau - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "tau(f) = " << tau << ", expected 1";
    throw Error(ErrorKind::NotNormalized, msg.str());
  }

  // R(X) of the smallest TRO X = Y R(Y) coincides with the algebra generated
  // by Y^dagger Y.
  const AlgebraBasis right = right_algebra(space.basis);
  const IndependenceCheck ind = check_strong_independence(f, right);
  if (!ind.independent) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "spectral projection for eigenvalue " << ind.failing_eigenvalue.value_or(0.0)
        << " is not independent of the right algebra (residual " << ind.residual << ")";
    throw Error(ErrorKind::NotIndependent, msg.str());
  }

  const auto tro = smallest_tro(space.basis);
  Rng rng(kDefaultDecompositionSeed);
  const TroDecomposition dec = tro_block_decomposition(tro, rng);

  Symbol sym;
  sym.f = f;
  auto& cert = sym.certificate;
  cert.valid = true;
  cert.space_digest = space.digest();
  cert.tro_blocks = dec.blocks;
  cert.tro_dim = tro.size();
  cert.right_algebra_dim = right.size();
  cert.independence_residual = ind.residual;
  cert.spectral_projections = ind.projections;
  cert.tau = tau;
  cert.space_is_tro = tro.size() == space.basis.size();
  return sym;
}

Symbol validate_symbol(const Channel& ch, const CMatrix& f) { return validate_symbol(stinespring_space(ch), f); }

AlgebraBasis commutant(const std::vector<CMatrix>& generators) {
  AlgebraBasis alg;
  if (generators.empty()) return alg;
  require_uniform(generators, "commutant");
  const std::size_t d = generators.front().rows();
  alg.dim = d;
  const CMatrix id = CMatrix::identity(d);
  // Row-major vec(A C B) = (A (x) B^T) vec(C).
  std::vector<CMatrix> pieces;
  double scale = 0.0;
  for (const auto& g : generators) {
    scale = std::max(scale, g.frobenius_norm());
    pieces.push_back(tensor(g, id) - tensor(id, g.transpose()));
    const CMatrix ga = g.adjoint();
    pieces.push_back(tensor(ga, id) - tensor(id, ga.transpose()));
  }
  CMatrix stacked(pieces.size() * d * d, d * d);
  for (std::size_t p = 0; p < pieces.size(); ++p) stacked.set_block(p * d * d, 0, pieces[p]);
  const CMatrix null = null_space(stacked, kRankTolerance, kRankTolerance * scale);
  for (std::size_t c = 0; c < null.cols(); ++c) alg.basis.push_back(reshape_vector(null.column(c), d, d));
  alg.basis = orthonormal_span(alg.basis);
  alg.unital = true;
  return alg;
}

}  // namespace trocap
