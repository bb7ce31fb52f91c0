#include "trocap/builders.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "trocap/error.hpp"
#include "trocap/random.hpp"

namespace trocap {

namespace {

constexpr double kCocycleTolerance = 1e-12;
constexpr double kRepTolerance = 1e-10;

std::string pair_text(std::size_t g, std::size_t h) {
  return "(" + std::to_string(g) + ", " + std::to_string(h) + ")";
}

}  // namespace

FiniteGroup::FiniteGroup(std::vector<std::vector<std::size_t>> table, std::vector<std::vector<cplx>> cocycle)
    : table_(std::move(table)) {
  const std::size_t n = table_.size();
  if (n == 0) throw Error(ErrorKind::OutOfRange, "group: empty multiplication table");
  for (const auto& row : table_) {
    if (row.size() != n) throw Error(ErrorKind::DimMismatch, "group: multiplication table is not square");
    std::vector<bool> seen(n, false);
    for (std::size_t v : row) {
      if (v >= n || seen[v]) throw Error(ErrorKind::OutOfRange, "group: table rows are not permutations");
      seen[v] = true;
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<bool> seen(n, false);
    for (std::size_t r = 0; r < n; ++r) {
      if (seen[table_[r][c]]) throw Error(ErrorKind::OutOfRange, "group: table columns are not permutations");
      seen[table_[r][c]] = true;
    }
  }
  bool found = false;
  for (std::size_t e = 0; e < n && !found; ++e) {
    bool ok = true;
    for (std::size_t g = 0; g < n && ok; ++g) ok = table_[e][g] == g && table_[g][e] == g;
    if (ok) {
      identity_ = e;
      found = true;
    }
  }
  if (!found) throw Error(ErrorKind::OutOfRange, "group: no two-sided identity");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          throw Error(ErrorKind::OutOfRange, "group: multiplication is not associative at " + pair_text(a, b) +
                                                 " with " + std::to_string(c));
  inverse_.assign(n, 0);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h)
      if (table_[g][h] == identity_) inverse_[g] = h;

  if (cocycle.empty()) cocycle.assign(n, std::vector<cplx>(n, cplx(1.0, 0.0)));
  if (cocycle.size() != n) throw Error(ErrorKind::DimMismatch, "group: cocycle is not n x n");
  for (const auto& row : cocycle)
    if (row.size() != n) throw Error(ErrorKind::DimMismatch, "group: cocycle is not n x n");
  for (std::size_t g = 0; g < n; ++g) {
    if (std::abs(cocycle[g][identity_] - 1.0) > kCocycleTolerance ||
        std::abs(cocycle[identity_][g] - 1.0) > kCocycleTolerance)
      throw Error(ErrorKind::OutOfRange, "group: cocycle is not normalized at " + std::to_string(g));
    for (std::size_t h = 0; h < n; ++h)
      if (std::abs(std::abs(cocycle[g][h]) - 1.0) > kCocycleTolerance)
        throw Error(ErrorKind::OutOfRange, "group: cocycle value off the unit circle at " + pair_text(g, h));
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const cplx lhs = cocycle[a][b] * cocycle[table_[a][b]][c];
        const cplx rhs = cocycle[a][table_[b][c]] * cocycle[b][c];
        if (std::abs(lhs - rhs) > kCocycleTolerance)
          throw Error(ErrorKind::OutOfRange, "group: cocycle identity fails at " + pair_text(a, b) + " with " +
                                                 std::to_string(c));
      }
  cocycle_ = std::move(cocycle);
}

FiniteGroup FiniteGroup::with_cocycle(std::vector<std::vector<cplx>> cocycle) const {
  return FiniteGroup(table_, std::move(cocycle));
}

FiniteGroup cyclic_group(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::OutOfRange, "cyclic_group: order 0");
  std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) t[g][h] = (g + h) % n;
  return FiniteGroup(std::move(t));
}

FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h) {
  const std::size_t a = g.order();
  const std::size_t b = h.order();
  std::vector<std::vector<std::size_t>> t(a * b, std::vector<std::size_t>(a * b));
  std::vector<std::vector<cplx>> sigma(a * b, std::vector<cplx>(a * b));
  for (std::size_t x = 0; x < a * b; ++x)
    for (std::size_t y = 0; y < a * b; ++y) {
      t[x][y] = g.mul(x / b, y / b) * b + h.mul(x % b, y % b);
      sigma[x][y] = g.cocycle(x / b, y / b) * h.cocycle(x % b, y % b);
    }
  return FiniteGroup(std::move(t), std::move(sigma));
}

FiniteGroup dihedral_group(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::OutOfRange, "dihedral_group: n = 0");
  // r^a s^x * r^b s^y = r^(a + (-1)^x b) s^(x+y).
  std::vector<std::vector<std::size_t>> t(2 * n, std::vector<std::size_t>(2 * n));
  for (std::size_t g = 0; g < 2 * n; ++g)
    for (std::size_t h = 0; h < 2 * n; ++h) {
      const std::size_t a = g % n, x = g / n, b = h % n, y = h / n;
      const std::size_t rot = x == 0 ? (a + b) % n : (a + n - b) % n;
      t[g][h] = ((x + y) % 2) * n + rot;
    }
  return FiniteGroup(std::move(t));
}

ProjectiveRep::ProjectiveRep(FiniteGroup group, std::vector<CMatrix> unitaries)
    : group_(std::move(group)), unitaries_(std::move(unitaries)) {
  const std::size_t n = group_.order();
  if (unitaries_.size() != n) throw Error(ErrorKind::DimMismatch, "projective rep: one unitary per element required");
  const std::size_t d = unitaries_.front().rows();
  const CMatrix id = CMatrix::identity(d);
  for (std::size_t g = 0; g < n; ++g) {
    const CMatrix& u = unitaries_[g];
    if (u.rows() != d || u.cols() != d) throw Error(ErrorKind::DimMismatch, "projective rep: unitaries of different shapes");
    if (max_abs_diff(u.adjoint() * u, id) > kRepTolerance)
      throw Error(ErrorKind::OutOfRange, "projective rep: u(" + std::to_string(g) + ") is not unitary");
  }
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) {
      const CMatrix lhs = unitaries_[g] * unitaries_[h];
      const CMatrix rhs = unitaries_[group_.mul(g, h)] * group_.cocycle(g, h);
      if (max_abs_diff(lhs, rhs) > kRepTolerance)
        throw Error(ErrorKind::OutOfRange, "projective rep: u(g)u(h) != sigma(g,h) u(gh) at " + pair_text(g, h));
    }
}

ProjectiveRep ProjectiveRep::from_unitaries(std::vector<CMatrix> unitaries) {
  const std::size_t n = unitaries.size();
  if (n == 0) throw Error(ErrorKind::OutOfRange, "projective rep: no unitaries");
  const std::size_t d = unitaries.front().rows();
  if (max_abs_diff(unitaries.front(), CMatrix::identity(d)) > kRepTolerance)
    throw Error(ErrorKind::OutOfRange, "projective rep: the first unitary must be the identity");
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  std::vector<std::vector<cplx>> sigma(n, std::vector<cplx>(n));
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) {
      const CMatrix prod = unitaries[g] * unitaries[h];
      bool found = false;
      for (std::size_t k = 0; k < n && !found; ++k) {
        // |tr(u_k^dagger P)| = d exactly when P is a phase times u_k.
        const cplx overlap = hs_inner(unitaries[k], prod) / static_cast<double>(d);
        if (std::abs(std::abs(overlap) - 1.0) <= kRepTolerance) {
          table[g][h] = k;
          sigma[g][h] = overlap / std::abs(overlap);
          found = true;
        }
      }
      if (!found)
        throw Error(ErrorKind::OutOfRange, "projective rep: product " + pair_text(g, h) + " is not in the list up to phase");
    }
  return ProjectiveRep(FiniteGroup(std::move(table), std::move(sigma)), std::move(unitaries));
}

ProjectiveRep pauli_rep() {
  const CMatrix i2 = CMatrix::identity(2);
  const CMatrix x{{0.0, 1.0}, {1.0, 0.0}};
  const CMatrix y{{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}};
  const CMatrix z{{1.0, 0.0}, {0.0, -1.0}};
  return ProjectiveRep::from_unitaries({i2, x, y, z});
}

ProjectiveRep regular_rep(const FiniteGroup& group) {
  const std::size_t n = group.order();
  std::vector<CMatrix> us;
  us.reserve(n);
  for (std::size_t g = 0; g < n; ++g) {
    CMatrix u(n, n);
    for (std::size_t h = 0; h < n; ++h) u(group.mul(g, h), h) = 1.0;
    us.push_back(std::move(u));
  }
  return ProjectiveRep(group.with_cocycle({}), std::move(us));
}

ProjectiveRep trivial_rep(const FiniteGroup& group, std::size_t d) {
  return ProjectiveRep(group.with_cocycle({}), std::vector<CMatrix>(group.order(), CMatrix::identity(d)));
}

Channel partial_trace_sum_channel(const std::vector<std::pair<std::size_t, std::size_t>>& blocks) {
  if (blocks.empty()) throw Error(ErrorKind::EmptyBlocks, "partial_trace_sum_channel: no blocks");
  std::size_t din = 0, dout = 0;
  for (const auto& [n, m] : blocks) {
    if (n == 0 || m == 0) throw Error(ErrorKind::OutOfRange, "partial_trace_sum_channel: block sizes must be >= 1");
    din += n * m;
    dout += n;
  }
  std::vector<CMatrix> kraus;
  std::size_t in_off = 0, out_off = 0;
  for (const auto& [n, m] : blocks) {
    // Input index within the block is a*m + k for C^n (x) C^m.
    for (std::size_t k = 0; k < m; ++k) {
      CMatrix op(dout, din);
      for (std::size_t a = 0; a < n; ++a) op(out_off + a, in_off + a * m + k) = 1.0;
      kraus.push_back(std::move(op));
    }
    in_off += n * m;
    out_off += n;
  }
  return Channel::from_kraus(std::move(kraus));
}

ModifiedFamily group_random_unitary(const ProjectiveRep& rep, const std::vector<double>& probs) {
  const std::size_t n = rep.group().order();
  if (probs.size() != n)
    throw Error(ErrorKind::BadDistribution, "group_random_unitary: " + std::to_string(probs.size()) +
                                                " probabilities for a group of order " + std::to_string(n));
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw Error(ErrorKind::BadDistribution, "group_random_unitary: negative or non-finite probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "group_random_unitary: probabilities sum to " << total;
    throw Error(ErrorKind::BadDistribution, msg.str());
  }
  ModifiedFamily fam;
  std::vector<CMatrix> kraus;
  kraus.reserve(n);
  const double w = 1.0 / std::sqrt(static_cast<double>(n));
  for (const auto& u : rep.unitaries()) kraus.push_back(u * w);
  fam.base = Channel::from_kraus(std::move(kraus));
  fam.space = stinespring_space(fam.base);
  std::vector<double> f(n);
  for (std::size_t g = 0; g < n; ++g) f[g] = probs[g] * static_cast<double>(n);
  fam.symbol = validate_symbol(fam.space, CMatrix::diag(std::span<const double>(f)));
  fam.channel = modified_channel(fam.space, fam.symbol);
  return fam;
}

std::vector<CommutantBlock> commutant_blocks(const ProjectiveRep& rep) {
  const AlgebraBasis comm = commutant(rep.unitaries());
  Rng rng(kDefaultDecompositionSeed);
  std::vector<CommutantBlock> out;
  for (const auto& b : wedderburn_blocks(comm, rng)) out.push_back({b.n, b.l});
  return out;
}

ModifiedFamily schur_multiplier_channel(const FiniteGroup& group, const std::vector<cplx>& phi) {
  const std::size_t n = group.order();
  if (phi.size() != n)
    throw Error(ErrorKind::DimMismatch, "schur_multiplier_channel: phi needs one value per group element");
  CMatrix f(n, n);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) f(g, h) = phi[group.mul(group.inverse(h), g)];
  if (std::abs(phi[group.identity()] - 1.0) > 1e-10)
    throw Error(ErrorKind::NotPositiveDefinite, "schur_multiplier_channel: phi(1) != 1");
  if (!is_hermitian(f))
    throw Error(ErrorKind::NotPositiveDefinite, "schur_multiplier_channel: kernel [phi(h^-1 g)] is not Hermitian");
  const HermEig eig = herm_eig(f);
  if (eig.eigenvalues.front() < -1e-10) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "schur_multiplier_channel: kernel has eigenvalue " << eig.eigenvalues.front();
    throw Error(ErrorKind::NotPositiveDefinite, msg.str());
  }
  ModifiedFamily fam;
  std::vector<CMatrix> kraus;
  kraus.reserve(n);
  for (std::size_t g = 0; g < n; ++g) kraus.push_back(CMatrix::unit(n, n, g, g));
  fam.base = Channel::from_kraus(std::move(kraus));
  fam.space = stinespring_space(fam.base);
  fam.symbol = validate_symbol(fam.space, f);
  fam.channel = modified_channel(fam.space, fam.symbol);
  return fam;
}

ModifiedFamily dephasing_family(double q) {
  if (!(q >= -1.0 && q <= 1.0)) throw Error(ErrorKind::OutOfRange, "dephasing: q outside [-1, 1]");
  return schur_multiplier_channel(cyclic_group(2), {cplx(1.0, 0.0), cplx(q, 0.0)});
}

CMatrix phi_alpha_swap() {
  CMatrix s(4, 4);
  s(0, 2) = s(2, 0) = s(1, 3) = s(3, 1) = 1.0;
  return s;
}

ModifiedFamily phi_alpha(double alpha) {
  if (!(std::abs(alpha) <= 1.0)) throw Error(ErrorKind::OutOfRange, "phi_alpha: |alpha| > 1");
  ModifiedFamily fam;
  fam.base = partial_trace_sum_channel({{1, 2}, {1, 1}, {1, 1}});
  fam.space = stinespring_space(fam.base);
  fam.symbol = validate_symbol(fam.space, CMatrix::identity(4) + phi_alpha_swap() * alpha);
  fam.channel = modified_channel(fam.space, fam.symbol);
  return fam;
}

CMatrix phi_alpha_block_input(const CMatrix& qubit, bool second_pair) {
  if (qubit.rows() != 2 || qubit.cols() != 2) throw Error(ErrorKind::DimMismatch, "phi_alpha_block_input: expects 2x2");
  const std::size_t idx[2] = {second_pair ? 1u : 0u, second_pair ? 3u : 2u};
  CMatrix out(4, 4);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) out(idx[r], idx[c]) = qubit(r, c);
  return out;
}

}  // namespace trocap
