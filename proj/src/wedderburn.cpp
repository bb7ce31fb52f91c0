// Numerical Wedderburn decomposition of finite-dimensional *-algebras and the
// resulting block form of TROs.
//
// A random Hermitian central element separates the simple summands; inside a
// summand a random Hermitian element has n eigenvalues of multiplicity l, and
// its eigenspaces are minimal projections from which matrix units follow.
// Degenerate draws are detected (cluster counts) and redrawn.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "trocap/algebra.hpp"
#include "trocap/error.hpp"

namespace trocap {

namespace {

constexpr int kMaxDraws = 20;
constexpr double kClusterGap = 1e-6;

struct Cluster {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

std::vector<Cluster> cluster_eigenvalues(const std::vector<double>& ev) {
  std::vector<Cluster> out;
  if (ev.empty()) return out;
  double scale = 0.0;
  for (double v : ev) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= ev.size(); ++i)
    if (i == ev.size() || ev[i] - ev[i - 1] > kClusterGap * scale) {
      out.push_back({start, i});
      start = i;
    }
  return out;
}

CMatrix columns(const CMatrix& m, std::size_t begin, std::size_t end) { return m.block(0, begin, m.rows(), end - begin); }

CMatrix random_hermitian_in(const std::vector<CMatrix>& basis, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix h(basis.front().rows(), basis.front().cols());
  for (const auto& b : basis) {
    const CMatrix herm = b + b.adjoint();
    const CMatrix anti = (b - b.adjoint()) * cplx(0.0, 1.0);
    h.add_scaled(normal(rng), herm);
    h.add_scaled(normal(rng), anti);
  }
  return h;
}

CMatrix random_element_in(const std::vector<CMatrix>& basis, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix a(basis.front().rows(), basis.front().cols());
  for (const auto& b : basis) {
    const double re = normal(rng);
    const double im = normal(rng);
    a.add_scaled(cplx(re, im), b);
  }
  return a;
}

std::size_t first_support_index(const CMatrix& projection) {
  for (std::size_t i = 0; i < projection.rows(); ++i)
    if (projection(i, i).real() > 1e-8) return i;
  return projection.rows();
}

/// Center of an algebra given by an orthonormal basis of r x r matrices.
/// Two generic elements and their adjoints generate the algebra, so
/// commuting with a few random elements is enough.
std::vector<CMatrix> center_of(const std::vector<CMatrix>& basis, Rng& rng) {
  const std::size_t r = basis.front().rows();
  const std::size_t n = basis.size();
  std::vector<CMatrix> probes;
  double probe_scale = 0.0;
  for (int i = 0; i < 3; ++i) {
    CMatrix a = random_element_in(basis, rng);
    probe_scale = std::max(probe_scale, a.frobenius_norm());
    probes.push_back(a.adjoint());
    probes.push_back(std::move(a));
  }
  CMatrix system(probes.size() * r * r, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < probes.size(); ++j) {
      const CMatrix c = basis[k] * probes[j] - probes[j] * basis[k];
      for (std::size_t idx = 0; idx < r * r; ++idx) system(j * r * r + idx, k) = c.data()[idx];
    }
  // Commutative algebras give a system of pure round-off.
  const CMatrix null = null_space(system, kRankTolerance, kRankTolerance * probe_scale);
  std::vector<CMatrix> center;
  for (std::size_t t = 0; t < null.cols(); ++t) {
    CMatrix z(r, r);
    for (std::size_t k = 0; k < n; ++k) z.add_scaled(null(k, t), basis[k]);
    center.push_back(std::move(z));
  }
  return center;
}

/// Splits one simple summand, given in its own r-dim coordinates, into
/// n*l unit columns (ordered a*l + j). Returns an empty matrix on a degenerate draw.
CMatrix matrix_units(const std::vector<CMatrix>& block_basis, std::size_t n, std::size_t l, Rng& rng) {
  const std::size_t r = n * l;
  if (n == 1) return CMatrix::identity(r);
  const HermEig eig = herm_eig_unchecked(random_hermitian_in(block_basis, rng));
  const auto clusters = cluster_eigenvalues(eig.eigenvalues);
  if (clusters.size() != n) return {};
  for (const auto& c : clusters)
    if (c.size() != l) return {};
  const CMatrix f1 = columns(eig.eigenvectors, clusters[0].begin, clusters[0].end);
  const CMatrix p1 = f1 * f1.adjoint();
  const CMatrix a = random_element_in(block_basis, rng);
  const double scale = a.frobenius_norm();
  CMatrix units(r, r);
  units.set_block(0, 0, f1);
  for (std::size_t k = 1; k < n; ++k) {
    const CMatrix fk = columns(eig.eigenvectors, clusters[k].begin, clusters[k].end);
    const CMatrix t = p1 * a * (fk * fk.adjoint());
    const double c = std::sqrt(std::max(0.0, (t * t.adjoint()).trace().real() / double(l)));
    if (c < 1e-6 * scale) return {};
    const CMatrix e_dag = t.adjoint() * cplx(1.0 / c, 0.0);
    units.set_block(0, k * l, e_dag * f1);
  }
  return units;
}

}  // namespace

std::vector<AlgebraBlock> wedderburn_blocks(const AlgebraBasis& algebra, Rng& rng) {
  std::vector<AlgebraBlock> out;
  if (algebra.basis.empty()) return out;
  const std::size_t d = algebra.dim;

  CMatrix support(d, d);
  for (const auto& b : algebra.basis) support += b * b.adjoint();
  const CMatrix q = range_basis(hermitian_part(support), kRankTolerance);
  const CMatrix qa = q.adjoint();
  std::vector<CMatrix> compressed;
  for (const auto& b : algebra.basis) compressed.push_back(qa * b * q);
  compressed = orthonormal_span(compressed);
  const auto center = center_of(compressed, rng);
  if (center.empty()) throw Error(ErrorKind::RankDeficient, "wedderburn: algebra has trivial center");

  for (int draw = 0; draw < kMaxDraws; ++draw) {
    out.clear();
    const HermEig eig = herm_eig_unchecked(random_hermitian_in(center, rng));
    const auto clusters = cluster_eigenvalues(eig.eigenvalues);
    if (clusters.size() != center.size()) continue;
    bool ok = true;
    for (const auto& cl : clusters) {
      const CMatrix f = columns(eig.eigenvectors, cl.begin, cl.end);
      const CMatrix fa = f.adjoint();
      std::vector<CMatrix> local;
      for (const auto& c : compressed) local.push_back(fa * c * f);
      local = orthonormal_span(local);
      const std::size_t dim = local.size();
      const auto n = static_cast<std::size_t>(std::llround(std::sqrt(double(dim))));
      if (n == 0 || n * n != dim || cl.size() % n != 0) {
        ok = false;
        break;
      }
      const std::size_t l = cl.size() / n;
      CMatrix units;
      for (int inner = 0; inner < kMaxDraws && units.empty(); ++inner) units = matrix_units(local, n, l, rng);
      if (units.empty()) {
        ok = false;
        break;
      }
      const CMatrix qf = q * f;
      AlgebraBlock block;
      block.n = n;
      block.l = l;
      block.central_projection = qf * qf.adjoint();
      block.units = qf * units;
      out.push_back(std::move(block));
    }
    if (!ok) continue;
    std::stable_sort(out.begin(), out.end(), [](const AlgebraBlock& a, const AlgebraBlock& b) {
      return first_support_index(a.central_projection) < first_support_index(b.central_projection);
    });
    return out;
  }
  throw Error(ErrorKind::RankDeficient, "wedderburn: no non-degenerate random draw after " +
                                            std::to_string(kMaxDraws) + " attempts");
}

namespace {

CMatrix orthonormal_completion(const CMatrix& cols, std::size_t dim) {
  CMatrix full(dim, dim);
  full.set_block(0, 0, cols);
  if (cols.cols() < dim) {
    const CMatrix rest = null_space(cols.adjoint(), kRankTolerance);
    full.set_block(0, cols.cols(), rest);
  }
  return full;
}

}  // namespace

double block_form_residual(const TroDecomposition& dec, const std::vector<CMatrix>& space) {
  const CMatrix ua = dec.basis_change_out.adjoint();
  double worst = 0.0;
  for (const auto& x : space) {
    const CMatrix m = ua * x * dec.basis_change_env;
    CMatrix expected(m.rows(), m.cols());
    std::size_t ro = 0, co = 0;
    for (const auto& blk : dec.blocks) {
      for (std::size_t a = 0; a < blk.n; ++a)
        for (std::size_t b = 0; b < blk.m; ++b) {
          const cplx z = m(ro + a * blk.l, co + b * blk.l);
          for (std::size_t j = 0; j < blk.l; ++j) expected(ro + a * blk.l + j, co + b * blk.l + j) = z;
        }
      ro += blk.n * blk.l;
      co += blk.m * blk.l;
    }
    const double scale = std::max(x.max_abs(), 1e-300);
    worst = std::max(worst, max_abs_diff(m, expected) / scale);
  }
  return worst;
}

TroDecomposition tro_block_decomposition(const std::vector<CMatrix>& space, Rng& rng) {
  if (space.empty()) throw Error(ErrorKind::NotTro, "empty space");
  const TroCheck check = is_tro(space);
  if (!check.is_tro)
    throw Error(ErrorKind::NotTro, "triple (" + std::to_string(check.x) + ", " + std::to_string(check.y) + ", " +
                                       std::to_string(check.z) + ") leaves the span, residual " +
                                       std::to_string(check.residual));
  const std::size_t db = space.front().rows();
  const std::size_t de = space.front().cols();
  const auto x_basis = orthonormal_span(space);

  for (int attempt = 0; attempt < 5; ++attempt) {
    const auto left_blocks = wedderburn_blocks(left_algebra(x_basis), rng);
    TroDecomposition dec;
    dec.dim = x_basis.size();
    CMatrix u_cols(db, 0), w_cols(de, 0);
    std::vector<CMatrix> u_parts, w_parts;
    bool ok = true;
    for (const auto& lb : left_blocks) {
      std::vector<CMatrix> xi;
      for (const auto& x : x_basis) xi.push_back(lb.central_projection * x);
      xi = orthonormal_span(xi);
      const auto right_blocks = wedderburn_blocks(right_algebra(xi), rng);
      if (right_blocks.size() != 1 || right_blocks.front().l != lb.l) {
        ok = false;
        break;
      }
      const auto& rb = right_blocks.front();
      const std::size_t l = lb.l;
      const CMatrix u1 = lb.units.block(0, 0, db, l);
      const CMatrix w1p = rb.units.block(0, 0, de, l);
      const CMatrix p1 = u1 * u1.adjoint();
      const CMatrix q1 = w1p * w1p.adjoint();
      CMatrix w1;
      for (int draw = 0; draw < kMaxDraws && w1.empty(); ++draw) {
        const CMatrix x = random_element_in(xi, rng);
        const CMatrix t = p1 * x * q1;
        const double c = std::sqrt(std::max(0.0, (t * t.adjoint()).trace().real() / double(l)));
        if (c < 1e-6 * x.frobenius_norm()) continue;
        w1 = t.adjoint() * u1 * cplx(1.0 / c, 0.0);
      }
      if (w1.empty()) {
        ok = false;
        break;
      }
      // Carry the aligned multiplicity frame to the other matrix units:
      // w_{k,j} = sum_j' w'_{k,j'} <w'_{1,j'}, w_{1,j}>.
      const CMatrix overlap = w1p.adjoint() * w1;
      CMatrix w(de, rb.n * l);
      for (std::size_t k = 0; k < rb.n; ++k) w.set_block(0, k * l, rb.units.block(0, k * l, de, l) * overlap);
      u_parts.push_back(lb.units);
      w_parts.push_back(std::move(w));
      dec.blocks.push_back({lb.n, rb.n, l});
    }
    if (!ok) continue;
    std::size_t ucount = 0, wcount = 0;
    for (const auto& p : u_parts) ucount += p.cols();
    for (const auto& p : w_parts) wcount += p.cols();
    u_cols = CMatrix(db, ucount);
    w_cols = CMatrix(de, wcount);
    std::size_t uo = 0, wo = 0;
    for (std::size_t i = 0; i < u_parts.size(); ++i) {
      u_cols.set_block(0, uo, u_parts[i]);
      w_cols.set_block(0, wo, w_parts[i]);
      uo += u_parts[i].cols();
      wo += w_parts[i].cols();
    }
    dec.basis_change_out = orthonormal_completion(u_cols, db);
    dec.basis_change_env = orthonormal_completion(w_cols, de);
    dec.residual = block_form_residual(dec, space);
    std::size_t dim_check = 0;
    for (const auto& b : dec.blocks) dim_check += b.n * b.m;
    if (dec.residual <= 1e-8 && dim_check == dec.dim) return dec;
  }
  throw Error(ErrorKind::NotTro, "block decomposition did not reproduce the space within 1e-8");
}

TroDecomposition tro_block_decomposition(const StinespringSpace& space, std::uint64_t seed) {
  Rng rng(seed);
  return tro_block_decomposition(space.basis, rng);
}

}  // namespace trocap
