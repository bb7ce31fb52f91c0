#include "trocap/matcore.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "trocap/error.hpp"
#include "trocap/kernels.hpp"

namespace trocap {

namespace {

using EigenRowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EigenMap = Eigen::Map<const EigenRowMat>;

EigenMap as_eigen(const CMatrix& a) {
  return EigenMap(a.data(), static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
}

CMatrix from_eigen(const Eigen::MatrixXcd& m) {
  CMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* where) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::DimMismatch, std::string(where) + ": " + std::to_string(a.rows()) + "x" +
                                            std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                            "x" + std::to_string(b.cols()));
}

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_)
    throw Error(ErrorKind::DimMismatch, "CMatrix: entry count does not match shape");
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw Error(ErrorKind::DimMismatch, "CMatrix: ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diag(std::span<const double> values) {
  CMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

CMatrix CMatrix::diag(std::span<const cplx> values) {
  CMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

CMatrix CMatrix::diag(std::initializer_list<double> values) {
  return diag(std::span<const double>(values.begin(), values.size()));
}

CMatrix CMatrix::unit(std::size_t rows, std::size_t cols, std::size_t i, std::size_t j) {
  CMatrix m(rows, cols);
  m(i, j) = 1.0;
  return m;
}

CMatrix CMatrix::outer(std::span<const cplx> ket, std::span<const cplx> bra) {
  CMatrix m(ket.size(), bra.size());
  for (std::size_t i = 0; i < ket.size(); ++i)
    for (std::size_t j = 0; j < bra.size(); ++j) m(i, j) = ket[i] * std::conj(bra[j]);
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

CMatrix CMatrix::conj() const {
  CMatrix out = *this;
  for (auto& x : out.data_) x = std::conj(x);
  return out;
}

cplx CMatrix::trace() const {
  cplx t(0.0, 0.0);
  const std::size_t n = std::min(rows_, cols_);
  for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::frobenius_norm() const { return std::sqrt(kernels::active().norm2(data(), size())); }

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& x : data_) m = std::max(m, std::abs(x));
  return m;
}

CMatrix CMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw Error(ErrorKind::DimMismatch, "block out of range");
  CMatrix out(nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c) out(r, c) = (*this)(r0 + r, c0 + c);
  return out;
}

void CMatrix::set_block(std::size_t r0, std::size_t c0, const CMatrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw Error(ErrorKind::DimMismatch, "set_block out of range");
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
}

std::vector<cplx> CMatrix::column(std::size_t c) const {
  std::vector<cplx> v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void CMatrix::set_column(std::size_t c, std::span<const cplx> v) {
  if (v.size() != rows_) throw Error(ErrorKind::DimMismatch, "set_column length");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  require_same_shape(*this, o, "operator+=");
  kernels::active().axpy(cplx(1.0, 0.0), o.data(), data(), size());
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  require_same_shape(*this, o, "operator-=");
  kernels::active().axpy(cplx(-1.0, 0.0), o.data(), data(), size());
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& x : data_) x *= s;
  return *this;
}

CMatrix& CMatrix::add_scaled(cplx s, const CMatrix& o) {
  require_same_shape(*this, o, "add_scaled");
  kernels::active().axpy(s, o.data(), data(), size());
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows())
    throw Error(ErrorKind::DimMismatch, "matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                            " * " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  CMatrix c(a.rows(), b.cols());
  kernels::active().gemm(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
  return c;
}

cplx hs_inner(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "hs_inner");
  return kernels::active().dotc(a.data(), b.data(), a.size());
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

bool is_hermitian(const CMatrix& a) {
  if (!a.is_square()) return false;
  double dev = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = r; c < a.cols(); ++c) dev = std::max(dev, std::abs(a(r, c) - std::conj(a(c, r))));
  return dev <= 1e-12 * (1.0 + a.max_abs());
}

CMatrix hermitian_part(const CMatrix& a) {
  CMatrix h = a + a.adjoint();
  h *= cplx(0.5, 0.0);
  return h;
}

HermEig herm_eig_unchecked(const CMatrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::DimMismatch, "herm_eig: matrix is not square");
  const std::size_t n = a.rows();
  if (n == 0) return {{}, CMatrix()};
  Eigen::MatrixXcd m = as_eigen(a);
  m = (0.5 * (m + m.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::NotHermitian, "eigensolver did not converge");
  HermEig out;
  out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  out.eigenvectors = from_eigen(solver.eigenvectors());
  return out;
}

HermEig herm_eig(const CMatrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::DimMismatch, "herm_eig: matrix is not square");
  if (!is_hermitian(a)) throw Error(ErrorKind::NotHermitian, "herm_eig: input is not Hermitian within 1e-12");
  return herm_eig_unchecked(a);
}

CMatrix matrix_func(const HermEig& eig, MatrixFunction f) {
  const auto& ev = eig.eigenvalues;
  const double lmax = ev.empty() ? 0.0 : std::max(0.0, ev.back());
  if (!ev.empty() && ev.front() < -kPsdTolerance * std::max(1.0, lmax))
    throw Error(ErrorKind::NotPSD, "matrix_func: eigenvalue " + std::to_string(ev.front()));
  const double cutoff = kSupportCutoff * lmax;
  auto on_support = [&](double lambda) { return lmax > 0.0 && lambda > cutoff; };
  switch (f.kind) {
    case MatrixFunction::Kind::Log2:
      return spectral_apply(eig, [&](double l) { return on_support(l) ? std::log2(l) : 0.0; });
    case MatrixFunction::Kind::Power:
      if (!std::isfinite(f.alpha)) throw Error(ErrorKind::BadExponent, "matrix_func: non-finite exponent");
      return spectral_apply(eig, [&](double l) { return on_support(l) ? std::pow(l, f.alpha) : 0.0; });
    case MatrixFunction::Kind::PinvPower:
      if (!std::isfinite(f.alpha)) throw Error(ErrorKind::BadExponent, "matrix_func: non-finite exponent");
      return spectral_apply(eig, [&](double l) { return on_support(l) ? std::pow(l, f.alpha) : 0.0; });
  }
  return {};
}

CMatrix matrix_func(const CMatrix& a, MatrixFunction f) { return matrix_func(herm_eig(a), f); }

CMatrix support_projection(const CMatrix& a) { return matrix_func(a, MatrixFunction::power(0.0)); }

std::vector<double> singular_values(const CMatrix& a) {
  if (a.empty()) return {};
  Eigen::MatrixXcd m = as_eigen(a);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

namespace {

double p_norm_of(std::span<const double> values, double p) {
  if (std::isnan(p) || p < 1.0) throw Error(ErrorKind::BadExponent, "Schatten exponent must be >= 1");
  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  if (std::isinf(p) || vmax == 0.0) return vmax;
  // Scale by the largest value so large p cannot overflow.
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v) / vmax, p);
  return vmax * std::pow(s, 1.0 / p);
}

}  // namespace

double schatten_norm(const CMatrix& a, double p) {
  if (std::isnan(p) || p < 1.0) throw Error(ErrorKind::BadExponent, "Schatten exponent must be >= 1");
  const auto s = singular_values(a);
  return p_norm_of(s, p);
}

double schatten_norm_hermitian(const CMatrix& a, double p) {
  if (std::isnan(p) || p < 1.0) throw Error(ErrorKind::BadExponent, "Schatten exponent must be >= 1");
  const auto eig = herm_eig_unchecked(a);
  return p_norm_of(eig.eigenvalues, p);
}

double normalized_p_norm(const CMatrix& f, double p) {
  if (!f.is_square()) throw Error(ErrorKind::DimMismatch, "normalized_p_norm: not square");
  const double norm = schatten_norm(f, p);
  if (std::isinf(p)) return norm;
  return norm * std::pow(static_cast<double>(f.rows()), -1.0 / p);
}

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

CMatrix partial_trace(const CMatrix& m, std::size_t dim_a, std::size_t dim_b, Keep keep) {
  if (m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b)
    throw Error(ErrorKind::DimMismatch, "partial_trace: matrix is " + std::to_string(m.rows()) + "x" +
                                            std::to_string(m.cols()) + ", dims " + std::to_string(dim_a) + "*" +
                                            std::to_string(dim_b));
  if (keep == Keep::A) {
    CMatrix out(dim_a, dim_a);
    for (std::size_t a = 0; a < dim_a; ++a)
      for (std::size_t a2 = 0; a2 < dim_a; ++a2) {
        cplx s(0.0, 0.0);
        for (std::size_t b = 0; b < dim_b; ++b) s += m(a * dim_b + b, a2 * dim_b + b);
        out(a, a2) = s;
      }
    return out;
  }
  CMatrix out(dim_b, dim_b);
  for (std::size_t b = 0; b < dim_b; ++b)
    for (std::size_t b2 = 0; b2 < dim_b; ++b2) {
      cplx s(0.0, 0.0);
      for (std::size_t a = 0; a < dim_a; ++a) s += m(a * dim_b + b, a * dim_b + b2);
      out(b, b2) = s;
    }
  return out;
}

CMatrix permute_subsystems(const CMatrix& m, std::span<const std::size_t> dims, std::span<const std::size_t> perm) {
  const std::size_t k = dims.size();
  if (perm.size() != k) throw Error(ErrorKind::DimMismatch, "permute_subsystems: perm length");
  const std::size_t total = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  if (m.rows() != total || m.cols() != total) throw Error(ErrorKind::DimMismatch, "permute_subsystems: shape");
  std::vector<std::size_t> out_dims(k);
  for (std::size_t i = 0; i < k; ++i) out_dims[i] = dims[perm[i]];

  // new_index[old] for every flat index.
  std::vector<std::size_t> map(total);
  std::vector<std::size_t> digits(k);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (std::size_t f = k; f-- > 0;) {
      digits[f] = rem % dims[f];
      rem /= dims[f];
    }
    std::size_t out = 0;
    for (std::size_t f = 0; f < k; ++f) out = out * out_dims[f] + digits[perm[f]];
    map[idx] = out;
  }
  CMatrix result(total, total);
  for (std::size_t r = 0; r < total; ++r)
    for (std::size_t c = 0; c < total; ++c) result(map[r], map[c]) = m(r, c);
  return result;
}

CMatrix null_space(const CMatrix& a, double rel_tol, double abs_floor) {
  const std::size_t n = a.cols();
  if (n == 0) return CMatrix(0, 0);
  if (a.rows() == 0) return CMatrix::identity(n);
  Eigen::MatrixXcd m = as_eigen(a);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  std::size_t rank = 0;
  const double cut = std::max(rel_tol * smax, abs_floor);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut && smax > 0.0) ++rank;
  const Eigen::MatrixXcd v = svd.matrixV();
  CMatrix out(n, n - rank);
  for (std::size_t c = rank; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) out(r, c - rank) = v(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return out;
}

CMatrix range_basis(const CMatrix& a, double rel_tol) {
  if (a.empty()) return CMatrix(a.rows(), 0);
  Eigen::MatrixXcd m = as_eigen(a);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (smax > 0.0 && s(i) > rel_tol * smax) ++rank;
  const Eigen::MatrixXcd u = svd.matrixU();
  CMatrix out(a.rows(), rank);
  for (std::size_t c = 0; c < rank; ++c)
    for (std::size_t r = 0; r < a.rows(); ++r) out(r, c) = u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return out;
}

CMatrix reshape_vector(std::span<const cplx> v, std::size_t rows, std::size_t cols) {
  if (v.size() != rows * cols) throw Error(ErrorKind::DimMismatch, "reshape_vector: length");
  return CMatrix(rows, cols, std::vector<cplx>(v.begin(), v.end()));
}

CMatrix vectorize(const CMatrix& a) {
  return CMatrix(a.size(), 1, std::vector<cplx>(a.entries().begin(), a.entries().end()));
}

}  // namespace trocap
