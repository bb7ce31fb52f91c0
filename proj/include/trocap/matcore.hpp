#pragma once

// Dense complex matrices and the spectral machinery everything else is built
// on. Conventions fixed here and relied on everywhere:
//   * storage is row-major;
//   * Kronecker index (a, b) of A (x) B maps to a * |B| + b;
//   * logarithms are base 2;
//   * matrix functions act on the support only, with cutoff 1e-10 * lambda_max.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace trocap {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kSupportCutoff = 1e-10;
inline constexpr double kPsdTolerance = 1e-10;

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static CMatrix zeros(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }
  static CMatrix identity(std::size_t n);
  static CMatrix diag(std::span<const double> values);
  static CMatrix diag(std::span<const cplx> values);
  static CMatrix diag(std::initializer_list<double> values);
  /// |i><j| in an n x m matrix space.
  static CMatrix unit(std::size_t rows, std::size_t cols, std::size_t i, std::size_t j);
  /// v v^dagger for a column vector stored as an n x 1 matrix or a flat span.
  static CMatrix outer(std::span<const cplx> ket, std::span<const cplx> bra);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  cplx* data() noexcept { return data_.data(); }
  const cplx* data() const noexcept { return data_.data(); }
  std::span<const cplx> entries() const noexcept { return data_; }
  std::span<cplx> entries() noexcept { return data_; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix conj() const;
  cplx trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  CMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const CMatrix& b);
  std::vector<cplx> column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const cplx> v);

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cplx s);
  /// this += s * o, through the axpy kernel.
  CMatrix& add_scaled(cplx s, const CMatrix& o);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
  friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(CMatrix a, double s) { return a *= cplx(s, 0.0); }
  friend CMatrix operator*(double s, CMatrix a) { return a *= cplx(s, 0.0); }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Hilbert-Schmidt inner product tr(a^dagger b).
cplx hs_inner(const CMatrix& a, const CMatrix& b);
/// Largest entrywise |a - b|; shapes must agree.
double max_abs_diff(const CMatrix& a, const CMatrix& b);

bool is_hermitian(const CMatrix& a);
CMatrix hermitian_part(const CMatrix& a);

struct HermEig {
  std::vector<double> eigenvalues;  // ascending
  CMatrix eigenvectors;             // columns, unitary
};

/// Spectral decomposition of a Hermitian matrix. The input is symmetrized
/// before decomposition; throws NotHermitian beyond 1e-12 * (1 + max|A|).
HermEig herm_eig(const CMatrix& a);
/// Same, for a matrix the caller already knows to be Hermitian up to round-off
/// accumulated in long products; symmetrizes without the tolerance check.
HermEig herm_eig_unchecked(const CMatrix& a);

/// V diag(f(lambda)) V^dagger.
template <typename F>
CMatrix spectral_apply(const HermEig& eig, F&& f);

struct MatrixFunction {
  enum class Kind { Log2, Power, PinvPower };
  Kind kind;
  double alpha = 1.0;

  static MatrixFunction log2() { return {Kind::Log2, 0.0}; }
  static MatrixFunction power(double a) { return {Kind::Power, a}; }
  static MatrixFunction pinv_power(double a) { return {Kind::PinvPower, a}; }
};

/// f applied to a PSD matrix on its support (eigenvalues above
/// 1e-10 * lambda_max); the kernel maps to 0. Throws NotPSD.
CMatrix matrix_func(const CMatrix& a, MatrixFunction f);
CMatrix matrix_func(const HermEig& eig, MatrixFunction f);
/// Orthogonal projection onto the support of a PSD matrix.
CMatrix support_projection(const CMatrix& a);

std::vector<double> singular_values(const CMatrix& a);
/// (sum s^p)^(1/p); p = kInf gives the operator norm. Throws BadExponent for p < 1.
double schatten_norm(const CMatrix& a, double p);
/// (tr|f|^p / dim)^(1/p), the L_p norm for the normalized trace.
double normalized_p_norm(const CMatrix& f, double p);
/// Schatten norm of a Hermitian matrix via its eigenvalues.
double schatten_norm_hermitian(const CMatrix& a, double p);

CMatrix tensor(const CMatrix& a, const CMatrix& b);

enum class Keep { A, B };
/// Partial trace of an operator on H_A (x) H_B.
CMatrix partial_trace(const CMatrix& m, std::size_t dim_a, std::size_t dim_b, Keep keep);

/// Reorders tensor factors: output factor k is input factor perm[k].
CMatrix permute_subsystems(const CMatrix& m, std::span<const std::size_t> dims,
                           std::span<const std::size_t> perm);

/// Orthonormal basis (as columns) of the right null space of a. Singular
/// values at or below max(rel_tol * s_max, abs_floor) count as zero; the floor
/// keeps an all-round-off matrix from looking full rank.
CMatrix null_space(const CMatrix& a, double rel_tol, double abs_floor = 0.0);
/// Orthonormal basis (as columns) of the column space of a.
CMatrix range_basis(const CMatrix& a, double rel_tol);

/// Reshapes a vector on H_A (x) H_B into the |A| x |B| matrix h with h(a,b) = v[a*|B|+b].
CMatrix reshape_vector(std::span<const cplx> v, std::size_t rows, std::size_t cols);
/// Row-major flattening of a matrix into a column vector (n*m x 1).
CMatrix vectorize(const CMatrix& a);

template <typename F>
CMatrix spectral_apply(const HermEig& eig, F&& f) {
  const std::size_t n = eig.eigenvalues.size();
  CMatrix scaled = eig.eigenvectors;
  for (std::size_t c = 0; c < n; ++c) {
    const double w = f(eig.eigenvalues[c]);
    for (std::size_t r = 0; r < n; ++r) scaled(r, c) *= w;
  }
  return scaled * eig.eigenvectors.adjoint();
}

}  // namespace trocap
