#include "trocap/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "trocap/error.hpp"
#include "trocap/random.hpp"

namespace trocap {

namespace {

void require_input(const Channel& ch, const CMatrix& rho, const char* where) {
  if (rho.rows() != ch.dim_in() || rho.cols() != ch.dim_in())
    throw Error(ErrorKind::DimMismatch, std::string(where) + ": input is " + std::to_string(rho.rows()) + "x" +
                                            std::to_string(rho.cols()) + ", channel expects " +
                                            std::to_string(ch.dim_in()));
}

}  // namespace

Channel Channel::from_kraus(std::vector<CMatrix> kraus, double tol) {
  if (kraus.empty()) throw Error(ErrorKind::DimMismatch, "from_kraus: empty Kraus family");
  const std::size_t rows = kraus.front().rows();
  const std::size_t cols = kraus.front().cols();
  if (rows == 0 || cols == 0) throw Error(ErrorKind::DimMismatch, "from_kraus: empty Kraus operator");
  CMatrix sum(cols, cols);
  for (const auto& k : kraus) {
    if (k.rows() != rows || k.cols() != cols) throw Error(ErrorKind::DimMismatch, "from_kraus: ragged Kraus shapes");
    sum += k.adjoint() * k;
  }
  const double dev = max_abs_diff(sum, CMatrix::identity(cols));
  if (dev > tol)
    throw Error(ErrorKind::NotTracePreserving, "sum K^dagger K deviates from identity by " + std::to_string(dev));
  Channel ch;
  ch.dim_in_ = cols;
  ch.dim_out_ = rows;
  ch.kraus_ = std::move(kraus);
  return ch;
}

CMatrix apply(const Channel& ch, const CMatrix& rho) {
  require_input(ch, rho, "apply");
  CMatrix out(ch.dim_out(), ch.dim_out());
  for (const auto& k : ch.kraus()) out += k * rho * k.adjoint();
  return out;
}

CMatrix apply_adjoint(const Channel& ch, const CMatrix& y) {
  if (y.rows() != ch.dim_out() || y.cols() != ch.dim_out())
    throw Error(ErrorKind::DimMismatch, "apply_adjoint: operand shape");
  CMatrix out(ch.dim_in(), ch.dim_in());
  for (const auto& k : ch.kraus()) out += k.adjoint() * y * k;
  return out;
}

CMatrix complement_apply(const Channel& ch, const CMatrix& rho) {
  require_input(ch, rho, "complement_apply");
  const auto& ks = ch.kraus();
  const std::size_t ne = ks.size();
  std::vector<CMatrix> k_rho;
  k_rho.reserve(ne);
  for (const auto& k : ks) k_rho.push_back(k * rho);
  CMatrix out(ne, ne);
  for (std::size_t e = 0; e < ne; ++e)
    for (std::size_t e2 = 0; e2 < ne; ++e2) out(e2, e) = hs_inner(ks[e2], k_rho[e]);
  return out;
}

CMatrix complement_apply_adjoint(const Channel& ch, const CMatrix& z) {
  const auto& ks = ch.kraus();
  const std::size_t ne = ks.size();
  if (z.rows() != ne || z.cols() != ne) throw Error(ErrorKind::DimMismatch, "complement_apply_adjoint: operand shape");
  CMatrix out(ch.dim_in(), ch.dim_in());
  for (std::size_t e2 = 0; e2 < ne; ++e2) {
    const CMatrix k2 = ks[e2].adjoint();
    for (std::size_t e = 0; e < ne; ++e)
      if (z(e, e2) != cplx(0.0, 0.0)) out.add_scaled(z(e, e2), k2 * ks[e]);
  }
  return out;
}

CMatrix apply_with_ancilla(const Channel& ch, const CMatrix& rho, std::size_t dim_ancilla) {
  if (rho.rows() != dim_ancilla * ch.dim_in() || rho.cols() != rho.rows())
    throw Error(ErrorKind::DimMismatch, "apply_with_ancilla: input shape");
  const CMatrix id = CMatrix::identity(dim_ancilla);
  const std::size_t n = dim_ancilla * ch.dim_out();
  CMatrix out(n, n);
  for (const auto& k : ch.kraus()) {
    const CMatrix big = tensor(id, k);
    out += big * rho * big.adjoint();
  }
  return out;
}

CMatrix apply_adjoint_with_ancilla(const Channel& ch, const CMatrix& y, std::size_t dim_ancilla) {
  if (y.rows() != dim_ancilla * ch.dim_out() || y.cols() != y.rows())
    throw Error(ErrorKind::DimMismatch, "apply_adjoint_with_ancilla: operand shape");
  const CMatrix id = CMatrix::identity(dim_ancilla);
  const std::size_t n = dim_ancilla * ch.dim_in();
  CMatrix out(n, n);
  for (const auto& k : ch.kraus()) {
    const CMatrix big = tensor(id, k);
    out += big.adjoint() * y * big;
  }
  return out;
}

CMatrix choi(const Channel& ch) {
  const std::size_t a = ch.dim_in();
  const std::size_t b = ch.dim_out();
  CMatrix j(a * b, a * b);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t k = 0; k < a; ++k) j.set_block(i * b, k * b, apply(ch, CMatrix::unit(a, a, i, k)));
  return j;
}

CMatrix stinespring_isometry(const Channel& ch) {
  const std::size_t ne = ch.dim_env();
  CMatrix v(ch.dim_out() * ne, ch.dim_in());
  for (std::size_t e = 0; e < ne; ++e) {
    const CMatrix& k = ch.kraus()[e];
    for (std::size_t b = 0; b < ch.dim_out(); ++b)
      for (std::size_t i = 0; i < ch.dim_in(); ++i) v(b * ne + e, i) = k(b, i);
  }
  return v;
}

std::uint64_t StinespringSpace::digest() const {
  std::uint64_t state = 0xcbf29ce484222325ULL;
  const CMatrix dims(1, 3, {cplx(double(dim_in)), cplx(double(dim_out)), cplx(double(dim_env))});
  state = fnv1a(dims, state);
  for (const auto& b : basis) state = fnv1a(b, state);
  return state;
}

StinespringSpace stinespring_space(const Channel& ch) {
  StinespringSpace space;
  space.dim_in = ch.dim_in();
  space.dim_out = ch.dim_out();
  space.dim_env = ch.dim_env();
  space.basis.reserve(ch.dim_in());
  for (std::size_t i = 0; i < ch.dim_in(); ++i) {
    CMatrix h(ch.dim_out(), ch.dim_env());
    for (std::size_t e = 0; e < ch.dim_env(); ++e)
      for (std::size_t b = 0; b < ch.dim_out(); ++b) h(b, e) = ch.kraus()[e](b, i);
    space.basis.push_back(std::move(h));
  }
  double dev = 0.0;
  for (std::size_t i = 0; i < space.basis.size(); ++i)
    for (std::size_t j = 0; j < space.basis.size(); ++j) {
      const cplx g = hs_inner(space.basis[i], space.basis[j]);
      dev = std::max(dev, std::abs(g - cplx(i == j ? 1.0 : 0.0, 0.0)));
    }
  if (dev > 1e-10) throw Error(ErrorKind::RankDeficient, "dilation is not isometric; Gram deviation " + std::to_string(dev));
  return space;
}

Channel channel_from_space(const StinespringSpace& space) {
  std::vector<CMatrix> kraus(space.dim_env, CMatrix(space.dim_out, space.dim_in));
  for (std::size_t i = 0; i < space.dim_in; ++i)
    for (std::size_t e = 0; e < space.dim_env; ++e)
      for (std::size_t b = 0; b < space.dim_out; ++b) kraus[e](b, i) = space.basis[i](b, e);
  return Channel::from_kraus(std::move(kraus), 1e-9);
}

Channel modified_channel_unchecked(const StinespringSpace& space, const CMatrix& f) {
  if (f.rows() != space.dim_env || f.cols() != space.dim_env)
    throw Error(ErrorKind::DimMismatch, "modified_channel: symbol must act on the environment");
  const CMatrix root = matrix_func(f, MatrixFunction::power(0.5));
  std::vector<CMatrix> kraus(space.dim_env, CMatrix(space.dim_out, space.dim_in));
  for (std::size_t i = 0; i < space.dim_in; ++i) {
    const CMatrix col = space.basis[i] * root;
    for (std::size_t j = 0; j < space.dim_env; ++j)
      for (std::size_t b = 0; b < space.dim_out; ++b) kraus[j](b, i) = col(b, j);
  }
  // Trace preservation holds only for genuine symbols.
  return Channel::from_kraus(std::move(kraus), kInf);
}

Channel modified_channel(const StinespringSpace& space, const Symbol& f) {
  if (!f.certificate.valid) throw Error(ErrorKind::InvalidSymbol, "symbol has no valid certificate");
  if (f.certificate.space_digest != space.digest())
    throw Error(ErrorKind::InvalidSymbol, "symbol certificate was issued for a different Stinespring space");
  if (f.f.rows() != space.dim_env) throw Error(ErrorKind::InvalidSymbol, "symbol dimension differs from |E|");
  const double tau = f.f.trace().real() / static_cast<double>(space.dim_env);
  if (std::abs(tau - 1.0) > 1e-10) throw Error(ErrorKind::InvalidSymbol, "tau(f) = " + std::to_string(tau));
  return modified_channel_unchecked(space, f.f);
}

Channel tensor_channels(const Channel& a, const Channel& b) {
  std::vector<CMatrix> kraus;
  kraus.reserve(a.dim_env() * b.dim_env());
  for (const auto& ka : a.kraus())
    for (const auto& kb : b.kraus()) kraus.push_back(tensor(ka, kb));
  return Channel::from_kraus(std::move(kraus), 1e-9);
}

Channel heralded_channel(const Channel& a, const Channel& b, double lambda) {
  if (a.dim_in() != b.dim_in()) throw Error(ErrorKind::DimMismatch, "heralded_channel: input dimensions differ");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorKind::OutOfRange, "heralded_channel: lambda outside [0,1]");
  const std::size_t out = a.dim_out() + b.dim_out();
  std::vector<CMatrix> kraus;
  const double sa = std::sqrt(lambda);
  const double sb = std::sqrt(1.0 - lambda);
  for (const auto& k : a.kraus()) {
    CMatrix big(out, a.dim_in());
    big.set_block(0, 0, k * sa);
    kraus.push_back(std::move(big));
  }
  for (const auto& k : b.kraus()) {
    CMatrix big(out, a.dim_in());
    big.set_block(a.dim_out(), 0, k * sb);
    kraus.push_back(std::move(big));
  }
  return Channel::from_kraus(std::move(kraus), 1e-9);
}

Channel unitary_channel(const CMatrix& u) { return Channel::from_kraus({u}, 1e-9); }

Channel depolarizing_channel(std::size_t d) {
  std::vector<CMatrix> kraus;
  const double w = 2.0 * std::numbers::pi / static_cast<double>(d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      // X^a Z^b / d
      CMatrix k(d, d);
      for (std::size_t j = 0; j < d; ++j) k((j + a) % d, j) = std::polar(1.0 / double(d), w * double(b * j));
      kraus.push_back(std::move(k));
    }
  return Channel::from_kraus(std::move(kraus));
}

}  // namespace trocap
