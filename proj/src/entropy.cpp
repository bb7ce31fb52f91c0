#include "trocap/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "trocap/error.hpp"
#include "trocap/random.hpp"

namespace trocap {

namespace {

constexpr double kStateTolerance = 1e-10;
constexpr double kSupportResidual = 1e-8;

void require_state(const CMatrix& rho, double trace_tol, const char* where) {
  if (!rho.is_square()) throw Error(ErrorKind::NotState, std::string(where) + ": not square");
  if (!is_hermitian(rho)) throw Error(ErrorKind::NotState, std::string(where) + ": not Hermitian");
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > trace_tol) {
    std::ostringstream msg;
    msg.precision(12);
    msg << where << ": trace " << tr;
    throw Error(ErrorKind::NotState, msg.str());
  }
}

// Every positive eigenvalue counts: x log x is continuous at 0, and cutting at
// the support threshold shifts entropy differences by ~1e-9.
double entropy_of(const std::vector<double>& ev) {
  double h = 0.0;
  for (double v : ev)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

void require_exponent(double p, bool allow_inf) {
  if (std::isnan(p) || p <= 1.0 || (!allow_inf && std::isinf(p)))
    throw Error(ErrorKind::BadExponent, "Rényi order must be " + std::string(allow_inf ? "in (1, inf]" : "in (1, inf)") +
                                            ", got " + std::to_string(p));
}

// Largest entry of rho outside the block supp(proj) x supp(proj).
double off_support(const CMatrix& rho, const CMatrix& proj) {
  const CMatrix inside = proj * rho * proj;
  return max_abs_diff(rho, inside);
}

// ---- Optimization over sigma^B ---------------------------------------------
//
// Minimizes F(sigma) = tr[Gamma^p], Gamma = (1 (x) sigma^(-g/2)) r (1 (x) sigma^(-g/2)),
// g = (p-1)/p, over densities sigma on B. D = log2(F) / (p-1). The operator r
// is the joint state (conditional entropy) or the A-twisted state (mutual
// information); only positivity matters here.

struct SigmaProblem {
  const CMatrix& r;
  std::size_t da;
  std::size_t db;
  double p;
  double g;
  const ConditionalExpectation* restrict_b;
};

struct Evaluation {
  double log_f = kInf;  // natural log of F
  CMatrix gamma;
  CMatrix s;  // sigma^(-g/2), support-restricted
  HermEig sigma_eig;
};

Evaluation evaluate(const SigmaProblem& pr, const CMatrix& sigma) {
  Evaluation ev;
  ev.sigma_eig = herm_eig_unchecked(sigma);
  const auto& lam = ev.sigma_eig.eigenvalues;
  const double lmax = std::max(0.0, lam.back());
  if (lmax <= 0.0) return ev;
  const double cut = kSupportCutoff * lmax;
  ev.s = spectral_apply(ev.sigma_eig, [&](double l) { return l > cut ? std::pow(l, -pr.g / 2.0) : 0.0; });
  const CMatrix big_s = tensor(CMatrix::identity(pr.da), ev.s);
  const CMatrix proj = tensor(CMatrix::identity(pr.da),
                              spectral_apply(ev.sigma_eig, [&](double l) { return l > cut ? 1.0 : 0.0; }));
  if (off_support(pr.r, proj) > kSupportResidual * std::max(1.0, pr.r.max_abs())) return ev;
  ev.gamma = hermitian_part(big_s * pr.r * big_s);
  const HermEig ge = herm_eig_unchecked(ev.gamma);
  double f = 0.0;
  for (double v : ge.eigenvalues)
    if (v > 0.0) f += std::pow(v, pr.p);
  ev.log_f = f > 0.0 ? std::log(f) : -kInf;
  return ev;
}

double divergence_of(const SigmaProblem& pr, double log_f) { return log_f / std::log(2.0) / (pr.p - 1.0); }

CMatrix normalized(CMatrix m) {
  const double t = m.trace().real();
  return m * (1.0 / t);
}

CMatrix project_b(const SigmaProblem& pr, const CMatrix& sigma) {
  return pr.restrict_b ? hermitian_part((*pr.restrict_b)(sigma)) : sigma;
}

struct Candidate {
  bool converged = false;
  double divergence = kInf;
  CMatrix sigma;
  int iterations = 0;
};

// sigma <- (sigma + T(sigma)) / 2 with
// T(sigma) = normalize((sigma^((p-1)/2) tr_A[Gamma^p] sigma^((p-1)/2))^(1/p)).
// Fixed points satisfy tr_A[Gamma^p] proportional to sigma, the stationarity
// condition; for commuting inputs T(sigma) is already optimal.
Candidate fixed_point(const SigmaProblem& pr, CMatrix sigma, int max_iter) {
  Candidate c;
  sigma = normalized(project_b(pr, sigma));
  Evaluation ev = evaluate(pr, sigma);
  if (!std::isfinite(ev.log_f)) return c;
  double d = divergence_of(pr, ev.log_f);
  for (int it = 1; it <= max_iter; ++it) {
    const CMatrix gp = matrix_func(herm_eig_unchecked(ev.gamma), MatrixFunction::power(pr.p));
    const CMatrix k = hermitian_part(partial_trace(gp, pr.da, pr.db, Keep::B));
    const CMatrix half = matrix_func(ev.sigma_eig, MatrixFunction::power((pr.p - 1.0) / 2.0));
    const CMatrix inner = hermitian_part(half * k * half);
    const CMatrix t = normalized(project_b(pr, matrix_func(herm_eig_unchecked(inner), MatrixFunction::power(1.0 / pr.p))));
    const double step = max_abs_diff(t, sigma);
    const CMatrix next = hermitian_part((sigma + t) * 0.5);
    Evaluation nev = evaluate(pr, next);
    if (!std::isfinite(nev.log_f)) break;
    const double nd = divergence_of(pr, nev.log_f);
    const double change = std::abs(nd - d);
    sigma = next;
    ev = std::move(nev);
    d = nd;
    c.iterations = it;
    if (change < 1e-13 * std::max(1.0, std::abs(d)) && step < 1e-7) {
      c.converged = true;
      break;
    }
  }
  c.divergence = d;
  c.sigma = sigma;
  return c;
}

// Gradient of F with respect to sigma (Hermitian), via the Daleckii-Krein
// formula for sigma -> sigma^(-g/2).
CMatrix gradient_sigma(const SigmaProblem& pr, const Evaluation& ev) {
  const HermEig ge = herm_eig_unchecked(ev.gamma);
  const CMatrix gpm1 = spectral_apply(ge, [&](double l) { return l > 0.0 ? std::pow(l, pr.p - 1.0) : 0.0; });
  const CMatrix big_s = tensor(CMatrix::identity(pr.da), ev.s);
  const CMatrix m = pr.r * big_s * gpm1;
  const CMatrix ta = partial_trace(m, pr.da, pr.db, Keep::B);
  const CMatrix y = (ta + ta.adjoint()) * pr.p;

  const auto& lam = ev.sigma_eig.eigenvalues;
  const CMatrix& v = ev.sigma_eig.eigenvectors;
  const std::size_t n = lam.size();
  auto gfun = [&](double l) { return std::pow(l, -pr.g / 2.0); };
  auto gder = [&](double l) { return (-pr.g / 2.0) * std::pow(l, -pr.g / 2.0 - 1.0); };
  CMatrix yt = v.adjoint() * y * v;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double a = lam[i], b = lam[j];
      const double dd = std::abs(a - b) <= 1e-10 * std::max(a, b) ? gder(0.5 * (a + b)) : (gfun(a) - gfun(b)) / (a - b);
      yt(i, j) *= dd;
    }
  return hermitian_part(v * yt * v.adjoint());
}

// Descent over sigma = P(G G^dagger) / tr, P the optional restriction, on log F.
Candidate gradient_descent(const SigmaProblem& pr, CMatrix g, int max_iter) {
  Candidate c;
  auto sigma_of = [&](const CMatrix& gg) { return normalized(project_b(pr, hermitian_part(gg * gg.adjoint()))); };
  CMatrix sigma = sigma_of(g);
  Evaluation ev = evaluate(pr, sigma);
  if (!std::isfinite(ev.log_f)) return c;
  double eta = 0.1;
  int quiet = 0;
  for (int it = 1; it <= max_iter; ++it) {
    c.iterations = it;
    const CMatrix z_raw = gradient_sigma(pr, ev) * (1.0 / std::exp(ev.log_f));
    const CMatrix z = project_b(pr, z_raw);
    const double cz = (z * sigma).trace().real();
    const double t = (g * g.adjoint()).trace().real();
    const CMatrix x = (z - CMatrix::identity(pr.db) * cz) * g * (2.0 / t);
    const double gn2 = std::pow(x.frobenius_norm(), 2);
    if (gn2 < 1e-26) {
      c.converged = true;
      break;
    }
    bool accepted = false;
    while (eta > 1e-18) {
      const CMatrix trial = g - x * eta;
      const CMatrix ts = sigma_of(trial);
      Evaluation tev = evaluate(pr, ts);
      if (std::isfinite(tev.log_f) && tev.log_f <= ev.log_f - 1e-4 * eta * gn2) {
        const double gain = ev.log_f - tev.log_f;
        g = trial;
        // Keep the parametrization well scaled; sigma is invariant under G -> cG.
        g *= cplx(1.0 / g.frobenius_norm(), 0.0);
        sigma = ts;
        ev = std::move(tev);
        accepted = true;
        eta *= 1.5;
        quiet = gain < 1e-14 * std::max(1.0, std::abs(ev.log_f)) ? quiet + 1 : 0;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted || quiet >= 10) {
      // No descent direction left at round-off level.
      c.converged = true;
      break;
    }
  }
  c.divergence = divergence_of(pr, ev.log_f);
  c.sigma = sigma;
  return c;
}

CMatrix sqrt_start(const CMatrix& sigma) {
  const std::size_t n = sigma.rows();
  return matrix_func(hermitian_part(sigma + CMatrix::identity(n) * (1e-3 / double(n))), MatrixFunction::power(0.5));
}

RenyiOptimum minimize_over_b(const CMatrix& r, std::size_t da, std::size_t db, double p, const CMatrix& start,
                             const RenyiOptimizerOptions& opts) {
  std::optional<ConditionalExpectation> cond;
  if (opts.restrict_b) {
    if (opts.restrict_b->dim != db) throw Error(ErrorKind::DimMismatch, "restriction algebra does not act on B");
    cond.emplace(*opts.restrict_b);
  }
  const SigmaProblem pr{r, da, db, p, (p - 1.0) / p, cond ? &*cond : nullptr};

  std::vector<Candidate> found;
  Candidate fp = fixed_point(pr, start, opts.max_iterations);
  const bool need_fallback = !fp.converged || cond.has_value();
  found.push_back(std::move(fp));
  int method_gradient_from = 1;
  if (need_fallback) {
    Rng rng = make_rng(opts.seed, 0);
    std::vector<CMatrix> starts{sqrt_start(start), CMatrix::identity(db)};
    if (found.front().converged) starts.insert(starts.begin(), sqrt_start(found.front().sigma));
    for (int k = 0; k < opts.restarts; ++k) starts.push_back(random_gaussian(db, db, rng));
    for (auto& s : starts) found.push_back(gradient_descent(pr, s, opts.max_iterations));
  }
  std::size_t best = found.size();
  for (std::size_t i = 0; i < found.size(); ++i)
    if (found[i].converged && (best == found.size() || found[i].divergence < found[best].divergence)) best = i;
  if (best == found.size()) {
    std::ostringstream msg;
    msg.precision(10);
    msg << "neither the fixed-point iteration nor gradient descent converged (p = " << p << ")";
    throw Error(ErrorKind::OptimizerFailed, msg.str());
  }
  RenyiOptimum out;
  out.divergence = found[best].divergence;
  out.sigma = found[best].sigma;
  out.iterations = found[best].iterations;
  out.method = static_cast<int>(best) < method_gradient_from ? "fixed-point" : "gradient";
  return out;
}

}  // namespace

BipartiteState::BipartiteState(CMatrix rho, std::size_t dim_a, std::size_t dim_b)
    : rho_(std::move(rho)), dim_a_(dim_a), dim_b_(dim_b) {
  if (rho_.rows() != dim_a * dim_b || rho_.cols() != dim_a * dim_b)
    throw Error(ErrorKind::DimMismatch, "bipartite state: matrix is " + std::to_string(rho_.rows()) + "x" +
                                            std::to_string(rho_.cols()) + ", dims " + std::to_string(dim_a) + "*" +
                                            std::to_string(dim_b));
  require_state(rho_, kStateTolerance, "bipartite state");
  const auto ev = herm_eig(rho_).eigenvalues;
  if (ev.front() < -kStateTolerance) throw Error(ErrorKind::NotState, "bipartite state has eigenvalue " + std::to_string(ev.front()));
}

double von_neumann_entropy(const CMatrix& rho) {
  require_state(rho, 1e-8, "von_neumann_entropy");
  const HermEig eig = herm_eig(rho);
  if (eig.eigenvalues.front() < -kPsdTolerance * std::max(1.0, eig.eigenvalues.back()))
    throw Error(ErrorKind::NotState, "von_neumann_entropy: negative eigenvalue " + std::to_string(eig.eigenvalues.front()));
  return entropy_of(eig.eigenvalues);
}

double relative_entropy(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows() || !rho.is_square() || !sigma.is_square())
    throw Error(ErrorKind::DimMismatch, "relative_entropy: shapes differ");
  const HermEig se = herm_eig(sigma);
  if (off_support(rho, matrix_func(se, MatrixFunction::power(0.0))) > kSupportResidual) return kInf;
  const HermEig re = herm_eig(rho);
  const double a = (rho * matrix_func(re, MatrixFunction::log2())).trace().real();
  const double b = (rho * matrix_func(se, MatrixFunction::log2())).trace().real();
  return a - b;
}

double sandwiched_renyi(const CMatrix& rho, const CMatrix& sigma, double p) {
  require_exponent(p, true);
  if (rho.rows() != sigma.rows() || !rho.is_square() || !sigma.is_square())
    throw Error(ErrorKind::DimMismatch, "sandwiched_renyi: shapes differ");
  const HermEig se = herm_eig(sigma);
  if (off_support(rho, matrix_func(se, MatrixFunction::power(0.0))) > kSupportResidual) return kInf;
  const double pc = conjugate_exponent(p);
  const CMatrix s = matrix_func(se, MatrixFunction::pinv_power(-1.0 / (2.0 * pc)));
  const CMatrix gamma = hermitian_part(s * rho * s);
  return pc * std::log2(schatten_norm_hermitian(gamma, p));
}

double coherent_information(const BipartiteState& w) {
  return von_neumann_entropy(w.marginal_b()) - von_neumann_entropy(w.rho());
}

double mutual_information(const BipartiteState& w) {
  return von_neumann_entropy(w.marginal_a()) + von_neumann_entropy(w.marginal_b()) - von_neumann_entropy(w.rho());
}

RenyiOptimum conditional_renyi(const BipartiteState& w, double p, const RenyiOptimizerOptions& opts) {
  require_exponent(p, false);
  RenyiOptimum out = minimize_over_b(w.rho(), w.dim_a(), w.dim_b(), p, w.marginal_b(), opts);
  out.value = -out.divergence;
  return out;
}

RenyiOptimum renyi_mutual_information(const BipartiteState& w, double p, const RenyiOptimizerOptions& opts) {
  require_exponent(p, false);
  // D_p(rho || rho_A (x) sigma) = D_p-form of rho~ against 1 (x) sigma, with
  // rho~ = (rho_A^(-g/2) (x) 1) rho (rho_A^(-g/2) (x) 1) (unnormalized).
  const double g = (p - 1.0) / p;
  const CMatrix ra = matrix_func(w.marginal_a(), MatrixFunction::pinv_power(-g / 2.0));
  const CMatrix big = tensor(ra, CMatrix::identity(w.dim_b()));
  const CMatrix twisted = hermitian_part(big * w.rho() * big);
  RenyiOptimum out = minimize_over_b(twisted, w.dim_a(), w.dim_b(), p, w.marginal_b(), opts);
  out.value = out.divergence;
  return out;
}

double renyi_coherent_information(const BipartiteState& w, double p, const RenyiOptimizerOptions& opts) {
  return -conditional_renyi(w, p, opts).value;
}

double s1_sp_norm(const BipartiteState& w, double p, const RenyiOptimizerOptions& opts) {
  return std::exp2(-conditional_renyi(w, p, opts).value / conjugate_exponent(p));
}

double tau_f_log_f(const CMatrix& f) {
  if (!f.is_square()) throw Error(ErrorKind::DimMismatch, "tau_f_log_f: not square");
  const double d = static_cast<double>(f.rows());
  const double tau = f.trace().real() / d;
  if (std::abs(tau - 1.0) > 1e-10) throw Error(ErrorKind::NotNormalized, "tau(f) = " + std::to_string(tau));
  const HermEig eig = herm_eig(f);
  const double lmax = std::max(0.0, eig.eigenvalues.back());
  if (eig.eigenvalues.front() < -kPsdTolerance * std::max(1.0, lmax))
    throw Error(ErrorKind::NotPSD, "tau_f_log_f: negative eigenvalue");
  double s = 0.0;
  for (double v : eig.eigenvalues)
    if (v > kSupportCutoff * lmax) s += v * std::log2(v);
  return s / d;
}

double tau_f_log_f(const Symbol& f) { return tau_f_log_f(f.f); }

double symbol_renyi_gap(const CMatrix& f, double p) {
  require_exponent(p, true);
  if (std::isinf(p)) return std::log2(schatten_norm_hermitian(f, kInf));
  return conjugate_exponent(p) * std::log2(normalized_p_norm(f, p));
}

double binary_entropy(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorKind::OutOfRange, "binary_entropy: " + std::to_string(lambda));
  auto term = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
  return term(lambda) + term(1.0 - lambda);
}

double conjugate_exponent(double p) {
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

}  // namespace trocap
