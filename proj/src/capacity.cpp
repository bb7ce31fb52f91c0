#include "trocap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "trocap/algebra.hpp"
#include "trocap/entropy.hpp"
#include "trocap/error.hpp"
#include "trocap/parallel.hpp"
#include "trocap/random.hpp"

namespace trocap {

namespace q = quantity;

// ---- BoundReport -----------------------------------------------------------

void BoundReport::set(const std::string& name, double lower, double upper, std::string provenance) {
  entries_[name] = Bound{lower, upper, std::move(provenance)};
}

void BoundReport::tighten(const std::string& name, double lower, double upper, const std::string& provenance) {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    set(name, lower, upper, provenance);
    return;
  }
  Bound& b = it->second;
  bool changed = false;
  if (lower > b.lower) {
    b.lower = lower;
    changed = true;
  }
  if (upper < b.upper) {
    b.upper = upper;
    changed = true;
  }
  if (changed && b.provenance.find(provenance) == std::string::npos) b.provenance += "; " + provenance;
}

void BoundReport::merge(const BoundReport& other) {
  for (const auto& [name, b] : other.entries_) tighten(name, b.lower, b.upper, b.provenance);
  for (const auto& n : other.notes)
    if (std::find(notes.begin(), notes.end(), n) == notes.end()) notes.push_back(n);
}

void BoundReport::propagate_orderings() {
  // (smaller, larger): a lower bound on the smaller quantity bounds the larger.
  static const std::pair<const char*, const char*> kOrder[] = {
      {q::Q1, q::Q}, {q::Q, q::P}, {q::Q, q::Q_dagger}, {q::P, q::P_dagger}, {q::P, q::C}, {q::C, q::C_dagger},
  };
  for (const auto& [lo, hi] : kOrder) {
    auto a = entries_.find(lo);
    auto b = entries_.find(hi);
    if (a == entries_.end() || b == entries_.end()) continue;
    if (a->second.lower > b->second.lower) {
      b->second.lower = a->second.lower;
      const std::string via = std::string("via ") + lo + " <= " + hi;
      if (b->second.provenance.find(via) == std::string::npos) b->second.provenance += "; " + via;
    }
  }
}

const Bound& BoundReport::at(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw Error(ErrorKind::OutOfRange, "bound report has no entry " + name);
  return it->second;
}

bool BoundReport::consistent(double tol) const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [tol](const auto& e) { return e.second.lower <= e.second.upper + tol; });
}

// ---- closed forms ----------------------------------------------------------

BoundReport tro_capacities(const std::vector<TroBlock>& blocks) {
  if (blocks.empty()) throw Error(ErrorKind::EmptyBlocks, "tro_capacities: no blocks");
  double sum = 0.0, sum_sq = 0.0, largest = 0.0;
  for (const auto& b : blocks) {
    if (b.n == 0) throw Error(ErrorKind::OutOfRange, "tro_capacities: block with n = 0");
    const double n = static_cast<double>(b.n);
    sum += n;
    sum_sq += n * n;
    largest = std::max(largest, n);
  }
  const double qv = std::log2(largest);
  const double cv = std::log2(sum);
  BoundReport r;
  const std::string exact = "exact: direct sum of partial traces";
  const std::string converse = "exact: strong converse holds for direct sums of partial traces";
  r.set(q::C, cv, cv, exact);
  r.set(q::Q, qv, qv, exact);
  r.set(q::P, qv, qv, exact);
  r.set(q::Q1, qv, qv, exact);
  r.set(q::C_EA, std::log2(sum_sq), std::log2(sum_sq), exact);
  r.set(q::C_dagger, cv, cv, converse);
  r.set(q::Q_dagger, qv, qv, converse);
  r.set(q::P_dagger, qv, qv, converse);
  return r;
}

BoundReport comparison_bounds(const StinespringSpace& space, const Symbol& f) {
  const auto& cert = f.certificate;
  if (!cert.valid) throw Error(ErrorKind::InvalidSymbol, "comparison_bounds: symbol has no valid certificate");
  if (cert.space_digest != space.digest())
    throw Error(ErrorKind::InvalidSymbol, "comparison_bounds: certificate was issued for a different space");
  if (cert.tro_blocks.empty()) throw Error(ErrorKind::InvalidSymbol, "comparison_bounds: certificate has no TRO blocks");

  const double gap = tau_f_log_f(f);
  const BoundReport base = tro_capacities(cert.tro_blocks);
  const bool tight_lower = cert.space_is_tro;
  std::ostringstream g;
  g.precision(12);
  g << gap;
  const std::string window = "comparison window: TRO value + tau(f log f) = " + g.str();
  const std::string converse = "strong converse window: TRO value + tau(f log f) = " + g.str();
  const std::string lower_note = tight_lower ? "" : " (space is not a TRO; lower bound 0)";

  BoundReport r;
  for (const char* name : {q::C, q::Q, q::P, q::C_EA, q::Q1}) {
    const double v = base.at(name).lower;
    r.set(name, tight_lower ? v : 0.0, v + gap, window + lower_note);
  }
  for (const char* name : {q::C_dagger, q::Q_dagger, q::P_dagger}) {
    const double v = base.at(name).lower;
    r.set(name, tight_lower ? v : 0.0, v + gap, converse + lower_note);
  }
  r.notes.push_back("potential capacities chi^(p), Q^(p), P^(p) share the C, Q, P windows");
  r.notes.push_back("P is reported only through its window; no private one-shot optimizer is run");
  return r;
}

// ---- multi-start ascent over densities -------------------------------------

namespace {

struct EntropyLog {
  double entropy = 0.0;
  CMatrix log;
};

// Entropy, and log2 on the support, from one eigendecomposition.
EntropyLog entropy_and_log(const CMatrix& m) {
  const HermEig eig = herm_eig_unchecked(m);
  const double cutoff = kSupportCutoff * std::max(0.0, eig.eigenvalues.back());
  EntropyLog out;
  // The entropy keeps every positive eigenvalue; dropping the ones below the
  // cutoff would overstate differences of entropies by ~1e-9.
  for (double l : eig.eigenvalues)
    if (l > 0.0) out.entropy -= l * std::log2(l);
  out.log = spectral_apply(eig, [cutoff](double l) { return l > cutoff ? std::log2(l) : 0.0; });
  return out;
}

// Returns the objective at rho and writes its gradient (a Hermitian matrix Z
// with d value = tr(Z d rho)) when asked.
using Objective = std::function<double(const CMatrix& rho, CMatrix* grad)>;

struct Candidate {
  double value = -kInf;
  CMatrix rho;
};

CMatrix normalized(CMatrix g) {
  const double n = g.frobenius_norm();
  return g * (1.0 / n);
}

// Gradient ascent on G with rho = G G^dagger, ||G||_F = 1. For that
// parametrization the ascent direction is X = 2 (Z - tr(Z rho)) G and the
// directional derivative along X is ||X||^2.
Candidate ascend(const Objective& fn, CMatrix g, int max_iterations) {
  g = normalized(std::move(g));
  const std::size_t d = g.rows();
  CMatrix rho = g * g.adjoint();
  CMatrix z;
  double val = fn(rho, &z);
  double eta = 0.5;
  int stall = 0;
  for (int it = 0; it < max_iterations; ++it) {
    const double c = (z * rho).trace().real();
    const CMatrix x = (z - CMatrix::identity(d) * c) * g * 2.0;
    const double gn2 = std::pow(x.frobenius_norm(), 2);
    if (gn2 < 1e-26) break;
    bool accepted = false;
    double gain = 0.0;
    while (eta > 1e-14) {
      CMatrix gt = normalized(g + x * eta);
      CMatrix rt = gt * gt.adjoint();
      CMatrix zt;
      const double vt = fn(rt, &zt);
      if (vt >= val + 1e-4 * eta * gn2) {
        gain = vt - val;
        g = std::move(gt);
        rho = std::move(rt);
        z = std::move(zt);
        val = vt;
        accepted = true;
        eta = std::min(eta * 2.0, 1e3);
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;
    stall = gain < 1e-13 * std::max(1.0, std::abs(val)) ? stall + 1 : 0;
    if (stall >= 10) break;
  }
  return {val, hermitian_part(rho)};
}

CMatrix sqrt_density(const CMatrix& rho) { return matrix_func(hermitian_part(rho), MatrixFunction::power(0.5)); }

// Starting factors G: |0><0|, 1/d, the caller's pool, then random Ginibre.
std::vector<CMatrix> starting_factors(std::size_t d, const OptimizerOptions& opts) {
  if (opts.restarts < 0) throw Error(ErrorKind::OutOfRange, "optimizer: negative restart count");
  std::vector<CMatrix> starts;
  starts.push_back(CMatrix::unit(d, d, 0, 0));
  starts.push_back(CMatrix::identity(d));
  for (const auto& rho : opts.initial_states) {
    if (rho.rows() != d || rho.cols() != d)
      throw Error(ErrorKind::DimMismatch, "optimizer: initial state has the wrong dimension");
    starts.push_back(sqrt_density(rho));
  }
  for (int r = 0; r < opts.restarts; ++r) {
    Rng rng = make_rng(opts.seed, static_cast<std::uint64_t>(r));
    starts.push_back(random_gaussian(d, d, rng));
  }
  return starts;
}

template <typename Run>
OptimizerResult best_of(const std::vector<CMatrix>& starts, unsigned threads, Run&& run) {
  std::vector<Candidate> results(starts.size());
  parallel_for(starts.size(), threads, [&](std::size_t i) { results[i] = run(starts[i]); });
  OptimizerResult best;
  best.value = -kInf;
  for (std::size_t i = 0; i < results.size(); ++i)
    if (results[i].value > best.value) {
      best.value = results[i].value;
      best.rho = results[i].rho;
      best.start = static_cast<int>(i);
    }
  return best;
}

}  // namespace

OptimizerResult one_shot_q(const Channel& ch, const OptimizerOptions& opts) {
  const Objective fn = [&ch](const CMatrix& rho, CMatrix* grad) {
    const EntropyLog out = entropy_and_log(apply(ch, rho));
    const EntropyLog env = entropy_and_log(complement_apply(ch, rho));
    if (grad) *grad = hermitian_part(complement_apply_adjoint(ch, env.log) - apply_adjoint(ch, out.log));
    return out.entropy - env.entropy;
  };
  return best_of(starting_factors(ch.dim_in(), opts), opts.threads,
                 [&](const CMatrix& g) { return ascend(fn, g, opts.max_iterations); });
}

OptimizerResult negative_cb_entropy_numeric(const Channel& ch, const OptimizerOptions& opts) {
  const Objective fn = [&ch](const CMatrix& rho, CMatrix* grad) {
    const EntropyLog in = entropy_and_log(rho);
    const EntropyLog env = entropy_and_log(complement_apply(ch, rho));
    if (grad) *grad = hermitian_part(complement_apply_adjoint(ch, env.log) - in.log);
    return in.entropy - env.entropy;
  };
  return best_of(starting_factors(ch.dim_in(), opts), opts.threads,
                 [&](const CMatrix& g) { return ascend(fn, g, opts.max_iterations); });
}

double negative_cb_entropy_formula(const StinespringSpace& space, const Symbol& f) {
  if (!f.certificate.valid || f.certificate.space_digest != space.digest())
    throw Error(ErrorKind::InvalidSymbol, "negative_cb_entropy: symbol is not certified for this space");
  const Channel base = channel_from_space(space);
  const double ratio = static_cast<double>(space.dim_in) / static_cast<double>(space.dim_env);
  const CMatrix env_unit = complement_apply(base, CMatrix::identity(space.dim_in));
  const double dev = max_abs_diff(env_unit, CMatrix::identity(space.dim_env) * ratio);
  if (dev > 1e-9) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "complementary channel is not unital up to |A'|/|E|; deviation " << dev;
    throw Error(ErrorKind::HypothesisFailed, msg.str());
  }
  return std::log2(ratio) + tau_f_log_f(f);
}

double fidelity_bound(double m, double q1p, double p) {
  if (!(p > 1.0)) throw Error(ErrorKind::BadExponent, "fidelity_bound: p must exceed 1");
  if (!(m >= 1.0)) throw Error(ErrorKind::OutOfRange, "fidelity_bound: code size below 1");
  const double pp = conjugate_exponent(p);
  return std::pow(m, -1.0 / pp) * std::exp2(q1p / pp);
}

namespace {

// -H_p(A|B) of (id (x) N)(psi) for the purification psi(a, a') = G(a', a) of G G^dagger.
double renyi_value(const Channel& ch, const CMatrix& g, double p, const RenyiOptimizerOptions& ropts) {
  const std::size_t d = ch.dim_in();
  const double norm = g.frobenius_norm();
  std::vector<cplx> psi(d * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t ap = 0; ap < d; ++ap) psi[a * d + ap] = g(ap, a) / norm;
  const CMatrix omega = hermitian_part(apply_with_ancilla(ch, CMatrix::outer(psi, psi), d));
  try {
    return renyi_coherent_information(BipartiteState(omega * (1.0 / omega.trace().real()), d, ch.dim_out()), p,
                                      ropts);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::OptimizerFailed) return -kInf;
    throw;
  }
}

}  // namespace

OptimizerResult renyi_coherent_channel(const Channel& ch, double p, const OptimizerOptions& opts) {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorKind::BadExponent, "renyi_coherent_channel: need 1 < p < inf");
  OptimizerOptions seeded = opts;
  seeded.initial_states.push_back(one_shot_q(ch, opts).rho);
  const std::vector<CMatrix> starts = starting_factors(ch.dim_in(), seeded);
  const RenyiOptimizerOptions ropts;
  const int budget = std::min(opts.max_iterations, 240);
  return best_of(starts, opts.threads, [&](const CMatrix& g0) {
    // (1+1) evolution strategy with the one-fifth success rule.
    Rng rng = make_rng(opts.seed ^ 0x5e1ec7ULL, fnv1a(g0));
    CMatrix g = normalized(g0);
    double val = renyi_value(ch, g, p, ropts);
    double step = 0.2;
    for (int k = 0; k < budget && step > 1e-6; ++k) {
      const CMatrix dir = normalized(random_gaussian(g.rows(), g.cols(), rng));
      CMatrix trial = normalized(g + dir * step);
      const double v = renyi_value(ch, trial, p, ropts);
      if (v > val) {
        g = std::move(trial);
        val = v;
        step *= 1.5;
      } else {
        step *= 0.9;
      }
    }
    return Candidate{val, hermitian_part(g * g.adjoint())};
  });
}

// ---- capacity regions ------------------------------------------------------

namespace {

RegionPoint region_point(const std::vector<TroBlock>& blocks, double lambda, double mu, double offset) {
  if (blocks.empty()) throw Error(ErrorKind::EmptyBlocks, "region: no blocks");
  if (!(lambda >= 0.0) || !(mu >= 0.0)) throw Error(ErrorKind::OutOfRange, "region: lambda and mu must be >= 0");
  const double s = (offset + lambda + mu) / (1.0 + mu);
  std::vector<double> logs;
  for (const auto& b : blocks) {
    if (b.n == 0) throw Error(ErrorKind::OutOfRange, "region: block with n = 0");
    logs.push_back(std::log2(static_cast<double>(b.n)));
  }
  // Weights n^s, scaled by the largest for stability.
  const double top = s * *std::max_element(logs.begin(), logs.end());
  RegionPoint pt;
  pt.lambda = lambda;
  pt.mu = mu;
  double total = 0.0;
  for (double l : logs) {
    pt.distribution.push_back(std::exp2(s * l - top));
    total += pt.distribution.back();
  }
  for (double& v : pt.distribution) v /= total;
  return pt;
}

void entropy_terms(const RegionPoint& pt, const std::vector<TroBlock>& blocks, double& h, double& avg_log) {
  h = 0.0;
  avg_log = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const double p = pt.distribution[i];
    if (p > 0.0) h -= p * std::log2(p);
    avg_log += p * std::log2(static_cast<double>(blocks[i].n));
  }
}

}  // namespace

RegionPoint cqe_region_vertices(const std::vector<TroBlock>& blocks, double lambda, double mu) {
  RegionPoint pt = region_point(blocks, lambda, mu, 2.0);
  double h, e;
  entropy_terms(pt, blocks, h, e);
  pt.constraints = {{"C+2Q", h + 2.0 * e}, {"Q+E", e}, {"C+Q+E", h + e}};
  return pt;
}

RegionPoint rps_region_vertices(const std::vector<TroBlock>& blocks, double lambda, double mu) {
  RegionPoint pt = region_point(blocks, lambda, mu, 1.0);
  double h, e;
  entropy_terms(pt, blocks, h, e);
  pt.constraints = {{"R+P", h + e}, {"P+S", e}, {"R+P+S", h + e}};
  return pt;
}

// ---- assembly --------------------------------------------------------------

BoundReport assemble_bounds(const StinespringSpace& base, const std::optional<Symbol>& f, const Channel& ch,
                            const OptimizerOptions& opts) {
  BoundReport r;
  const double dim_bound = std::log2(static_cast<double>(std::min(ch.dim_in(), ch.dim_out())));
  if (f) {
    r = comparison_bounds(base, *f);
  } else if (is_tro(base.basis).is_tro) {
    r = tro_capacities(tro_block_decomposition(base).blocks);
  } else {
    const std::string dims = "dimension bound log min(|A'|, |B|)";
    for (const char* name : {q::C, q::Q, q::P, q::Q1, q::C_dagger, q::Q_dagger, q::P_dagger})
      r.set(name, 0.0, dim_bound, dims);
    r.set(q::C_EA, 0.0, 2.0 * dim_bound, "dimension bound 2 log min(|A'|, |B|)");
  }

  const OptimizerResult one_shot = one_shot_q(ch, opts);
  std::ostringstream prov;
  prov << "one-shot coherent information, best of " << (opts.restarts + 2 + opts.initial_states.size())
       << " starts";
  r.tighten(q::Q1, one_shot.value, kInf, prov.str());
  r.propagate_orderings();

  bool have_formula = false;
  if (f) {
    try {
      const double v = negative_cb_entropy_formula(base, *f);
      r.set(q::neg_S_cb, v, v, "negative cb-entropy formula log(|A'|/|E|) + tau(f log f)");
      have_formula = true;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::HypothesisFailed) throw;
      r.notes.push_back(std::string("negative cb-entropy formula not applicable: ") + e.what());
    }
  }
  if (!have_formula) {
    const OptimizerResult n = negative_cb_entropy_numeric(ch, opts);
    r.set(q::neg_S_cb, n.value, std::log2(static_cast<double>(ch.dim_in())),
          "negative cb-entropy, multi-start maximization over pure inputs");
  }
  return r;
}

}  // namespace trocap
