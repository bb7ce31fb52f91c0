// Acceptance run: one PASS/FAIL line per criterion with pinned tolerances and
// runtime budgets. With --known-fail, the exit status is 0 exactly when the
// failing set equals the listed one, so a known failure stays visible without
// breaking ctest and an unexpected pass or failure is still caught.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "trocap/algebra.hpp"
#include "trocap/builders.hpp"
#include "trocap/capacity.hpp"
#include "trocap/entropy.hpp"
#include "trocap/random.hpp"
#include "trocap/verify.hpp"

using namespace trocap;
namespace qn = trocap::quantity;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Independent of the library's binary entropy.
double h(double x) {
  double s = 0.0;
  if (x > 0.0) s -= x * std::log2(x);
  if (x < 1.0) s -= (1.0 - x) * std::log2(1.0 - x);
  return s;
}

Symbol trivial_symbol(const StinespringSpace& s) { return validate_symbol(s, CMatrix::identity(s.dim_env)); }

std::vector<std::vector<double>> pauli_distributions() {
  Rng rng = make_rng(0xacce, 8);
  std::uniform_real_distribution<double> u(0.02, 1.0);
  std::vector<std::vector<double>> out;
  for (int k = 0; k < 3; ++k) {
    std::vector<double> p(4);
    for (double& x : p) x = u(rng);
    const double t = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& x : p) x /= t;
    out.push_back(p);
  }
  return out;
}

// The verification families: dephasing q in {0, 0.3, 0.7, 1}, Phi_alpha for
// alpha in {0, 0.5, 1}, and Pauli random unitaries with three random f.
std::vector<std::pair<std::string, ModifiedFamily>> verification_families() {
  std::vector<std::pair<std::string, ModifiedFamily>> fams;
  for (double q : {0.0, 0.3, 0.7, 1.0}) fams.emplace_back("dephasing q=" + num(q), dephasing_family(q));
  for (double a : {0.0, 0.5, 1.0}) fams.emplace_back("phi_alpha a=" + num(a), phi_alpha(a));
  int k = 0;
  for (const auto& p : pauli_distributions()) fams.emplace_back("pauli #" + std::to_string(k++), group_random_unitary(pauli_rep(), p));
  return fams;
}

Outcome criterion1() {
  Outcome o;
  for (double q : {0.0, 0.3, 0.7, 1.0}) {
    const ModifiedFamily fam = dephasing_family(q);
    const double target = 1.0 - h((1.0 + q) / 2.0);
    const double upper = comparison_bounds(fam.space, fam.symbol).at(qn::Q).upper;
    const double formula = negative_cb_entropy_formula(fam.space, fam.symbol);
    OptimizerOptions opts;
    opts.restarts = 32;
    const double numeric = negative_cb_entropy_numeric(fam.channel, opts).value;
    const double one_shot = one_shot_q(fam.channel, opts).value;
    o.require(std::abs(upper - target) <= 1e-4, "q=" + num(q) + " upper off by " + num(upper - target));
    o.require(std::abs(formula - target) <= 1e-4, "q=" + num(q) + " -S_cb formula off by " + num(formula - target));
    o.require(std::abs(numeric - target) <= 1e-4, "q=" + num(q) + " -S_cb numeric off by " + num(numeric - target));
    o.require(std::abs(one_shot - target) <= 1e-3, "q=" + num(q) + " one-shot off by " + num(one_shot - target));
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  for (double a : {0.0, 0.5, 1.0}) {
    const ModifiedFamily fam = phi_alpha(a);
    const double target = 1.0 - h((1.0 + a) / 2.0);
    const double upper = comparison_bounds(fam.space, fam.symbol).at(qn::Q).upper;
    OptimizerOptions opts;
    opts.restarts = 16;
    const CMatrix half = CMatrix::identity(2) * 0.5;
    opts.initial_states = {phi_alpha_block_input(half, false), phi_alpha_block_input(half, true)};
    const double one_shot = one_shot_q(fam.channel, opts).value;
    o.require(std::abs(upper - target) <= 1e-9, "a=" + num(a) + " upper off by " + num(upper - target));
    o.require(std::abs(one_shot - target) <= 1e-3, "a=" + num(a) + " one-shot off by " + num(one_shot - target));
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  const BoundReport r = tro_capacities({{2, 2, 1}, {3, 1, 1}});
  o.require(std::abs(r.at(qn::Q).lower - std::log2(3.0)) <= 1e-12 && r.at(qn::Q).upper == r.at(qn::Q).lower, "Q");
  o.require(std::abs(r.at(qn::C).lower - std::log2(5.0)) <= 1e-12 && r.at(qn::C).upper == r.at(qn::C).lower, "C");
  o.require(std::abs(r.at(qn::C_EA).lower - std::log2(13.0)) <= 1e-12, "C_EA");
  OptimizerOptions opts;
  opts.restarts = 64;
  const double one_shot = one_shot_q(partial_trace_sum_channel({{2, 2}, {3, 1}}), opts).value;
  o.require(std::abs(one_shot - std::log2(3.0)) <= 1e-3, "one-shot off by " + num(one_shot - std::log2(3.0)));
  return o;
}

Outcome criterion4() {
  Outcome o;
  VerifyOptions opts;
  opts.samples = 100;
  opts.seed = 0xacce4;
  double worst = kInf;
  for (const auto& [name, fam] : verification_families()) {
    const VerificationReport r = verify_local_comparison(fam.space, fam.symbol, opts);
    worst = std::min(worst, r.worst_slack);
    o.require(r.passed() && r.tolerance == 1e-9, name + ": " + std::to_string(r.failures.size()) + " violations");
  }
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("worst slack ") + num(worst);
  return o;
}

Outcome criterion5() {
  Outcome o;
  VerifyOptions opts;
  opts.samples = 50;
  opts.seed = 0xacce5;
  double worst = kInf;
  for (const auto& [name, fam] : verification_families()) {
    const VerificationReport r = verify_entropic(fam.space, fam.symbol, opts);
    worst = std::min(worst, r.worst_slack);
    o.require(r.passed() && r.tolerance == 1e-7, name + ": " + std::to_string(r.failures.size()) + " violations");
  }
  const StinespringSpace plain = stinespring_space(partial_trace_sum_channel({{2, 1}, {1, 2}}));
  const VerificationReport id = verify_entropic(plain, trivial_symbol(plain), opts);
  const double collapse = std::max(std::abs(id.worst_slack), std::abs(id.max_slack));
  o.require(id.passed() && collapse <= 1e-8, "identity symbol gaps up to " + num(collapse));
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("worst slack ") + num(worst) + ", identity gap " + num(collapse);
  return o;
}

Outcome criterion6() {
  Outcome o;
  const ModifiedFamily deph = dephasing_family(0.45);
  Rng rng = make_rng(0xacce6, 0);
  const CMatrix stacked = random_unitary(12, rng);
  std::vector<CMatrix> kraus;
  for (std::size_t e = 0; e < 3; ++e) kraus.push_back(stacked.block(4 * e, 0, 4, 4));
  const StinespringSpace other = stinespring_space(Channel::from_kraus(kraus, 1e-9));
  VerifyOptions opts;
  opts.samples = 20;
  opts.seed = 0xacce6;
  const VerificationReport r = verify_tensor_symbol(deph.space, deph.symbol, other, trivial_symbol(other), opts);
  o.require(r.passed() && r.tolerance == 1e-9, std::to_string(r.failures.size()) + " mismatches");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("worst slack ") + num(r.worst_slack);
  return o;
}

Outcome criterion7() {
  Outcome o;
  const ModifiedFamily phi = phi_alpha(0.0);
  o.require(is_tro(phi.space.basis).is_tro, "Phi_0 space not detected as a TRO");
  std::vector<TroBlock> blocks = tro_block_decomposition(phi.space).blocks;
  std::vector<std::pair<std::size_t, std::size_t>> nm;
  for (const auto& b : blocks) nm.emplace_back(b.n, b.m);
  std::sort(nm.begin(), nm.end());
  const std::vector<std::pair<std::size_t, std::size_t>> expected{{1, 1}, {1, 1}, {1, 2}};
  o.require(nm == expected, "Phi_0 blocks differ");
  const std::vector<CMatrix> upper{CMatrix::unit(2, 2, 0, 0), CMatrix::unit(2, 2, 0, 1), CMatrix::unit(2, 2, 1, 1)};
  const TroCheck c = is_tro(upper);
  o.require(!c.is_tro, "upper-triangular span accepted");
  o.require(c.x == 2 && c.y == 1 && c.z == 0 && max_abs_diff(c.product, CMatrix::unit(2, 2, 1, 0)) <= 1e-15,
            "witness is not (e22, e12, e11) -> e21");
  return o;
}

Outcome criterion8() {
  Outcome o;
  for (const auto& p : pauli_distributions()) {
    const ModifiedFamily fam = group_random_unitary(pauli_rep(), p);
    double hp = 0.0;
    for (double x : p) hp -= x * std::log2(x);
    const double upper = comparison_bounds(fam.space, fam.symbol).at(qn::Q).upper;
    o.require(std::abs(upper - (2.0 - hp)) <= 1e-9, "upper off by " + num(upper - (2.0 - hp)));
  }
  const ModifiedFamily uniform = group_random_unitary(pauli_rep(), {0.25, 0.25, 0.25, 0.25});
  const Bound q = comparison_bounds(uniform.space, uniform.symbol).at(qn::Q);
  o.require(std::abs(q.lower) <= 1e-12 && std::abs(q.upper) <= 1e-12, "uniform window [" + num(q.lower) + ", " + num(q.upper) + "]");
  return o;
}

Outcome criterion9() {
  Outcome o;
  Rng rng = make_rng(0xacce9, 0);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  double worst_div = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> r(4), s(4);
    for (double& x : r) x = u(rng);
    for (double& x : s) x = u(rng);
    const double tr = std::accumulate(r.begin(), r.end(), 0.0), ts = std::accumulate(s.begin(), s.end(), 0.0);
    for (double& x : r) x /= tr;
    for (double& x : s) x /= ts;
    const CMatrix v = random_unitary(4, rng);
    const CMatrix rho = hermitian_part(v * CMatrix::diag(r) * v.adjoint());
    const CMatrix sigma = hermitian_part(v * CMatrix::diag(s) * v.adjoint());
    for (double p : {1.5, 2.0, 3.0}) {
      double sum = 0.0;
      for (int i = 0; i < 4; ++i) sum += std::pow(r[i], p) * std::pow(s[i], 1.0 - p);
      const double classical = std::log2(sum) / (p - 1.0);
      worst_div = std::max(worst_div, std::abs(sandwiched_renyi(rho, sigma, p) - classical));
    }
  }
  o.require(worst_div <= 1e-9, "divergence off by " + num(worst_div));

  double worst_cond = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<double> joint(4);
    for (double& x : joint) x = u(rng);
    const double t = std::accumulate(joint.begin(), joint.end(), 0.0);
    for (double& x : joint) x /= t;
    for (double p : {1.5, 2.0, 3.0}) {
      // min over sigma = diag(s, 1 - s) of D_p(P || 1 (x) sigma), index a*2 + b.
      double best = kInf;
      for (int k = 1; k < 1000; ++k) {
        const double sb[2] = {k * 1e-3, 1.0 - k * 1e-3};
        double sum = 0.0;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) sum += std::pow(joint[a * 2 + b], p) * std::pow(sb[b], 1.0 - p);
        best = std::min(best, std::log2(sum) / (p - 1.0));
      }
      const BipartiteState w(CMatrix::diag(joint), 2, 2);
      worst_cond = std::max(worst_cond, std::abs(conditional_renyi(w, p).value - (-best)));
    }
  }
  o.require(worst_cond <= 1e-4, "conditional entropy off by " + num(worst_cond));
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("divergence ") + num(worst_div) + ", conditional " + num(worst_cond);
  return o;
}

Outcome criterion10() {
  Outcome o;
  const std::vector<TroBlock> blocks{{2, 1, 1}, {3, 1, 1}};
  const std::vector<double> grid{0.0, 0.5, 1.0, 1.5, 2.0};
  double worst_norm = 0.0;
  std::size_t decreases = 0, steps = 0;
  std::string first;
  for (double mu : grid) {
    std::vector<RegionPoint> row;
    for (double lambda : grid) {
      row.push_back(cqe_region_vertices(blocks, lambda, mu));
      row.push_back(rps_region_vertices(blocks, lambda, mu));
      for (std::size_t k = row.size() - 2; k < row.size(); ++k) {
        const auto& d = row[k].distribution;
        worst_norm = std::max(worst_norm, std::abs(std::accumulate(d.begin(), d.end(), 0.0) - 1.0));
      }
    }
    for (std::size_t i = 2; i < row.size(); ++i)
      for (std::size_t c = 0; c < row[i].constraints.size(); ++c) {
        ++steps;
        const double before = row[i - 2].constraints[c].rhs, after = row[i].constraints[c].rhs;
        if (after < before) {
          ++decreases;
          if (first.empty())
            first = row[i].constraints[c].name + " " + num(before) + " -> " + num(after) + " at mu=" + num(mu) +
                    ", lambda " + num(row[i - 2].lambda) + " -> " + num(row[i].lambda);
        }
      }
  }
  o.require(worst_norm <= 1e-12, "normalization off by " + num(worst_norm));
  o.require(decreases == 0, std::to_string(decreases) + " of " + std::to_string(steps) +
                                " lambda steps decrease a right-hand side (first: " + first + ")");
  if (o.pass) o.detail = "normalization " + num(worst_norm);
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> known_fail;
  app.add_option("--known-fail", known_fail, "Criteria expected to fail");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "dephasing capacity formula", 10.0, criterion1},
      {2, "Phi_alpha tight window", 30.0, criterion2},
      {3, "direct sums of partial traces", 60.0, criterion3},
      {4, "local comparison suite", 60.0, criterion4},
      {5, "entropic sandwich suite", 600.0, criterion5},
      {6, "tensor symbol coherence", 600.0, criterion6},
      {7, "structure detection", 1.0, criterion7},
      {8, "Pauli bound consistency", 600.0, criterion8},
      {9, "sandwiched Renyi oracle equivalence", 600.0, criterion9},
      {10, "region vertices", 600.0, criterion10},
  };

  std::set<int> failed;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_seconds) o.require(false, "over budget");
    if (!o.pass) failed.insert(c.id);
    std::printf("criterion %2d %-38s %s  [%.2fs / %.0fs]  %s\n", c.id, c.title, o.pass ? "PASS" : "FAIL", secs,
                c.budget_seconds, o.detail.c_str());
  }
  std::fflush(stdout);
  const std::set<int> expected(known_fail.begin(), known_fail.end());
  if (known_fail.empty()) return failed.empty() ? 0 : 1;
  if (failed != expected) {
    std::printf("failing set differs from --known-fail\n");
    return 1;
  }
  return 0;
}
