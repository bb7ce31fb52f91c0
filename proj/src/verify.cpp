#include "trocap/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "trocap/algebra.hpp"
#include "trocap/entropy.hpp"
#include "trocap/error.hpp"
#include "trocap/parallel.hpp"
#include "trocap/random.hpp"

namespace trocap {

void VerificationReport::record(std::uint64_t digest, const std::string& check, double slack) {
  ++checks;
  // NaN slack counts as a failure and poisons worst_slack on purpose.
  if (!(slack >= worst_slack)) worst_slack = slack;
  if (slack > max_slack) max_slack = slack;
  if (!(slack >= -tolerance)) failures.push_back({digest, check, slack});
}

void VerificationReport::merge(const VerificationReport& other) {
  samples += other.samples;
  checks += other.checks;
  if (!(other.worst_slack >= worst_slack)) worst_slack = other.worst_slack;
  if (other.max_slack > max_slack) max_slack = other.max_slack;
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
}

namespace {

void require_certified(const StinespringSpace& space, const Symbol& f) {
  if (!f.certificate.valid || f.certificate.space_digest != space.digest())
    throw Error(ErrorKind::InvalidSymbol, "verification needs a symbol certified for this space");
}

std::string with_p(const std::string& name, double p) {
  if (std::isinf(p)) return name + " p=inf";
  std::ostringstream s;
  s << name << " p=" << p;
  return s.str();
}

// Runs one sample per index in parallel and merges the per-sample reports in
// index order, so the result does not depend on the thread count.
VerificationReport run_samples(const std::string& theorem, double tolerance, const VerifyOptions& opts,
                               const std::function<void(Rng&, VerificationReport&)>& sample) {
  std::vector<VerificationReport> parts(opts.samples);
  parallel_for(opts.samples, opts.threads, [&](std::size_t i) {
    Rng rng = make_rng(opts.seed, i);
    parts[i].tolerance = tolerance;
    parts[i].samples = 1;
    sample(rng, parts[i]);
  });
  VerificationReport out;
  out.theorem = theorem;
  out.seed = opts.seed;
  out.tolerance = tolerance;
  for (const auto& part : parts) out.merge(part);
  return out;
}

constexpr double kComparisonExponents[] = {1.3, 2.0, 4.0, kInf};
constexpr double kRenyiExponents[] = {1.5, 2.0};

}  // namespace

VerificationReport verify_local_comparison(const StinespringSpace& space, const Symbol& f,
                                           const VerifyOptions& opts) {
  require_certified(space, f);
  const Channel base = channel_from_space(space);
  const Channel modified = modified_channel(space, f);
  const ConditionalExpectation onto_left(left_algebra(space));
  std::vector<double> f_norms;
  for (double p : kComparisonExponents) f_norms.push_back(std::log2(normalized_p_norm(f.f, p)));

  return run_samples("local_comparison", 1e-9, opts, [&](Rng& rng, VerificationReport& rep) {
    const CMatrix rho = random_density(space.dim_in, rng);
    CMatrix sigma = hermitian_part(onto_left(random_density(space.dim_out, rng)));
    sigma = sigma * (1.0 / sigma.trace().real());
    const std::uint64_t digest = fnv1a(sigma, fnv1a(rho));
    const CMatrix out = hermitian_part(apply(base, rho));
    const CMatrix out_f = hermitian_part(apply(modified, rho));

    for (std::size_t k = 0; k < std::size(kComparisonExponents); ++k) {
      const double p = kComparisonExponents[k];
      const double a = std::log2(schatten_norm_hermitian(out, p));
      const double b = std::log2(schatten_norm_hermitian(out_f, p));
      rep.record(digest, with_p("norm lower", p), b - a);
      rep.record(digest, with_p("norm upper", p), f_norms[k] + a - b);

      const CMatrix w = matrix_func(sigma, MatrixFunction::pinv_power(-1.0 / (2.0 * conjugate_exponent(p))));
      const double wa = std::log2(schatten_norm_hermitian(w * out * w, p));
      const double wb = std::log2(schatten_norm_hermitian(w * out_f * w, p));
      rep.record(digest, with_p("weighted lower", p), wb - wa);
      rep.record(digest, with_p("weighted upper", p), f_norms[k] + wa - wb);
    }
  });
}

VerificationReport verify_entropic(const StinespringSpace& space, const Symbol& f, const VerifyOptions& opts) {
  require_certified(space, f);
  const Channel base = channel_from_space(space);
  const Channel modified = modified_channel(space, f);
  const double gap = tau_f_log_f(f);
  std::vector<double> renyi_gaps;
  for (double p : kRenyiExponents) renyi_gaps.push_back(symbol_renyi_gap(f.f, p));
  const std::size_t d = space.dim_in;

  return run_samples("entropic", 1e-7, opts, [&](Rng& rng, VerificationReport& rep) {
    const CMatrix rho = random_density(d * d, rng);
    const std::uint64_t digest = fnv1a(rho);
    auto output = [&](const Channel& ch) {
      const CMatrix w = hermitian_part(apply_with_ancilla(ch, rho, d));
      return BipartiteState(w * (1.0 / w.trace().real()), d, space.dim_out);
    };
    const BipartiteState w = output(base);
    const BipartiteState wf = output(modified);

    const double h = von_neumann_entropy(w.rho()), hf = von_neumann_entropy(wf.rho());
    rep.record(digest, "H(AB) lower", hf - (h - gap));
    rep.record(digest, "H(AB) upper", h - hf);
    const double ic = coherent_information(w), icf = coherent_information(wf);
    rep.record(digest, "I_c lower", icf - ic);
    rep.record(digest, "I_c upper", ic + gap - icf);
    const double mi = mutual_information(w), mif = mutual_information(wf);
    rep.record(digest, "I lower", mif - mi);
    rep.record(digest, "I upper", mi + gap - mif);

    for (std::size_t k = 0; k < std::size(kRenyiExponents); ++k) {
      const double p = kRenyiExponents[k];
      try {
        const double icp = renyi_coherent_information(w, p), icpf = renyi_coherent_information(wf, p);
        rep.record(digest, with_p("I_c,p lower", p), icpf - icp);
        rep.record(digest, with_p("I_c,p upper", p), icp + renyi_gaps[k] - icpf);
        const double ip = renyi_mutual_information(w, p).value, ipf = renyi_mutual_information(wf, p).value;
        rep.record(digest, with_p("I_p lower", p), ipf - ip);
        rep.record(digest, with_p("I_p upper", p), ip + renyi_gaps[k] - ipf);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::OptimizerFailed) throw;
        rep.record(digest, with_p("Renyi optimizer failed", p), -kInf);
      }
    }
  });
}

VerificationReport verify_tensor_symbol(const StinespringSpace& space_a, const Symbol& f_a,
                                        const StinespringSpace& space_b, const Symbol& f_b,
                                        const VerifyOptions& opts) {
  require_certified(space_a, f_a);
  require_certified(space_b, f_b);
  const Channel na = modified_channel(space_a, f_a);
  const Channel nb = modified_channel(space_b, f_b);
  const Channel product = tensor_channels(na, nb);
  const StinespringSpace joint = stinespring_space(tensor_channels(channel_from_space(space_a), channel_from_space(space_b)));
  const CMatrix fg = tensor(f_a.f, f_b.f);
  const std::uint64_t symbol_digest = fnv1a(fg);

  VerificationReport head;
  head.theorem = "tensor_symbol";
  head.seed = opts.seed;
  head.tolerance = 1e-9;
  Channel joint_modified;
  try {
    const Symbol joint_symbol = validate_symbol(joint, fg);
    head.record(symbol_digest, "f (x) g is a symbol", 0.0);
    joint_modified = modified_channel(joint, joint_symbol);
  } catch (const Error& e) {
    head.record(symbol_digest, std::string("f (x) g is a symbol: ") + e.what(), -kInf);
    return head;
  }
  head.record(symbol_digest, "Choi equality", -max_abs_diff(choi(joint_modified), choi(product)));
  head.record(symbol_digest, "tau additivity",
              -std::abs(tau_f_log_f(fg) - tau_f_log_f(f_a) - tau_f_log_f(f_b)));

  const std::size_t din = joint.dim_in;
  VerificationReport samples = run_samples("tensor_symbol", 1e-9, opts, [&](Rng& rng, VerificationReport& rep) {
    // Entangled inputs exercise more than the product structure.
    const CMatrix x = random_density(din, rng);
    rep.record(fnv1a(x), "output equality", -max_abs_diff(apply(joint_modified, x), apply(product, x)));
  });
  head.merge(samples);
  return head;
}

std::string report_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["theorem"] = r.theorem;
  j["passed"] = r.passed();
  j["samples"] = r.samples;
  j["checks"] = r.checks;
  j["worst_slack"] = r.worst_slack;
  j["max_slack"] = r.max_slack;
  j["tolerance"] = r.tolerance;
  j["seed"] = r.seed;
  auto failures = nlohmann::ordered_json::array();
  for (const auto& f : r.failures) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(f.digest));
    failures.push_back({{"digest", hex}, {"check", f.check}, {"slack", f.slack}});
  }
  j["failures"] = std::move(failures);
  return j.dump(2);
}

}  // namespace trocap
