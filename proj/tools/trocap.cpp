// trocap: capacity windows, verification suites and region tables for channel
// spec files. Exit codes: 0 ok, 1 verification failure, 2 parse or usage
// error, 3 semantic error (invalid symbol, non-TRO base, bad parameters).

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <locale>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "trocap/algebra.hpp"
#include "trocap/capacity.hpp"
#include "trocap/entropy.hpp"
#include "trocap/error.hpp"
#include "trocap/spec_doc.hpp"
#include "trocap/verify.hpp"

using namespace trocap;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;
constexpr int kSemantic = 3;
constexpr std::uint64_t kBuiltinSeed = 0x0ce1;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(12) << v;
  return s.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) throw UsageError("cannot write '" + path + "'");
}

// flag > spec document > TROCAP_SEED > built-in default.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, const ChannelSpec& spec) {
  if (flag) return *flag;
  if (spec.seed) return *spec.seed;
  if (const char* env = std::getenv("TROCAP_SEED")) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 0);
    if (errno != 0 || end == env || *end != '\0') throw UsageError("TROCAP_SEED is not an unsigned integer");
    return v;
  }
  return kBuiltinSeed;
}

std::vector<double> parse_grid(const std::string& text, const std::string& flag) {
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  double a, b, step;
  char c1, c2;
  if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !in.eof() || !(step > 0.0) || b < a)
    throw UsageError(flag + " expects a:b:step with a <= b and step > 0");
  const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  if (n > 10000) throw UsageError(flag + " has more than 10000 points");
  std::vector<double> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(a + static_cast<double>(k) * step);
  return out;
}

// ---- bounds ----------------------------------------------------------------

struct BoundsArgs {
  std::string spec;
  std::string csv;
  int restarts = 8;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

int cmd_bounds(const BoundsArgs& args) {
  const ChannelSpec spec = load_channel_spec(args.spec);
  OptimizerOptions opts;
  opts.restarts = args.restarts;
  opts.seed = resolve_seed(args.seed, spec);
  opts.threads = args.threads;
  opts.initial_states = spec.suggested_inputs;
  const BoundReport report = assemble_bounds(spec.base_space, spec.symbol, spec.channel, opts);

  namespace q = quantity;
  const char* order[] = {q::C, q::Q, q::P, q::C_EA, q::Q1, q::C_dagger, q::Q_dagger, q::P_dagger, q::neg_S_cb};
  std::ostringstream table, csv;
  auto cell = [](const std::string& s, std::size_t width) { return s + std::string(s.size() < width ? width - s.size() : 1, ' '); };
  table << cell("quantity", 10) << cell("lower", 20) << cell("upper", 20) << "provenance\n";
  csv << "quantity,lower,upper,provenance\n";
  for (const char* name : order) {
    if (!report.has(name)) continue;
    const Bound& b = report.at(name);
    table << cell(name, 10) << cell(fmt(b.lower), 20) << cell(fmt(b.upper), 20) << b.provenance << "\n";
    csv << name << "," << fmt(b.lower) << "," << fmt(b.upper) << "," << csv_field(b.provenance) << "\n";
  }
  for (const auto& note : report.notes) table << "note: " << note << "\n";
  std::cout << table.str();
  if (!args.csv.empty()) write_file(args.csv, csv.str());
  return kOk;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::string spec;
  std::string suite = "all";
  std::size_t samples = 100;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned threads = 0;
};

int cmd_verify(const VerifyArgs& args) {
  const ChannelSpec spec = load_channel_spec(args.spec);
  if (!spec.symbol) throw UsageError("verify needs a spec with a symbol block");
  VerifyOptions opts;
  opts.samples = args.samples;
  opts.seed = resolve_seed(args.seed, spec);
  opts.threads = args.threads;

  std::vector<VerificationReport> reports;
  const bool all = args.suite == "all";
  if (all || args.suite == "local_comparison") reports.push_back(verify_local_comparison(spec.base_space, *spec.symbol, opts));
  if (all || args.suite == "entropic") reports.push_back(verify_entropic(spec.base_space, *spec.symbol, opts));
  if (all || args.suite == "tensor_symbol")
    reports.push_back(verify_tensor_symbol(spec.base_space, *spec.symbol, spec.base_space, *spec.symbol, opts));

  bool passed = true;
  nlohmann::ordered_json doc;
  doc["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    passed = passed && r.passed();
    doc["reports"].push_back(nlohmann::ordered_json::parse(report_json(r)));
  }
  doc["passed"] = passed;
  const std::string text = doc.dump(2) + "\n";
  if (args.out.empty())
    std::cout << text;
  else
    write_file(args.out, text);
  for (const auto& r : reports)
    std::cerr << r.theorem << ": " << r.checks << " checks, " << r.failures.size() << " failures, worst slack "
              << fmt(r.worst_slack) << "\n";
  return passed ? kOk : kVerifyFailed;
}

// ---- region ----------------------------------------------------------------

struct RegionArgs {
  std::string spec;
  std::string lambda_grid = "0:2:0.5";
  std::string mu_grid = "0:2:0.5";
  std::string csv;
};

int cmd_region(const RegionArgs& args) {
  const std::vector<double> lambdas = parse_grid(args.lambda_grid, "--lambda-grid");
  const std::vector<double> mus = parse_grid(args.mu_grid, "--mu-grid");
  const ChannelSpec spec = load_channel_spec(args.spec);
  const std::vector<TroBlock> blocks = tro_block_decomposition(spec.base_space).blocks;

  std::ostringstream csv;
  csv << "lambda,mu,family,constraint,rhs\n";
  std::size_t rows = 0;
  auto emit = [&](const RegionPoint& pt, const char* family, const char* prob) {
    for (const auto& c : pt.constraints) {
      csv << fmt(pt.lambda) << "," << fmt(pt.mu) << "," << family << "," << c.name << "," << fmt(c.rhs) << "\n";
      ++rows;
    }
    for (std::size_t i = 0; i < pt.distribution.size(); ++i) {
      csv << fmt(pt.lambda) << "," << fmt(pt.mu) << "," << family << "," << prob << "[" << i << "],"
          << fmt(pt.distribution[i]) << "\n";
      ++rows;
    }
  };
  for (double l : lambdas)
    for (double m : mus) {
      emit(cqe_region_vertices(blocks, l, m), "CQE", "p");
      emit(rps_region_vertices(blocks, l, m), "RPS", "q");
    }
  write_file(args.csv, csv.str());
  std::cout << "blocks:";
  for (const auto& b : blocks) std::cout << " (" << b.n << "," << b.m << ")";
  std::cout << "\nwrote " << rows << " rows to " << args.csv << "\n";
  return kOk;
}

// ---- describe --------------------------------------------------------------

void print_blocks(std::ostream& out, const std::vector<TroBlock>& blocks) {
  for (const auto& b : blocks) out << " (n=" << b.n << ", m=" << b.m << ", l=" << b.l << ")";
  out << "\n";
}

int cmd_describe(const std::string& path) {
  const ChannelSpec spec = load_channel_spec(path);
  const StinespringSpace& s = spec.base_space;
  std::ostringstream out;
  out << "kind: " << spec.kind << "\n";
  out << "dims: input " << s.dim_in << ", output " << s.dim_out << ", environment " << s.dim_env << "\n";
  const TroCheck check = is_tro(s.basis);
  if (check.is_tro) {
    out << "base Stinespring space: TRO\nblocks:";
    print_blocks(out, tro_block_decomposition(s).blocks);
  } else {
    out << "base Stinespring space: not a TRO (witness x=" << check.x << ", y=" << check.y << ", z=" << check.z
        << ", residual " << fmt(check.residual) << ")\n";
  }
  if (spec.symbol) {
    const SymbolCertificate& c = spec.symbol->certificate;
    out << "symbol: certified\n";
    out << "  tau(f log f): " << fmt(tau_f_log_f(*spec.symbol)) << "\n";
    out << "  smallest TRO: dim " << c.tro_dim << ", right algebra dim " << c.right_algebra_dim
        << (c.space_is_tro ? " (the space itself)" : "") << "\n";
    out << "  smallest TRO blocks:";
    print_blocks(out, c.tro_blocks);
    out << "  spectral projections: " << c.spectral_projections << ", independence residual "
        << fmt(c.independence_residual) << "\n";
  } else {
    out << "symbol: none\n";
  }
  std::cout << out.str();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity windows and verification for modified TRO channels"};
  app.require_subcommand(1);

  BoundsArgs bounds;
  auto* b = app.add_subcommand("bounds", "Capacity windows for a channel spec");
  b->add_option("spec", bounds.spec, "Channel spec JSON")->required();
  b->add_option("--csv", bounds.csv, "Write quantity,lower,upper,provenance rows");
  b->add_option("--restarts", bounds.restarts, "Random optimizer restarts")->check(CLI::NonNegativeNumber);
  b->add_option("--seed", bounds.seed, "Seed (overrides the spec and TROCAP_SEED)");
  b->add_option("--threads", bounds.threads, "Worker cap; 0 uses all cores");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Randomized checks of the comparison inequalities");
  v->add_option("spec", verify.spec, "Channel spec JSON with a symbol")->required();
  v->add_option("--suite", verify.suite, "Suite to run")
      ->check(CLI::IsMember({"local_comparison", "entropic", "tensor_symbol", "all"}));
  v->add_option("--samples", verify.samples, "Samples per suite");
  v->add_option("--seed", verify.seed, "Seed (overrides the spec and TROCAP_SEED)");
  v->add_option("--out", verify.out, "Write the JSON report here instead of stdout");
  v->add_option("--threads", verify.threads, "Worker cap; 0 uses all cores");

  RegionArgs region;
  auto* r = app.add_subcommand("region", "CQE and RPS region constraints over a (lambda, mu) grid");
  r->add_option("spec", region.spec, "Channel spec JSON")->required();
  r->add_option("--lambda-grid", region.lambda_grid, "a:b:step");
  r->add_option("--mu-grid", region.mu_grid, "a:b:step");
  r->add_option("--csv", region.csv, "Output CSV")->required();

  std::string describe_path;
  auto* d = app.add_subcommand("describe", "Dimensions, TRO structure and symbol certificate");
  d->add_option("spec", describe_path, "Channel spec JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*b) return cmd_bounds(bounds);
    if (*v) return cmd_verify(verify);
    if (*r) return cmd_region(region);
    if (*d) return cmd_describe(describe_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::ParseError ? kUsage : kSemantic;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSemantic;
  }
  return kUsage;
}
