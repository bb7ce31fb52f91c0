#include "trocap/spec_doc.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "trocap/algebra.hpp"
#include "trocap/builders.hpp"
#include "trocap/error.hpp"

namespace trocap {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::ParseError, "field '" + path + "': " + msg);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(join(path, key), "unknown key");
  }
}

const json& required(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(join(path, key), "missing");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::size_t count(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) fail(path, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

cplx entry(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  fail(path, "expected a number or an [re, im] pair");
}

const json& nonempty_array(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a nonempty array");
  return v;
}

CMatrix matrix(const json& v, const std::string& path) {
  nonempty_array(v, path);
  const std::size_t rows = v.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    nonempty_array(v[r], index(path, r));
    if (r == 0) cols = v[r].size();
    if (v[r].size() != cols) fail(index(path, r), "row length differs from row 0");
  }
  CMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = entry(v[r][c], index(index(path, r), c));
  return m;
}

std::vector<CMatrix> matrices(const json& v, const std::string& path) {
  nonempty_array(v, path);
  std::vector<CMatrix> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(matrix(v[i], index(path, i)));
  return out;
}

std::vector<double> reals(const json& v, const std::string& path) {
  nonempty_array(v, path);
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], index(path, i)));
  return out;
}

std::vector<cplx> complexes(const json& v, const std::string& path) {
  nonempty_array(v, path);
  std::vector<cplx> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(entry(v[i], index(path, i)));
  return out;
}

FiniteGroup group(const json& v, const std::string& path) {
  if (!v.is_object() || v.size() != 1) fail(path, "expected one of {\"cyclic\": n}, {\"dihedral\": n}, {\"product\": [G, H]}");
  const std::string key = v.begin().key();
  const json& value = v.begin().value();
  if (key == "cyclic") return cyclic_group(count(value, join(path, key)));
  if (key == "dihedral") return dihedral_group(count(value, join(path, key)));
  if (key == "product") {
    if (!value.is_array() || value.size() != 2) fail(join(path, key), "expected two groups");
    return direct_product(group(value[0], index(join(path, key), 0)), group(value[1], index(join(path, key), 1)));
  }
  fail(join(path, key), "unknown group");
}

// Symbol validation errors are reported as InvalidSymbol: the document parsed,
// but its f is not a symbol of the channel.
Symbol certify(const StinespringSpace& space, const CMatrix& f) {
  try {
    return validate_symbol(space, f);
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidSymbol, std::string("symbol.f: ") + e.what());
  }
}

void take_family(ChannelSpec& spec, ModifiedFamily fam) {
  spec.channel = std::move(fam.channel);
  spec.base = std::move(fam.base);
  spec.base_space = std::move(fam.space);
  spec.symbol = std::move(fam.symbol);
}

std::string position(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

ChannelSpec parse_channel_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte is one past the offending character.
    throw Error(ErrorKind::ParseError, "invalid JSON at " + position(text, e.byte == 0 ? 0 : e.byte - 1));
  }
  allow_keys(doc, "", {"kind", "params", "symbol", "seed"});
  const json& kind_v = required(doc, "", "kind");
  if (!kind_v.is_string()) fail("kind", "expected a string");
  ChannelSpec spec;
  spec.kind = kind_v.get<std::string>();
  const json& params = required(doc, "", "params");
  if (doc.contains("seed")) spec.seed = count(doc["seed"], "seed");

  const bool builder_kind =
      spec.kind == "group_random_unitary" || spec.kind == "schur_multiplier" || spec.kind == "phi_alpha";
  if (builder_kind && doc.contains("symbol")) fail("symbol", "kind '" + spec.kind + "' carries its own symbol");

  if (spec.kind == "kraus") {
    allow_keys(params, "params", {"kraus"});
    spec.base = Channel::from_kraus(matrices(required(params, "params", "kraus"), "params.kraus"));
  } else if (spec.kind == "partial_trace_sum") {
    allow_keys(params, "params", {"blocks"});
    const json& blocks = nonempty_array(required(params, "params", "blocks"), "params.blocks");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const std::string p = index("params.blocks", i);
      if (!blocks[i].is_array() || blocks[i].size() != 2) fail(p, "expected [n, m]");
      pairs.emplace_back(count(blocks[i][0], index(p, 0)), count(blocks[i][1], index(p, 1)));
    }
    spec.base = partial_trace_sum_channel(pairs);
  } else if (spec.kind == "group_random_unitary") {
    allow_keys(params, "params", {"rep", "group", "unitaries", "probs"});
    const json& rep_v = required(params, "params", "rep");
    if (!rep_v.is_string()) fail("params.rep", "expected \"pauli\", \"regular\" or \"unitaries\"");
    const std::string rep_name = rep_v.get<std::string>();
    const std::vector<double> probs = reals(required(params, "params", "probs"), "params.probs");
    if (rep_name == "pauli") {
      take_family(spec, group_random_unitary(pauli_rep(), probs));
    } else if (rep_name == "regular") {
      take_family(spec, group_random_unitary(regular_rep(group(required(params, "params", "group"), "params.group")), probs));
    } else if (rep_name == "unitaries") {
      take_family(spec, group_random_unitary(
                            ProjectiveRep::from_unitaries(matrices(required(params, "params", "unitaries"), "params.unitaries")),
                            probs));
    } else {
      fail("params.rep", "unknown representation '" + rep_name + "'");
    }
  } else if (spec.kind == "schur_multiplier") {
    allow_keys(params, "params", {"group", "phi"});
    take_family(spec, schur_multiplier_channel(group(required(params, "params", "group"), "params.group"),
                                               complexes(required(params, "params", "phi"), "params.phi")));
  } else if (spec.kind == "phi_alpha") {
    allow_keys(params, "params", {"alpha"});
    take_family(spec, phi_alpha(number(required(params, "params", "alpha"), "params.alpha")));
    const CMatrix half = CMatrix::identity(2) * 0.5;
    spec.suggested_inputs = {phi_alpha_block_input(half, false), phi_alpha_block_input(half, true)};
  } else {
    fail("kind", "unknown kind '" + spec.kind + "'");
  }

  if (!builder_kind) {
    spec.base_space = stinespring_space(spec.base);
    spec.channel = spec.base;
    if (doc.contains("symbol")) {
      const json& sym = doc["symbol"];
      allow_keys(sym, "symbol", {"f", "identity"});
      if (sym.contains("f") == sym.contains("identity")) fail("symbol", "expected exactly one of 'f' or 'identity'");
      CMatrix f;
      if (sym.contains("f")) {
        f = matrix(sym["f"], "symbol.f");
      } else {
        if (!sym["identity"].is_boolean() || !sym["identity"].get<bool>()) fail("symbol.identity", "expected true");
        f = CMatrix::identity(spec.base_space.dim_env);
      }
      spec.symbol = certify(spec.base_space, f);
      spec.channel = modified_channel(spec.base_space, *spec.symbol);
    }
  }
  return spec;
}

ChannelSpec load_channel_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot read spec file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_channel_spec(buf.str());
}

}  // namespace trocap
