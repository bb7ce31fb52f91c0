#pragma once

// Channel spec documents: JSON files naming a channel family, its parameters
// and optionally a symbol. Complex entries are numbers or [re, im] pairs;
// matrices are row-major nested arrays.
//
//   {"kind": "phi_alpha", "params": {"alpha": 0.5}, "seed": 7}
//   {"kind": "kraus", "params": {"kraus": [M, ...]}, "symbol": {"f": F}}
//   {"kind": "partial_trace_sum", "params": {"blocks": [[n, m], ...]}}
//   {"kind": "group_random_unitary",
//    "params": {"rep": "pauli" | "regular" | "unitaries", "group": G,
//               "unitaries": [U, ...], "probs": [...]}}
//   {"kind": "schur_multiplier", "params": {"group": G, "phi": [...]}}
//
// with G one of {"cyclic": n}, {"dihedral": n}, {"product": [G, G]}. The
// builder kinds carry their own symbol; kraus and partial_trace_sum accept
// {"f": F} or {"identity": true}.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trocap/channel.hpp"
#include "trocap/matcore.hpp"

namespace trocap {

struct ChannelSpec {
  std::string kind;
  Channel channel;  // N_f when a symbol is present, otherwise the base
  Channel base;
  StinespringSpace base_space;
  std::optional<Symbol> symbol;
  std::optional<std::uint64_t> seed;
  /// Inputs worth adding to optimizer restart pools (block inputs of Phi_alpha).
  std::vector<CMatrix> suggested_inputs;
};

/// Throws ParseError with a line/column or field path for malformed
/// documents, InvalidSymbol when the symbol block fails validation, and the
/// builders' own errors for out-of-range parameters.
ChannelSpec parse_channel_spec(std::string_view text);
/// Reads and parses a file; an unreadable file is a ParseError.
ChannelSpec load_channel_spec(const std::string& path);

}  // namespace trocap
