#ifndef MELLA_BRIDGE_TRACE_FORMAT_HPP
#define MELLA_BRIDGE_TRACE_FORMAT_HPP

#include <map>
#include <string>
#include <vector>

#include "mella/bridge/problem_file.hpp"

namespace mella::bridge {

/// Variables that appear in a trace under names other than x1, x2, ... are
/// numbered from here on.
inline constexpr rw::VarId kForeignVarBase = 1'000'000;

struct ParsedTrace {
  rw::ProofTrace trace;
  /// Prover-renamed symbol names (s0, s1, ...) and what they were resolved to.
  std::map<std::string, rw::SymbolId> renamed;
  /// Constants the prover introduced itself; appended to trace.signature.
  std::vector<rw::SymbolId> prover_constants;
  /// Display names of foreign variables (y, z, ...).
  std::map<rw::VarId, std::string> foreign_variables;
};

/// Parses detailed proof output:
///
///   Lemma 1: f(e,i(i(x1))) = x1
///
///     f(e,i(i(x1)))
///  =    by Axiom 2 RL at 1 with {x1 <- x1}
///     ...
///   Lemma 2: ...
///   Theorem 1: f(a,i(a)) = f(i(a),a)
///
/// Text before the first header is ignored. Renamed symbols sK are resolved by
/// matching the theorem statement against the problem's conclusion, then by
/// declaration order. Every non-elided step must replay; failures throw
/// ParseError naming the chain and step.
ParsedTrace parse_proof_trace(const std::string& text, const ProblemFile& problem);

/// Symbol-to-name table used when printing a parsed trace back.
std::string describe_symbol_map(const ParsedTrace& parsed);

}  // namespace mella::bridge

#endif
