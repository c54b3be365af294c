#ifndef MELLA_BRIDGE_RECONSTRUCT_HPP
#define MELLA_BRIDGE_RECONSTRUCT_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mella/bridge/trace_format.hpp"
#include "mella/bridge/translate.hpp"
#include "mella/kernel/basis.hpp"

namespace mella::bridge {

/// The trace could not be turned into a kernel proof. `where` names the
/// chain ("Lemma 2", "Theorem 1") or is empty for whole-trace problems.
struct ReconstructionError : std::runtime_error {
  ReconstructionError(std::string where, const std::string& message);
  std::string where;
};

struct ReconstructOptions {
  /// Instantiate variables a chain introduces that its statement lacks.
  bool invented_variables = true;
  /// Replace constants made up by the prover with a known constant.
  bool prover_constants = true;
};

struct ReconstructionStats {
  std::size_t steps = 0;
  std::size_t congruences = 0;
  std::size_t symmetries = 0;
  double seconds = 0;
};

/// A proof that passed the kernel. Only `reconstruct` makes these.
class ReconstructionResult {
 public:
  /// lemma1, lemma2, ... in dependency order.
  const std::vector<k::Definition>& lemmas() const { return lemmas_; }
  /// Gamma extended with the lemmas.
  const k::NamedContext& named() const { return named_; }
  /// Proof of the goal in the hole context.
  const k::Term& proof() const { return proof_; }
  /// Invented variables and prover constants with what replaced them.
  const std::vector<std::string>& instantiations() const { return instantiations_; }
  const ReconstructionStats& stats() const { return stats_; }

 private:
  friend ReconstructionResult reconstruct(const Translation&, const ParsedTrace&,
                                          const ReconstructOptions&);
  ReconstructionResult() = default;

  std::vector<k::Definition> lemmas_;
  k::NamedContext named_;
  k::Term proof_;
  std::vector<std::string> instantiations_;
  ReconstructionStats stats_;
};

/// Builds lemma definitions and a proof term from the trace, then checks
/// both with the kernel. Throws ReconstructionError.
ReconstructionResult reconstruct(const Translation& tr, const ParsedTrace& trace,
                                 const ReconstructOptions& options = {});

/// λh. outer with the subterm at p replaced by h, for a first-order kernel
/// term (an application spine). Throws rw::PositionError.
k::Term context_lambda(const rw::Position& p, const k::Term& outer);

/// Substitution for the variables of a chain that are missing from its
/// statement: statement variables in order of first occurrence, cycling,
/// or `fallback` when the statement is ground. Empty when nothing is
/// invented; throws ReconstructionError naming the variables when a
/// candidate is needed but `fallback` is null.
rw::Substitution invented_variable_heuristic(const rw::Equation& statement, const rw::Chain& chain,
                                             const rw::FoTerm* fallback);

/// Variables of the chain that its statement does not mention, in order of
/// first occurrence.
std::vector<rw::VarId> invented_variables(const rw::Equation& statement, const rw::Chain& chain);

}  // namespace mella::bridge

#endif
