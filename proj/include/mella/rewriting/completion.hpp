#ifndef MELLA_REWRITING_COMPLETION_HPP
#define MELLA_REWRITING_COMPLETION_HPP

#include <atomic>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mella/rewriting/equation.hpp"
#include "mella/rewriting/ordering.hpp"

namespace mella::rewriting {

enum class Orientation { LR, RL, None };

/// LR iff lhs > rhs, RL iff lhs < rhs, None otherwise (kept for ordered rewriting).
Orientation orient(const Equation& eq, const Ordering& o);

/// An equation used in one direction as a (possibly ordered) rewrite rule.
struct RuleView {
  Equation eq;
  Direction dir = Direction::LR;

  const FoTerm& lhs() const { return eq.source(dir); }
  const FoTerm& rhs() const { return eq.target(dir); }
};

struct CriticalPair {
  Equation eq;  // canonical variables
  Position position;
  FoTerm peak;  // canonical variables
  /// eq.lhs -> peak (inner rule backwards at position) -> eq.rhs (outer rule at root).
  Chain chain;
};

/// Overlaps of inner's lhs into non-variable positions of outer's lhs. The
/// rules are renamed apart internally. With an ordering, peaks that violate
/// the ordering constraints of unfailing completion are dropped.
std::vector<CriticalPair> critical_pairs(const RuleView& inner, const RuleView& outer,
                                         const Ordering* ordering = nullptr,
                                         bool include_root = true);

struct Problem {
  Signature signature;
  Ordering ordering;
  std::vector<Equation> axioms;  // Axiom 1..n
  Equation goal;                 // variables are Skolemised
};

struct Progress {
  double elapsed = 0;
  std::size_t equations = 0;
  std::size_t active = 0;
  std::size_t passive = 0;
};

struct Limits {
  double seconds = 5.0;
  std::size_t max_equations = 200'000;
  const std::atomic<bool>* stop = nullptr;
  std::function<void(const Progress&)> progress;
  std::size_t progress_every = 50;  // iterations, or a tenth of a second
};

struct Statistics {
  std::size_t iterations = 0;
  std::size_t generated = 0;
  std::size_t active = 0;
  std::size_t passive = 0;
  std::size_t rewrites = 0;
  double elapsed = 0;
};

enum class Status { Proved, Timeout, Unprovable, Error };
std::string_view to_string(Status s);

struct Outcome {
  Status status = Status::Error;
  std::optional<ProofTrace> trace;
  Statistics stats;
  /// Goal variable -> Skolem constant added to the trace's signature.
  std::vector<std::pair<VarId, SymbolId>> skolems;
  /// Active equations when the loop stopped; a complete system on saturation.
  std::vector<Equation> active;
  std::string message;
};

/// Unfailing completion with a given-clause loop. On success the trace holds
/// exactly the derived equations used by the goal proof, as lemmas in
/// derivation order, each with a replayable chain.
Outcome complete(const Problem& problem, const Limits& limits = {});

}  // namespace mella::rewriting

#endif
