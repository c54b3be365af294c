#ifndef MELLA_REWRITING_EQUATION_HPP
#define MELLA_REWRITING_EQUATION_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mella/rewriting/substitution.hpp"
#include "mella/rewriting/term.hpp"

namespace mella::rewriting {

struct Label {
  enum class Kind { Axiom, Lemma, Theorem };
  Kind kind = Kind::Axiom;
  std::size_t number = 1;  // 1-based

  static Label axiom(std::size_t n) { return {Kind::Axiom, n}; }
  static Label lemma(std::size_t n) { return {Kind::Lemma, n}; }
  static Label theorem(std::size_t n = 1) { return {Kind::Theorem, n}; }

  friend bool operator==(const Label& a, const Label& b) {
    return a.kind == b.kind && a.number == b.number;
  }
  friend bool operator<(const Label& a, const Label& b) {
    return a.kind != b.kind ? a.kind < b.kind : a.number < b.number;
  }
};

/// "Axiom 2", "Lemma 4", "Theorem 1"
std::string to_string(const Label& l);

enum class Direction { LR, RL };
inline Direction flip(Direction d) { return d == Direction::LR ? Direction::RL : Direction::LR; }
inline std::string_view to_string(Direction d) { return d == Direction::LR ? "LR" : "RL"; }

struct Equation {
  Label label;
  FoTerm lhs;
  FoTerm rhs;

  /// Variables in first-occurrence order, lhs then rhs.
  std::vector<VarId> variables() const;
  const FoTerm& source(Direction d) const { return d == Direction::LR ? lhs : rhs; }
  const FoTerm& target(Direction d) const { return d == Direction::LR ? rhs : lhs; }
};

/// Renames variables to 0..k-1 by first occurrence (lhs then rhs). Returns
/// the renaming table.
std::map<VarId, VarId> canonical_renaming(const FoTerm& lhs, const FoTerm& rhs);
Equation canonical(const Equation& e);

/// One rewrite: from|position == subst(source) and to == from[subst(target)]_position.
struct RewriteStep {
  Label equation;
  Direction direction = Direction::LR;
  Position position;
  Substitution subst;
  FoTerm from;
  FoTerm to;
};

using Chain = std::vector<RewriteStep>;

/// The chain read backwards: a proof of rhs = lhs.
Chain reversed(const Chain& c);

struct ProofTrace {
  struct Entry {
    Equation statement;
    Chain chain;
    /// Parsed from output that omitted this lemma ("Lemma 2: ...").
    bool elided = false;
  };

  Signature signature;
  std::vector<Equation> axioms;
  std::vector<Entry> lemmas;  // Lemma k at index k-1
  Entry theorem;

  /// Axiom or lemma statement by label; nullptr if unknown or elided.
  const Equation* find(const Label& l) const;
};

/// Looks up equations by label.
using EquationEnv = std::function<const Equation*(const Label&)>;

/// True iff the step is a literal instance of the referenced equation.
bool replay_step(const RewriteStep& step, const EquationEnv& env);

struct TraceDefect {
  std::string where;  // "Lemma 2, step 3"
  std::string message;
};

/// Checks every step of every chain: contiguity, endpoints, replay, and that
/// steps only cite axioms or earlier lemmas. Elided lemmas are skipped and
/// steps citing them checked only for context consistency.
std::optional<TraceDefect> check_trace(const ProofTrace& trace);

/// Detailed proof output, one step per line.
std::string to_string(const RewriteStep& step, const Signature& sig);
std::string render_trace(const ProofTrace& trace);

}  // namespace mella::rewriting

#endif
