#include "mella/rewriting/equation.hpp"

#include <algorithm>
#include <sstream>

namespace mella::rewriting {

std::string to_string(const Label& l) {
  switch (l.kind) {
    case Label::Kind::Axiom: return "Axiom " + std::to_string(l.number);
    case Label::Kind::Lemma: return "Lemma " + std::to_string(l.number);
    case Label::Kind::Theorem: return "Theorem " + std::to_string(l.number);
  }
  return "?";
}

std::vector<VarId> Equation::variables() const {
  std::vector<VarId> out;
  collect_variables(lhs, out);
  collect_variables(rhs, out);
  return out;
}

std::map<VarId, VarId> canonical_renaming(const FoTerm& lhs, const FoTerm& rhs) {
  std::vector<VarId> vs;
  collect_variables(lhs, vs);
  collect_variables(rhs, vs);
  std::map<VarId, VarId> table;
  for (std::size_t i = 0; i < vs.size(); ++i) table[vs[i]] = i;
  return table;
}

Equation canonical(const Equation& e) {
  auto table = canonical_renaming(e.lhs, e.rhs);
  return {e.label, rename(e.lhs, table), rename(e.rhs, table)};
}

Chain reversed(const Chain& c) {
  Chain out;
  out.reserve(c.size());
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    RewriteStep s = *it;
    s.direction = flip(s.direction);
    std::swap(s.from, s.to);
    out.push_back(std::move(s));
  }
  return out;
}

const Equation* ProofTrace::find(const Label& l) const {
  if (l.kind == Label::Kind::Axiom) {
    if (l.number == 0 || l.number > axioms.size()) return nullptr;
    return &axioms[l.number - 1];
  }
  if (l.kind == Label::Kind::Lemma) {
    if (l.number == 0 || l.number > lemmas.size() || lemmas[l.number - 1].elided) return nullptr;
    return &lemmas[l.number - 1].statement;
  }
  return nullptr;
}

bool replay_step(const RewriteStep& step, const EquationEnv& env) {
  const Equation* eq = env(step.equation);
  if (!eq || !step.from || !step.to) return false;
  if (!valid_position(step.from, step.position)) return false;
  // substitutions must be total over the equation's variables
  for (VarId v : eq->variables())
    if (!step.subst.contains(v)) return false;
  FoTerm src = step.subst(eq->source(step.direction));
  FoTerm tgt = step.subst(eq->target(step.direction));
  if (!(subterm_at(step.from, step.position) == src)) return false;
  return replace_at(step.from, step.position, tgt) == step.to;
}

namespace {

// Same term outside the position: the only check possible without the statement.
bool context_consistent(const RewriteStep& step) {
  if (!valid_position(step.from, step.position) || !valid_position(step.to, step.position))
    return false;
  return replace_at(step.from, step.position, subterm_at(step.to, step.position)) == step.to;
}

std::optional<TraceDefect> check_chain(const ProofTrace& trace, const ProofTrace::Entry& entry,
                                       const std::string& name, std::size_t lemma_limit) {
  const Chain& chain = entry.chain;
  auto at = [&](std::size_t i) { return name + ", step " + std::to_string(i + 1); };
  if (chain.empty()) {
    if (!(entry.statement.lhs == entry.statement.rhs))
      return TraceDefect{name, "empty chain for a non-trivial equation"};
    return std::nullopt;
  }
  if (!(chain.front().from == entry.statement.lhs))
    return TraceDefect{at(0), "chain does not start at the statement's left-hand side"};
  if (!(chain.back().to == entry.statement.rhs))
    return TraceDefect{at(chain.size() - 1), "chain does not end at the statement's right-hand side"};
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const RewriteStep& s = chain[i];
    if (i + 1 < chain.size() && !(s.to == chain[i + 1].from))
      return TraceDefect{at(i), "chain is not contiguous"};
    if (s.equation.kind == Label::Kind::Theorem)
      return TraceDefect{at(i), "a step cannot cite a theorem"};
    if (s.equation.kind == Label::Kind::Lemma && s.equation.number >= lemma_limit)
      return TraceDefect{at(i), "step cites " + to_string(s.equation) + " which is not earlier"};
    if (s.equation.kind == Label::Kind::Lemma && s.equation.number <= trace.lemmas.size() &&
        trace.lemmas[s.equation.number - 1].elided) {
      if (!context_consistent(s)) return TraceDefect{at(i), "step changes the term outside its position"};
      continue;
    }
    if (!trace.find(s.equation))
      return TraceDefect{at(i), "unknown equation " + to_string(s.equation)};
    if (!replay_step(s, [&](const Label& l) { return trace.find(l); }))
      return TraceDefect{at(i), "step does not replay: " + to_string(s, trace.signature)};
  }
  return std::nullopt;
}

}  // namespace

std::optional<TraceDefect> check_trace(const ProofTrace& trace) {
  for (std::size_t k = 0; k < trace.lemmas.size(); ++k) {
    const auto& entry = trace.lemmas[k];
    if (entry.elided) continue;
    if (auto d = check_chain(trace, entry, "Lemma " + std::to_string(k + 1), k + 1)) return d;
  }
  return check_chain(trace, trace.theorem, to_string(trace.theorem.statement.label),
                     trace.lemmas.size() + 1);
}

std::string to_string(const RewriteStep& step, const Signature& sig) {
  std::ostringstream out;
  out << "by " << to_string(step.equation) << ' ' << to_string(step.direction) << " at "
      << to_string(step.position) << " with " << to_string(step.subst, sig);
  return out.str();
}

namespace {

void render_entry(std::ostringstream& out, const ProofTrace::Entry& e, const Signature& sig) {
  if (e.elided) {
    out << "  " << to_string(e.statement.label) << ": ...\n\n";
    return;
  }
  out << "  " << to_string(e.statement.label) << ": " << to_string(e.statement.lhs, sig) << " = "
      << to_string(e.statement.rhs, sig) << "\n\n";
  out << "    " << to_string(e.statement.lhs, sig) << "\n";
  for (const auto& s : e.chain) {
    out << " =    " << to_string(s, sig) << "\n";
    out << "    " << to_string(s.to, sig) << "\n";
  }
  out << "\n";
}

}  // namespace

std::string render_trace(const ProofTrace& trace) {
  std::ostringstream out;
  for (const auto& l : trace.lemmas) render_entry(out, l, trace.signature);
  render_entry(out, trace.theorem, trace.signature);
  return out.str();
}

}  // namespace mella::rewriting
