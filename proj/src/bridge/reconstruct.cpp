#include "mella/bridge/reconstruct.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "mella/kernel/pretty.hpp"

namespace mella::bridge {

using namespace mella::rewriting;

ReconstructionError::ReconstructionError(std::string w, const std::string& message)
    : std::runtime_error(w.empty() ? message : w + ": " + message), where(std::move(w)) {}

k::Term context_lambda(const Position& p, const k::Term& outer) {
  const std::string hole = "rc-cong-var";
  auto fill = [&](auto&& self, const k::Term& t, std::size_t i) -> k::Term {
    if (i == p.size()) return k::Term::unnamed(0, hole);
    k::Spine sp = k::unapply(t);
    if (p[i] < 1 || p[i] > sp.args.size())
      throw PositionError("position " + to_string(p) + " does not exist");
    sp.args[p[i] - 1] = self(self, sp.args[p[i] - 1], i + 1);
    return k::Term::app(sp.head, sp.args);
  };
  return k::Term::lam(hole, fill(fill, k::shift(1, 0, outer), 0));
}

namespace {

void chain_vars(const Chain& chain, std::vector<VarId>& out) {
  for (const auto& s : chain) {
    collect_variables(s.from, out);
    for (const auto& [v, t] : s.subst.bindings()) collect_variables(t, out);
    collect_variables(s.to, out);
  }
}

}  // namespace

std::vector<VarId> invented_variables(const Equation& statement, const Chain& chain) {
  std::vector<VarId> all;
  chain_vars(chain, all);
  std::vector<VarId> own = statement.variables();
  std::vector<VarId> out;
  for (VarId v : all)
    if (std::find(own.begin(), own.end(), v) == own.end() && std::find(out.begin(), out.end(), v) == out.end())
      out.push_back(v);
  return out;
}

Substitution invented_variable_heuristic(const Equation& statement, const Chain& chain, const FoTerm* fallback) {
  std::vector<VarId> invented = invented_variables(statement, chain);
  Substitution theta;
  if (invented.empty()) return theta;
  std::vector<VarId> own = statement.variables();
  if (own.empty() && !fallback) {
    std::string names;
    for (VarId v : invented) names += (names.empty() ? "" : ", ") + var_name(v);
    throw ReconstructionError("", "no term of the right type to instantiate " + names);
  }
  for (std::size_t i = 0; i < invented.size(); ++i)
    theta.bind(invented[i], own.empty() ? *fallback : FoTerm::var(own[i % own.size()]));
  return theta;
}

namespace {

Chain apply_to_chain(const Chain& chain, const Substitution& theta) {
  Chain out = chain;
  for (auto& s : out) {
    s.from = theta(s.from);
    s.to = theta(s.to);
    Substitution::Map m;
    for (const auto& [v, t] : s.subst.bindings()) m[v] = theta(t);
    s.subst = Substitution(std::move(m));
  }
  return out;
}

FoTerm replace_symbols(const FoTerm& t, const std::set<SymbolId>& from, const FoTerm& to) {
  if (t.is_var()) return t;
  if (from.count(t.symbol())) return to;
  std::vector<FoTerm> args;
  for (const auto& a : t.args()) args.push_back(replace_symbols(a, from, to));
  return FoTerm::fun(t.symbol(), std::move(args));
}

struct Parts {
  std::vector<k::Definition> lemmas_;
  k::NamedContext named_;
  k::Term proof_;
  std::vector<std::string> instantiations_;
  ReconstructionStats stats_;
};

class Builder {
 public:
  Builder(const Translation& tr, const ParsedTrace& parsed, const ReconstructOptions& options)
      : tr_(tr), parsed_(parsed), options_(options), sig_(parsed.trace.signature),
        d_(tr.hole_depth()), n_(tr.goal_binders.size()) {
    find_fallback();
  }

  Parts run() {
    auto start = std::chrono::steady_clock::now();
    Parts res;
    k::CheckState lemma_state;
    lemma_state.named = tr_.hole.named;
    lemma_state.options = tr_.hole.options;

    const ProofTrace& trace = parsed_.trace;
    for (std::size_t i = 0; i < trace.lemmas.size(); ++i) {
      const auto& entry = trace.lemmas[i];
      std::string where = to_string(entry.statement.label);
      if (entry.elided) throw ReconstructionError(where, "the proof output omits this lemma's chain");
      auto [stmt, chain] = prepare(entry, where, res);
      std::string name = fresh_lemma_name(lemma_state.named);
      std::size_t m = stmt.variables().size();
      // Π Δ. Π goal vars. Π x1..xm. Id B l r
      std::size_t depth = n_ + m;
      k::Term body = chain_proof(chain, depth, m, where);
      k::Term type = k::Term::id(base_at(depth), to_kernel(stmt.lhs, depth, m), to_kernel(stmt.rhs, depth, m));
      for (std::size_t j = m; j-- > 0;) {
        type = k::Term::pi("x" + std::to_string(j + 1), base_at(n_ + j), type);
        body = k::Term::lam("x" + std::to_string(j + 1), body);
      }
      wrap_goal_and_hole(type, body);
      try {
        k::infer_sort(lemma_state, type);
        k::check(lemma_state, body, type);
        lemma_state.named.insert(name, k::Binding{body, type});
      } catch (const k::TypeError& e) {
        throw ReconstructionError(where, std::string("kernel rejected the lemma: ") + e.what());
      }
      lemma_names_.push_back(name);
      lemma_statements_.push_back(stmt);
      lemma_arity_.push_back(m);
      res.lemmas_.push_back({name, type, body});
    }

    const auto& thm = trace.theorem;
    std::string where = to_string(thm.statement.label);
    auto [stmt, chain] = prepare(thm, where, res);
    if (!stmt.variables().empty())
      throw ReconstructionError(where, "the theorem statement has variables; the goal should be ground");
    if (!(stmt.lhs == tr_.file.conclusion.first && stmt.rhs == tr_.file.conclusion.second)) {
      if (stmt.lhs == tr_.file.conclusion.second && stmt.rhs == tr_.file.conclusion.first)
        chain = reversed(chain);
      else
        throw ReconstructionError(where, "the theorem is not the goal of the problem");
    }
    k::Term proof = chain_proof(chain, n_, 0, where);
    for (std::size_t j = n_; j-- > 0;) proof = k::Term::lam(tr_.goal_binders[j], proof);

    k::CheckState state = tr_.hole;
    state.named = lemma_state.named;
    try {
      k::check(state, proof, tr_.goal);
    } catch (const k::TypeError& e) {
      throw ReconstructionError(where, std::string("kernel rejected the proof: ") + e.what());
    }
    res.named_ = state.named;
    res.proof_ = proof;
    res.stats_ = stats_;
    res.stats_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
  }

 private:
  void find_fallback() {
    std::set<SymbolId> made_up(parsed_.prover_constants.begin(), parsed_.prover_constants.end());
    for (std::size_t i = tr_.file.ordering.precedence.size(); i-- > 0;) {
      auto id = sig_.find(tr_.file.ordering.precedence[i]);
      if (id && sig_.symbol(*id).arity() == 0 && !made_up.count(*id)) {
        fallback_ = FoTerm::fun(*id);
        return;
      }
    }
  }

  std::string var_text(VarId v) const {
    auto it = parsed_.foreign_variables.find(v);
    return it == parsed_.foreign_variables.end() ? var_name(v) : it->second;
  }

  std::pair<Equation, Chain> prepare(const ProofTrace::Entry& entry, const std::string& where,
                                     Parts& res) {
    Equation stmt = entry.statement;
    Chain chain = entry.chain;
    if (!parsed_.prover_constants.empty()) {
      std::set<SymbolId> made_up(parsed_.prover_constants.begin(), parsed_.prover_constants.end());
      bool used = false;
      auto touch = [&](const FoTerm& t) {
        FoTerm r = fallback_ ? replace_symbols(t, made_up, *fallback_) : t;
        if (!(r == t) || (!fallback_ && uses(t, made_up))) used = true;
        return r;
      };
      stmt.lhs = touch(stmt.lhs);
      stmt.rhs = touch(stmt.rhs);
      for (auto& s : chain) {
        s.from = touch(s.from);
        s.to = touch(s.to);
        Substitution::Map m;
        for (const auto& [v, t] : s.subst.bindings()) m[v] = touch(t);
        s.subst = Substitution(std::move(m));
      }
      if (used) {
        std::set<std::string> sorted;
        for (SymbolId c : parsed_.prover_constants) sorted.insert(sig_.symbol(c).name);
        std::string names;
        for (const auto& n : sorted) names += (names.empty() ? "" : ", ") + n;
        if (!options_.prover_constants)
          throw ReconstructionError(where, "the prover introduced constants " + names +
                                               " that have no counterpart in the context");
        if (!fallback_) throw ReconstructionError(where, "no constant available to replace " + names);
        std::string note = where + ": " + names + " := " + sig_.symbol(fallback_->symbol()).name;
        if (std::find(res.instantiations_.begin(), res.instantiations_.end(), note) == res.instantiations_.end())
          res.instantiations_.push_back(note);
      }
    }
    std::vector<VarId> invented = invented_variables(stmt, chain);
    if (!invented.empty()) {
      std::string names;
      for (VarId v : invented) names += (names.empty() ? "" : ", ") + var_text(v);
      if (!options_.invented_variables)
        throw ReconstructionError(where, "the proof introduces variables " + names +
                                             " that do not occur in the statement");
      Substitution theta;
      try {
        theta = invented_variable_heuristic(stmt, chain, fallback_ ? &*fallback_ : nullptr);
      } catch (const ReconstructionError& e) {
        throw ReconstructionError(where, e.what());
      }
      chain = apply_to_chain(chain, theta);
      for (VarId v : invented)
        res.instantiations_.push_back(where + ": " + var_text(v) + " := " + to_string(*theta.lookup(v), sig_));
    }
    return {stmt, chain};
  }

  static bool uses(const FoTerm& t, const std::set<SymbolId>& syms) {
    if (t.is_var()) return false;
    if (syms.count(t.symbol())) return true;
    for (const auto& a : t.args())
      if (uses(a, syms)) return true;
    return false;
  }

  std::string fresh_lemma_name(const k::NamedContext& named) {
    std::string name;
    do name = "lemma" + std::to_string(++lemma_counter_);
    while (named.contains(name) || tr_.hole.unnamed.find(name));
    return name;
  }

  // Depth counts binders inside Δ: the goal binders, lemma variables and
  // cong lambdas.
  k::Term base_at(std::size_t depth) const { return k::shift(depth, 0, tr_.base); }

  k::Term hole_var(std::size_t level, std::size_t depth) const {
    return k::Term::unnamed(d_ + depth - 1 - level, tr_.hole.unnamed.at(d_ - 1 - level).tag.name);
  }

  k::Term goal_var(std::size_t j, std::size_t depth) const {
    return k::Term::unnamed(depth - 1 - j, tr_.goal_binders[j]);
  }

  k::Term symbol_term(SymbolId f, std::size_t depth) const {
    const std::string& pname = sig_.symbol(f).name;
    const KernelRef* ref = tr_.symbols.by_prover(pname);
    if (!ref) throw ReconstructionError("", "prover symbol '" + pname + "' has no kernel counterpart");
    switch (ref->kind) {
      case KernelRef::Kind::Global: return k::Term::named(ref->name);
      case KernelRef::Kind::Local: return hole_var(ref->level, depth);
      case KernelRef::Kind::GoalVar: break;
    }
    return goal_var(ref->level, depth);
  }

  // Lemma variable j sits at binder n_ + j.
  k::Term to_kernel(const FoTerm& t, std::size_t depth, std::size_t m) const {
    if (t.is_var()) {
      if (t.var_id() >= m) throw ReconstructionError("", "unbound variable " + var_text(t.var_id()));
      return k::Term::unnamed(depth - 1 - (n_ + t.var_id()), var_name(t.var_id()));
    }
    std::vector<k::Term> args;
    for (const auto& a : t.args()) args.push_back(to_kernel(a, depth, m));
    k::Term head = symbol_term(t.symbol(), depth);
    return args.empty() ? head : k::Term::app(head, args);
  }

  void wrap_goal_and_hole(k::Term& type, k::Term& body) const {
    for (std::size_t j = n_; j-- > 0;) {
      type = k::Term::pi(tr_.goal_binders[j], base_at(j), type);
      body = k::Term::lam(tr_.goal_binders[j], body);
    }
    for (std::size_t i = 0; i < d_; ++i) {
      const auto& e = tr_.hole.unnamed.at(i);
      type = k::Term::pi(e.tag, e.type, type);
      body = k::Term::lam(e.tag, body);
    }
  }

  k::Term equation_instance(const RewriteStep& s, std::size_t depth, std::size_t m,
                            const std::string& where) const {
    auto arg = [&](std::optional<VarId> v) {
      if (v) {
        const FoTerm* t = s.subst.lookup(*v);
        return to_kernel(t ? *t : FoTerm::var(*v), depth, m);
      }
      if (!fallback_)
        throw ReconstructionError(where, "no constant available for an unconstrained variable of " +
                                             to_string(s.equation));
      return to_kernel(*fallback_, depth, m);
    };
    std::vector<k::Term> args;
    k::Term head;
    if (s.equation.kind == Label::Kind::Axiom) {
      if (s.equation.number < 1 || s.equation.number > tr_.axioms.size())
        throw ReconstructionError(where, "unknown " + to_string(s.equation));
      const AxiomInfo& ax = tr_.axioms[s.equation.number - 1];
      head = ax.ref.kind == KernelRef::Kind::Global ? k::Term::named(ax.ref.name) : hole_var(ax.ref.level, depth);
      for (const auto& v : ax.binder_vars) args.push_back(arg(v));
    } else if (s.equation.kind == Label::Kind::Lemma) {
      std::size_t i = s.equation.number - 1;
      if (s.equation.number < 1 || i >= lemma_names_.size())
        throw ReconstructionError(where, "reference to " + to_string(s.equation) + " before it is proved");
      head = k::Term::named(lemma_names_[i]);
      for (std::size_t l = 0; l < d_; ++l) args.push_back(hole_var(l, depth));
      for (std::size_t j = 0; j < n_; ++j) args.push_back(goal_var(j, depth));
      for (std::size_t j = 0; j < lemma_arity_[i]; ++j) args.push_back(arg(VarId{j}));
    } else {
      throw ReconstructionError(where, "a step cites the theorem itself");
    }
    return args.empty() ? head : k::Term::app(head, args);
  }

  k::Term step_proof(const RewriteStep& s, std::size_t depth, std::size_t m, const std::string& where) {
    const Equation* eq = s.equation.kind == Label::Kind::Lemma && s.equation.number >= 1 &&
                                 s.equation.number <= lemma_statements_.size()
                             ? &lemma_statements_[s.equation.number - 1]
                             : parsed_.trace.find(s.equation);
    if (!eq) throw ReconstructionError(where, "unknown " + to_string(s.equation));
    k::Term b = base_at(depth);
    k::Term l = to_kernel(s.subst(eq->lhs), depth, m);
    k::Term r = to_kernel(s.subst(eq->rhs), depth, m);
    k::Term p = equation_instance(s, depth, m, where);
    if (s.direction == Direction::RL) {
      p = k::Term::app(k::Term::named("sym"), {b, l, r, p});
      std::swap(l, r);
      ++stats_.symmetries;
    }
    if (!s.position.empty()) {
      k::Term ctx;
      try {
        ctx = context_lambda(s.position, to_kernel(s.from, depth, m));
      } catch (const PositionError& e) {
        throw ReconstructionError(where, e.what());
      }
      p = k::Term::app(k::Term::named("cong"), {b, b, l, r, ctx, p});
      ++stats_.congruences;
    }
    ++stats_.steps;
    return p;
  }

  k::Term chain_proof(const Chain& chain, std::size_t depth, std::size_t m, const std::string& where) {
    if (chain.empty()) return k::Term::refl();
    k::Term b = base_at(depth);
    k::Term last = to_kernel(chain.back().to, depth, m);
    k::Term acc = step_proof(chain.back(), depth, m, where);
    for (std::size_t i = chain.size() - 1; i-- > 0;) {
      k::Term p = step_proof(chain[i], depth, m, where);
      acc = k::Term::app(k::Term::named("trans"),
                         {b, to_kernel(chain[i].from, depth, m), to_kernel(chain[i].to, depth, m), last, p, acc});
    }
    return acc;
  }

  const Translation& tr_;
  const ParsedTrace& parsed_;
  ReconstructOptions options_;
  const Signature& sig_;
  std::size_t d_;
  std::size_t n_;
  std::optional<FoTerm> fallback_;
  std::vector<std::string> lemma_names_;
  std::vector<Equation> lemma_statements_;
  std::vector<std::size_t> lemma_arity_;
  std::size_t lemma_counter_ = 0;
  ReconstructionStats stats_;
};

}  // namespace

ReconstructionResult reconstruct(const Translation& tr, const ParsedTrace& trace, const ReconstructOptions& options) {
  for (const char* name : {"sym", "trans", "cong"})
    if (!tr.hole.named.contains(name))
      throw ReconstructionError("", std::string("the context lacks the equational basis ('") + name + "')");
  Parts parts = Builder(tr, trace, options).run();
  ReconstructionResult res;
  res.lemmas_ = std::move(parts.lemmas_);
  res.named_ = std::move(parts.named_);
  res.proof_ = std::move(parts.proof_);
  res.instantiations_ = std::move(parts.instantiations_);
  res.stats_ = parts.stats_;
  return res;
}

}  // namespace mella::bridge
