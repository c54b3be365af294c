#include "mella/bridge/translate.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "mella/kernel/pretty.hpp"

namespace mella::bridge {

using namespace mella::rewriting;

void SymbolMap::add(std::string prover, KernelRef ref) {
  for (const auto& e : entries_) {
    if (e.prover == prover) throw std::invalid_argument("prover symbol '" + prover + "' mapped twice");
    if (e.ref == ref) throw std::invalid_argument("kernel name '" + ref.name + "' mapped twice");
  }
  entries_.push_back({std::move(prover), std::move(ref)});
}

const KernelRef* SymbolMap::by_prover(const std::string& prover) const {
  for (const auto& e : entries_)
    if (e.prover == prover) return &e.ref;
  return nullptr;
}

std::optional<std::string> SymbolMap::by_kernel(const std::string& kernel_name) const {
  for (const auto& e : entries_)
    if (e.ref.name == kernel_name) return e.prover;
  return std::nullopt;
}

std::string SymbolMap::describe() const {
  std::ostringstream out;
  for (const auto& e : entries_) {
    out << e.prover << " = " << e.ref.name;
    if (e.ref.kind == KernelRef::Kind::Local) out << " (local)";
    if (e.ref.kind == KernelRef::Kind::GoalVar) out << " (goal variable)";
    out << "\n";
  }
  return out.str();
}

namespace {

struct Resolved {
  KernelRef ref;
  k::Term type;  // valid in the hole context
};

class Translator {
 public:
  Translator(const k::CheckState& hole, OrderingChoice ordering)
      : hole_(hole), ordering_(ordering), depth_(hole.unnamed.size()) {}

  Translation run(const k::Term& goal, const std::vector<std::string>& signature,
                  const std::vector<std::string>& axioms, double timeout, const std::string& name) {
    Translation tr;
    tr.hole = hole_;
    tr.goal = goal;
    tr.timeout = timeout;
    read_goal(goal);
    tr.base = base_;
    tr.goal_binders = goal_names_;
    explicit_signature_ = !signature.empty();
    for (const auto& s : signature) declare(s, resolve(s));

    std::vector<std::pair<FoTerm, FoTerm>> equations;
    for (std::size_t a = 0; a < axioms.size(); ++a) {
      Resolved r = resolve(axioms[a]);
      AxiomInfo info;
      info.prover_label = "Axiom " + std::to_string(a + 1);
      info.ref = r.ref;
      auto [eq, binders] = read_axiom(axioms[a], r.type);
      auto table = canonical_renaming(eq.first, eq.second);
      for (std::size_t j = 0; j < binders; ++j) {
        auto it = table.find(j);
        info.binder_vars.push_back(it == table.end() ? std::nullopt : std::optional<VarId>(it->second));
      }
      max_binders_ = std::max(max_binders_, binders);
      equations.push_back(std::move(eq));
      tr.axioms.push_back(std::move(info));
    }
    if (axioms.empty()) throw TranslationError("no axioms given");
    auto conclusion = std::make_pair(fo(goal_lhs_, goal_names_.size(), Mode::Goal, "the goal"),
                                     fo(goal_rhs_, goal_names_.size(), Mode::Goal, "the goal"));

    // goal variables become the lowest constants
    std::vector<SymbolId> goal_syms;
    for (std::size_t j = 0; j < goal_names_.size(); ++j) {
      KernelRef ref{KernelRef::Kind::GoalVar, goal_names_[j], j};
      goal_syms.push_back(add_symbol(ref, 0));
    }
    auto retarget = [&](const FoTerm& t) { return replace_goal_vars(t, goal_syms); };
    conclusion = {retarget(conclusion.first), retarget(conclusion.second)};

    ProblemFile& p = tr.file;
    p.name = name;
    p.sorts = {"ANY"};
    for (const auto& s : symbols_) {
      p.symbols.push_back({s.prover, std::vector<std::string>(s.arity, "ANY"), "ANY"});
      p.ordering.precedence.push_back(s.prover);
      tr.symbols.add(s.prover, s.ref);
    }
    if (ordering_ == OrderingChoice::KBO) {
      p.ordering.kind = Ordering::Kind::KBO;
      for (const auto& s : symbols_) p.ordering.weights.push_back({s.prover, 1});
    }
    if (max_binders_ > 0) {
      VariableDecl d;
      d.sort = "ANY";
      std::set<std::string> taken;
      for (const auto& s : symbols_) taken.insert(s.prover);
      const std::vector<std::string> preferred = {"x", "y", "z", "u", "v", "w"};
      for (std::size_t i = 0, n = 1; d.names.size() < max_binders_; ++i) {
        std::string c = i < preferred.size() ? preferred[i] : "v" + std::to_string(n++);
        if (!taken.count(c)) d.names.push_back(c);
      }
      p.variables.push_back(d);
    }
    p.equations = std::move(equations);
    p.conclusion = conclusion;
    return tr;
  }

 private:
  enum class Mode { Axiom, Goal };

  struct Sym {
    std::string key;
    std::string prover;
    KernelRef ref;
    std::size_t arity;
  };

  k::Term norm(const k::Term& t) const { return k::normalize(t, {k::kDefaultFuel, &hole_.named}); }

  bool same(const k::Term& a, const k::Term& b) const { return k::beta_equal(a, b, &hole_.named); }

  std::string show(const k::Term& t, std::size_t extra, const std::vector<std::string>& inner = {}) const {
    std::vector<std::string> scope = inner;
    scope.resize(extra, "_");
    for (const auto& n : hole_.unnamed.names()) scope.push_back(n);
    return k::pretty(t, scope, &hole_.named);
  }

  Resolved resolve(const std::string& name) const {
    if (auto i = hole_.unnamed.find(name))
      return {{KernelRef::Kind::Local, name, depth_ - 1 - *i}, k::lookup_unnamed(hole_.unnamed, *i)};
    if (const auto* b = hole_.named.find(name)) return {{KernelRef::Kind::Global, name, 0}, b->type};
    throw TranslationError("unknown name '" + name + "'");
  }

  void read_goal(const k::Term& goal) {
    k::Term g = norm(goal);
    std::size_t n = 0;
    while (g.is(k::Term::Kind::Pi)) {
      goal_names_.push_back(g.tag().name.empty() ? "_" : g.tag().name);
      goal_domains_.push_back(g.domain());
      g = g.codomain();
      ++n;
    }
    if (!g.is(k::Term::Kind::Id))
      throw TranslationError("the goal " + show(goal, 0) + " is not an equation");
    try {
      base_ = k::shift(-static_cast<std::int64_t>(n), 0, g.kid(0));
    } catch (const k::TypeError&) {
      throw TranslationError("the carrier type of the goal depends on a goal variable");
    }
    for (std::size_t j = 0; j < n; ++j)
      if (!same(goal_domains_[j], k::shift(j, 0, base_)))
        throw TranslationError("goal variable '" + goal_names_[j] + "' is not of the carrier type " +
                               show(base_, 0));
    goal_lhs_ = g.kid(1);
    goal_rhs_ = g.kid(2);
  }

  std::size_t first_order_arity(const std::string& name, const k::Term& type) const {
    k::Term t = norm(type);
    std::size_t n = 0;
    while (t.is(k::Term::Kind::Pi)) {
      if (!same(t.domain(), k::shift(n, 0, base_)) || k::occurs_free(0, t.codomain()))
        throw TranslationError("'" + name + "' has type " + show(type, 0) +
                               ", which is not a first-order function over " + show(base_, 0));
      t = t.codomain();
      ++n;
    }
    if (!same(t, k::shift(n, 0, base_)))
      throw TranslationError("'" + name + "' has type " + show(type, 0) + ", not a function into " +
                             show(base_, 0));
    return n;
  }

  static std::string key(const KernelRef& r) {
    switch (r.kind) {
      case KernelRef::Kind::Global: return "g:" + r.name;
      case KernelRef::Kind::Local: return "l:" + std::to_string(r.level);
      case KernelRef::Kind::GoalVar: break;
    }
    return "v:" + std::to_string(r.level);
  }

  std::string prover_name(const std::string& kernel) const {
    static const std::regex ok("[a-z][A-Za-z0-9_]*");
    static const std::regex reserved("x[0-9]+|s[0-9]+|sk[0-9]*|v[0-9]+");
    auto taken = [&](const std::string& n) {
      for (const auto& s : symbols_)
        if (s.prover == n) return true;
      return false;
    };
    if (std::regex_match(kernel, ok) && !std::regex_match(kernel, reserved) && !taken(kernel)) return kernel;
    std::string base;
    for (char c : kernel)
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') base += c;
    base = "k_" + base;
    std::string c = base;
    for (int i = 1; taken(c); ++i) c = base + std::to_string(i);
    return c;
  }

  SymbolId add_symbol(const KernelRef& ref, std::size_t arity) {
    symbols_.push_back({key(ref), prover_name(ref.name), ref, arity});
    return symbols_.size() - 1;
  }

  SymbolId declare(const std::string& name, const Resolved& r) {
    std::string k = key(r.ref);
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_[i].key == k) throw TranslationError("'" + name + "' listed twice in the signature");
    return add_symbol(r.ref, first_order_arity(name, r.type));
  }

  SymbolId lookup(const KernelRef& ref, const std::string& where) {
    std::string k = key(ref);
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_[i].key == k) return i;
    if (explicit_signature_)
      throw TranslationError("'" + ref.name + "' occurs in " + where + " but is not in the signature");
    Resolved r = ref.kind == KernelRef::Kind::Global
                     ? Resolved{ref, hole_.named.find(ref.name)->type}
                     : Resolved{ref, k::lookup_unnamed(hole_.unnamed, depth_ - 1 - ref.level)};
    return declare(ref.name, r);
  }

  // Translates a normal kernel term under `extra` binders (axiom or goal variables).
  FoTerm fo(const k::Term& t, std::size_t extra, Mode mode, const std::string& where) {
    k::Spine sp = k::unapply(t);
    KernelRef ref;
    if (sp.head.is(k::Term::Kind::Unnamed)) {
      std::size_t i = sp.head.index();
      if (i < extra) {
        if (!sp.args.empty())
          throw TranslationError("variable applied to arguments in " + where + ": not first-order");
        std::size_t j = extra - 1 - i;
        // goal variables are placeholders resolved once all symbols are known
        return mode == Mode::Axiom ? FoTerm::var(j) : FoTerm::var(kGoalVarBase + j);
      }
      std::size_t level = depth_ - 1 - (i - extra);
      ref = {KernelRef::Kind::Local, hole_.unnamed.at(i - extra).tag.name, level};
    } else if (sp.head.is(k::Term::Kind::Named)) {
      ref = {KernelRef::Kind::Global, sp.head.name(), 0};
    } else {
      throw TranslationError("subterm " + show(t, extra) + " of " + where + " is not first-order");
    }
    SymbolId f = lookup(ref, where);
    if (symbols_[f].arity != sp.args.size())
      throw TranslationError("'" + ref.name + "' is applied to " + std::to_string(sp.args.size()) +
                             " arguments in " + where + " but has arity " +
                             std::to_string(symbols_[f].arity) + " (partial application is not supported)");
    std::vector<FoTerm> args;
    for (const auto& a : sp.args) args.push_back(fo(a, extra, mode, where));
    return FoTerm::fun(f, std::move(args));
  }

  FoTerm replace_goal_vars(const FoTerm& t, const std::vector<SymbolId>& syms) const {
    if (t.is_var()) return FoTerm::fun(syms.at(t.var_id() - kGoalVarBase));
    std::vector<FoTerm> args;
    for (const auto& a : t.args()) args.push_back(replace_goal_vars(a, syms));
    return FoTerm::fun(t.symbol(), std::move(args));
  }

  std::pair<std::pair<FoTerm, FoTerm>, std::size_t> read_axiom(const std::string& name, const k::Term& type) {
    k::Term t = norm(type);
    std::vector<std::string> binders;
    while (t.is(k::Term::Kind::Pi)) {
      std::size_t j = binders.size();
      std::string b = t.tag().name.empty() ? "_" : t.tag().name;
      if (!same(t.domain(), k::shift(j, 0, base_))) {
        std::vector<std::string> inner(binders.rbegin(), binders.rend());
        throw TranslationError("axiom '" + name + "' is not first-order: binder '" + b + "' has type " +
                               show(t.domain(), j, inner) + " instead of " + show(base_, 0));
      }
      binders.push_back(b);
      t = t.codomain();
    }
    std::size_t n = binders.size();
    if (!t.is(k::Term::Kind::Id)) throw TranslationError("axiom '" + name + "' does not state an equation");
    if (!same(t.kid(0), k::shift(n, 0, base_)))
      throw TranslationError("axiom '" + name + "' is an equation over another type than " + show(base_, 0));
    std::string where = "axiom '" + name + "'";
    return {{fo(t.kid(1), n, Mode::Axiom, where), fo(t.kid(2), n, Mode::Axiom, where)}, n};
  }

  static constexpr VarId kGoalVarBase = 1u << 20;

  const k::CheckState& hole_;
  OrderingChoice ordering_;
  std::size_t depth_;
  bool explicit_signature_ = false;
  std::vector<Sym> symbols_;
  std::size_t max_binders_ = 0;
  k::Term base_;
  std::vector<std::string> goal_names_;
  std::vector<k::Term> goal_domains_;
  k::Term goal_lhs_, goal_rhs_;
};

}  // namespace

Translation serialize_problem(const k::CheckState& hole, const k::Term& goal,
                              const std::vector<std::string>& signature,
                              const std::vector<std::string>& axioms, OrderingChoice ordering,
                              double timeout, const std::string& name) {
  return Translator(hole, ordering).run(goal, signature, axioms, timeout, name);
}

}  // namespace mella::bridge
