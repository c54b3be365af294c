#include "mella/rewriting/substitution.hpp"

#include <vector>

namespace mella::rewriting {

FoTerm Substitution::apply(const FoTerm& t) const {
  if (t.ground() || map_.empty()) return t;
  if (t.is_var()) {
    const FoTerm* b = lookup(t.var_id());
    return b ? *b : t;
  }
  std::vector<FoTerm> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(apply(a));
    changed = changed || !(args.back() == a);
  }
  return changed ? FoTerm::fun(t.symbol(), std::move(args)) : t;
}

std::string to_string(const Substitution& s, const Signature& sig) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, t] : s.bindings()) {
    if (!first) out += ", ";
    first = false;
    out += var_name(v) + " <- " + to_string(t, sig);
  }
  return out + "}";
}

bool match_into(const FoTerm& pattern, const FoTerm& subject, Substitution& s) {
  if (pattern.is_var()) {
    if (const FoTerm* b = s.lookup(pattern.var_id())) return *b == subject;
    s.bind(pattern.var_id(), subject);
    return true;
  }
  if (subject.is_var() || pattern.symbol() != subject.symbol() || pattern.arity() != subject.arity())
    return false;
  if (pattern.ground()) return pattern == subject;
  for (std::size_t i = 0; i < pattern.arity(); ++i)
    if (!match_into(pattern.arg(i), subject.arg(i), s)) return false;
  return true;
}

std::optional<Substitution> match(const FoTerm& pattern, const FoTerm& subject) {
  Substitution s;
  if (!match_into(pattern, subject, s)) return std::nullopt;
  return s;
}

namespace {

// Triangular-form unification followed by resolution to idempotent form.
class Unifier {
 public:
  bool unify(const FoTerm& a, const FoTerm& b) {
    FoTerm x = walk(a), y = walk(b);
    if (x.is_var() && y.is_var() && x.var_id() == y.var_id()) return true;
    if (x.is_var()) return bind(x.var_id(), y);
    if (y.is_var()) return bind(y.var_id(), x);
    if (x.symbol() != y.symbol() || x.arity() != y.arity()) return false;
    for (std::size_t i = 0; i < x.arity(); ++i)
      if (!unify(x.arg(i), y.arg(i))) return false;
    return true;
  }

  Substitution result() {
    Substitution out;
    for (const auto& [v, t] : map_) out.bind(v, resolve(t));
    return out;
  }

 private:
  FoTerm walk(FoTerm t) {
    while (t.is_var()) {
      auto it = map_.find(t.var_id());
      if (it == map_.end()) break;
      t = it->second;
    }
    return t;
  }

  bool occurs_walk(VarId v, const FoTerm& t) {
    FoTerm w = walk(t);
    if (w.is_var()) return w.var_id() == v;
    for (const auto& a : w.args())
      if (occurs_walk(v, a)) return true;
    return false;
  }

  bool bind(VarId v, const FoTerm& t) {
    if (occurs_walk(v, t)) return false;
    map_[v] = t;
    return true;
  }

  FoTerm resolve(const FoTerm& t) {
    FoTerm w = walk(t);
    if (w.is_var() || w.ground()) return w;
    std::vector<FoTerm> args;
    for (const auto& a : w.args()) args.push_back(resolve(a));
    return FoTerm::fun(w.symbol(), std::move(args));
  }

  std::map<VarId, FoTerm> map_;
};

}  // namespace

std::optional<Substitution> unify(const FoTerm& a, const FoTerm& b) {
  Unifier u;
  if (!u.unify(a, b)) return std::nullopt;
  return u.result();
}

FoTerm rename(const FoTerm& t, std::size_t offset) {
  if (t.ground() || offset == 0) return t;
  if (t.is_var()) return FoTerm::var(t.var_id() + offset, t.sort());
  std::vector<FoTerm> args;
  for (const auto& a : t.args()) args.push_back(rename(a, offset));
  return FoTerm::fun(t.symbol(), std::move(args));
}

FoTerm rename(const FoTerm& t, const std::map<VarId, VarId>& table) {
  if (t.ground()) return t;
  if (t.is_var()) {
    auto it = table.find(t.var_id());
    return it == table.end() ? t : FoTerm::var(it->second, t.sort());
  }
  std::vector<FoTerm> args;
  for (const auto& a : t.args()) args.push_back(rename(a, table));
  return FoTerm::fun(t.symbol(), std::move(args));
}

}  // namespace mella::rewriting
