#include "mella/rewriting/ordering.hpp"

#include <algorithm>
#include <stdexcept>

namespace mella::rewriting {

std::string_view to_string(Cmp c) {
  switch (c) {
    case Cmp::Greater: return "Greater";
    case Cmp::Less: return "Less";
    case Cmp::Equal: return "Equal";
    case Cmp::Incomparable: return "Incomparable";
  }
  return "?";
}

void Ordering::set_precedence(const Signature& sig, const std::vector<SymbolId>& precedence) {
  if (precedence.size() != sig.size())
    throw std::invalid_argument("precedence must list every signature symbol exactly once");
  rank_.assign(sig.size(), 0);
  std::vector<bool> seen(sig.size(), false);
  for (std::size_t i = 0; i < precedence.size(); ++i) {
    SymbolId f = precedence[i];
    if (f >= sig.size() || seen[f])
      throw std::invalid_argument("precedence must list every signature symbol exactly once");
    seen[f] = true;
    rank_[f] = precedence.size() - i;
  }
  precedence_ = precedence;
}

Ordering Ordering::lpo(const Signature& sig, const std::vector<SymbolId>& precedence) {
  Ordering o;
  o.kind_ = Kind::LPO;
  o.set_precedence(sig, precedence);
  o.weights_.assign(sig.size(), 1);
  return o;
}

Ordering Ordering::kbo(const Signature& sig, const std::vector<SymbolId>& precedence,
                       const std::map<SymbolId, unsigned>& weights, unsigned var_weight) {
  Ordering o;
  o.kind_ = Kind::KBO;
  o.set_precedence(sig, precedence);
  o.var_weight_ = var_weight;
  o.weights_.assign(sig.size(), 1);
  for (const auto& [f, w] : weights) {
    if (f >= sig.size()) throw std::invalid_argument("weight for unknown symbol");
    o.weights_[f] = w;
  }
  if (var_weight == 0) throw std::invalid_argument("KBO variable weight must be positive");
  for (SymbolId f = 0; f < sig.size(); ++f) {
    const auto& sym = sig.symbol(f);
    if (sym.arity() == 0 && o.weights_[f] < var_weight)
      throw std::invalid_argument("KBO weight of constant '" + sym.name +
                                  "' is below the variable weight");
    if (sym.arity() == 1 && o.weights_[f] == 0 && precedence.front() != f)
      throw std::invalid_argument("KBO weight-0 unary symbol '" + sym.name +
                                  "' must be greatest in the precedence");
  }
  return o;
}

void Ordering::add_lowest(SymbolId f, unsigned weight) {
  if (f != rank_.size()) throw std::invalid_argument("add_lowest expects the next symbol id");
  for (auto& r : rank_) ++r;
  rank_.push_back(1);
  precedence_.push_back(f);
  weights_.push_back(std::max(weight, var_weight_));
}

bool Ordering::greater(const FoTerm& s, const FoTerm& t) const {
  return kind_ == Kind::LPO ? lpo_greater(*this, s, t) : kbo_greater(*this, s, t);
}

Cmp Ordering::compare(const FoTerm& s, const FoTerm& t) const {
  return kind_ == Kind::LPO ? lpo_compare(*this, s, t) : kbo_compare(*this, s, t);
}

bool lpo_greater(const Ordering& o, const FoTerm& s, const FoTerm& t) {
  if (s.is_var()) return false;
  if (t.is_var()) return occurs(t.var_id(), s);
  for (const auto& si : s.args())
    if (si == t || lpo_greater(o, si, t)) return true;
  auto dominates_args = [&](std::size_t from) {
    for (std::size_t j = from; j < t.arity(); ++j)
      if (!lpo_greater(o, s, t.arg(j))) return false;
    return true;
  };
  std::size_t f = o.rank(s.symbol()), g = o.rank(t.symbol());
  if (f > g) return dominates_args(0);
  if (f < g) return false;
  for (std::size_t i = 0; i < s.arity(); ++i) {
    if (s.arg(i) == t.arg(i)) continue;
    return lpo_greater(o, s.arg(i), t.arg(i)) && dominates_args(i + 1);
  }
  return false;
}

unsigned long kbo_weight(const Ordering& o, const FoTerm& t) {
  if (t.is_var()) return o.var_weight();
  unsigned long w = o.weight(t.symbol());
  for (const auto& a : t.args()) w += kbo_weight(o, a);
  return w;
}

namespace {

void count_vars(const FoTerm& t, std::map<VarId, long>& counts, long delta) {
  if (t.ground()) return;
  if (t.is_var()) {
    counts[t.var_id()] += delta;
    return;
  }
  for (const auto& a : t.args()) count_vars(a, counts, delta);
}

bool kbo_rec(const Ordering& o, const FoTerm& s, const FoTerm& t) {
  if (s.is_var()) return false;
  std::map<VarId, long> counts;
  count_vars(s, counts, 1);
  count_vars(t, counts, -1);
  for (const auto& [v, c] : counts)
    if (c < 0) return false;
  unsigned long ws = kbo_weight(o, s), wt = kbo_weight(o, t);
  if (ws != wt) return ws > wt;
  // equal weight and t's variables covered: t a variable means s = f^n(t)
  if (t.is_var()) return true;
  std::size_t f = o.rank(s.symbol()), g = o.rank(t.symbol());
  if (f != g) return f > g;
  for (std::size_t i = 0; i < s.arity(); ++i) {
    if (s.arg(i) == t.arg(i)) continue;
    return kbo_rec(o, s.arg(i), t.arg(i));
  }
  return false;
}

}  // namespace

bool kbo_greater(const Ordering& o, const FoTerm& s, const FoTerm& t) { return kbo_rec(o, s, t); }

Cmp lpo_compare(const Ordering& o, const FoTerm& s, const FoTerm& t) {
  if (s == t) return Cmp::Equal;
  if (lpo_greater(o, s, t)) return Cmp::Greater;
  if (lpo_greater(o, t, s)) return Cmp::Less;
  return Cmp::Incomparable;
}

Cmp kbo_compare(const Ordering& o, const FoTerm& s, const FoTerm& t) {
  if (s == t) return Cmp::Equal;
  if (kbo_greater(o, s, t)) return Cmp::Greater;
  if (kbo_greater(o, t, s)) return Cmp::Less;
  return Cmp::Incomparable;
}

}  // namespace mella::rewriting
