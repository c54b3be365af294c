#pragma once

#include <functional>
#include <map>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "mella/kernel/basis.hpp"
#include "mella/kernel/context.hpp"
#include "mella/kernel/term.hpp"

namespace testgen {

using mella::kernel::Term;
using Kind = Term::Kind;

// ---------------------------------------------------------------------------
// Untyped terms with free indices, for the shift/substitution laws.

class RawGen {
 public:
  explicit RawGen(std::uint64_t seed) : rng_(seed) {}

  Term term(int depth, std::size_t free_vars = 4) { return go(depth, free_vars, 0); }

  Term closed(int depth) { return go(depth, 0, 0); }

  std::mt19937_64& rng() { return rng_; }

  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

 private:
  Term go(int depth, std::size_t free, std::size_t bound) {
    std::size_t vars = free + bound;
    if (depth <= 0) return leaf(vars);
    switch (below(9)) {
      case 0: return leaf(vars);
      case 1: return Term::pi(names_[below(3)], go(depth - 1, free, bound), go(depth - 1, free, bound + 1));
      case 2:
      case 3: return Term::lam(names_[below(3)], go(depth - 1, free, bound + 1));
      case 4:
      case 5: return Term::app(go(depth - 1, free, bound), go(depth - 1, free, bound));
      case 6: return Term::id(go(depth - 1, free, bound), go(depth - 1, free, bound), go(depth - 1, free, bound));
      case 7: return Term::ann(go(depth - 1, free, bound), go(depth - 1, free, bound));
      default: {
        std::array<Term, 6> a;
        for (auto& x : a) x = go(depth - 2, free, bound);
        return Term::j(a);
      }
    }
  }

  Term leaf(std::size_t vars) {
    int r = below(10);
    if (vars > 0 && r < 6) return Term::unnamed(below(static_cast<int>(vars)), "v");
    if (r < 8) return Term::named(consts_[below(3)]);
    if (r == 8) return Term::refl();
    return Term::star();
  }

  std::mt19937_64 rng_;
  const char* names_[3] = {"x", "y", "z"};
  const char* consts_[3] = {"a", "b", "c"};
};

// ---------------------------------------------------------------------------
// Closure-based substitution oracle. Terms are converted to a representation
// with unique binder names and named free variables; substitution is then
// plain name replacement (no capture possible), and the result is converted
// back to de Bruijn form.

struct NTerm;
using NPtr = std::shared_ptr<const NTerm>;
struct NTerm {
  Kind kind;
  std::string var;  // binder name (Pi/Lam), variable name (Var), constant (Named)
  bool is_free = false;
  std::size_t free_index = 0;
  Term leaf;  // Sort, Refl, Meta, Named
  std::vector<NPtr> kids;
};

class Oracle {
 public:
  NPtr to_named(const Term& t) {
    std::vector<std::string> scope;
    return conv(t, scope);
  }

  Term from_named(const NPtr& n) {
    std::vector<std::string> scope;
    return back(n, scope);
  }

  /// [k -> s]t without any index arithmetic in the substitution itself.
  Term substitute(std::size_t k, const Term& s, const Term& t) {
    NPtr nt = to_named(t);
    NPtr ns = to_named(s);
    return from_named(replace(nt, k, ns));
  }

 private:
  NPtr conv(const Term& t, std::vector<std::string>& scope) {
    auto n = std::make_shared<NTerm>();
    n->kind = t.kind();
    switch (t.kind()) {
      case Kind::Unnamed:
        if (t.index() < scope.size()) {
          n->var = scope[scope.size() - 1 - t.index()];
        } else {
          n->is_free = true;
          n->free_index = t.index() - scope.size();
        }
        return n;
      case Kind::Pi: {
        n->kids.push_back(conv(t.domain(), scope));
        n->var = fresh();
        scope.push_back(n->var);
        n->kids.push_back(conv(t.codomain(), scope));
        scope.pop_back();
        return n;
      }
      case Kind::Lam: {
        n->var = fresh();
        scope.push_back(n->var);
        n->kids.push_back(conv(t.body(), scope));
        scope.pop_back();
        return n;
      }
      case Kind::Sort:
      case Kind::Refl:
      case Kind::Meta:
      case Kind::Named:
        n->leaf = t;
        return n;
      default:
        for (const auto& k : t.kids()) n->kids.push_back(conv(k, scope));
        return n;
    }
  }

  NPtr replace(const NPtr& t, std::size_t k, const NPtr& s) {
    if (t->kind == Kind::Unnamed) return (t->is_free && t->free_index == k) ? s : t;
    if (t->kids.empty()) return t;
    auto n = std::make_shared<NTerm>(*t);
    for (auto& c : n->kids) c = replace(c, k, s);
    return n;
  }

  Term back(const NPtr& n, std::vector<std::string>& scope) {
    switch (n->kind) {
      case Kind::Unnamed: {
        if (n->is_free) return Term::unnamed(n->free_index + scope.size());
        for (std::size_t i = 0; i < scope.size(); ++i)
          if (scope[scope.size() - 1 - i] == n->var) return Term::unnamed(i);
        throw std::logic_error("oracle: unbound variable " + n->var);
      }
      case Kind::Pi: {
        Term dom = back(n->kids[0], scope);
        scope.push_back(n->var);
        Term cod = back(n->kids[1], scope);
        scope.pop_back();
        return Term::pi("x", dom, cod);
      }
      case Kind::Lam: {
        scope.push_back(n->var);
        Term body = back(n->kids[0], scope);
        scope.pop_back();
        return Term::lam("x", body);
      }
      case Kind::Sort:
      case Kind::Refl:
      case Kind::Meta:
      case Kind::Named:
        return n->leaf;
      case Kind::App: return Term::app(back(n->kids[0], scope), back(n->kids[1], scope));
      case Kind::Ann: return Term::ann(back(n->kids[0], scope), back(n->kids[1], scope));
      case Kind::Id:
        return Term::id(back(n->kids[0], scope), back(n->kids[1], scope), back(n->kids[2], scope));
      case Kind::J: {
        std::array<Term, 6> a;
        for (int i = 0; i < 6; ++i) a[i] = back(n->kids[i], scope);
        return Term::j(a);
      }
    }
    throw std::logic_error("oracle: bad node");
  }

  std::string fresh() { return "_v" + std::to_string(counter_++); }
  std::size_t counter_ = 0;
};

// ---------------------------------------------------------------------------
// Well-typed terms over a small signature, with beta, J and annotation
// redexes sprinkled in.
//
//   A B : *, a : A, b : B, f : A -> B, g : A -> A -> A, P : A -> *,
//   p : (x : A) -> P x, plus the equational basis.

inline mella::kernel::NamedContext typed_signature() {
  using namespace mella::kernel;
  NamedContext g;
  Term A = Term::named("A"), B = Term::named("B");
  g.insert("A", {std::nullopt, Term::star()});
  g.insert("B", {std::nullopt, Term::star()});
  g.insert("a", {std::nullopt, A});
  g.insert("b", {std::nullopt, B});
  g.insert("f", {std::nullopt, Term::pi("_", A, B)});
  g.insert("g", {std::nullopt, Term::pi("_", A, Term::pi("_", A, A))});
  g.insert("P", {std::nullopt, Term::pi("_", A, Term::star())});
  g.insert("p", {std::nullopt, Term::pi("x", A, Term::app(Term::named("P"), Term::unnamed(0, "x")))});
  install_basis(g);
  return g;
}

// Simple types over A and B, closed terms.
struct Ty {
  enum K { A, B, Arrow } k;
  std::shared_ptr<Ty> l, r;
};
using TyP = std::shared_ptr<Ty>;

inline TyP tyA() { return std::make_shared<Ty>(Ty{Ty::A, nullptr, nullptr}); }
inline TyP tyB() { return std::make_shared<Ty>(Ty{Ty::B, nullptr, nullptr}); }
inline TyP arrow(TyP l, TyP r) { return std::make_shared<Ty>(Ty{Ty::Arrow, l, r}); }

inline bool same(const TyP& x, const TyP& y) {
  if (x->k != y->k) return false;
  if (x->k != Ty::Arrow) return true;
  return same(x->l, y->l) && same(x->r, y->r);
}

inline Term to_term(const TyP& t) {
  switch (t->k) {
    case Ty::A: return Term::named("A");
    case Ty::B: return Term::named("B");
    default: return Term::pi("_", to_term(t->l), to_term(t->r));
  }
}

struct Typed {
  Term term;
  Term type;
};

class TypedGen {
 public:
  explicit TypedGen(std::uint64_t seed) : rng_(seed) {}

  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  TyP simple_type(int depth) {
    if (depth <= 0 || below(3) > 0) return below(2) ? tyA() : tyB();
    return arrow(simple_type(depth - 1), simple_type(depth - 1));
  }

  /// A closed, well-typed term of a randomly chosen type.
  Typed any(int depth) {
    switch (below(6)) {
      case 0: {
        // an equality proof: (Id A t t) via refl or a basis lemma
        return equality_proof(of(tyA(), depth - 1), depth);
      }
      case 1: {
        // dependent application: p t : P t
        Term t = of(tyA(), depth - 1);
        return {Term::app(Term::named("p"), t), Term::app(Term::named("P"), t)};
      }
      default: {
        TyP ty = simple_type(2);
        return {of(ty, depth), to_term(ty)};
      }
    }
  }

  /// A term of simple type `ty` in the current local scope.
  Term of(const TyP& ty, int depth) {
    int choice = depth <= 0 ? 0 : below(7);
    switch (choice) {
      case 1:
        if (ty->k == Ty::Arrow) return lambda(ty, depth);
        break;
      case 2: {
        // (\x -> body :: S -> T) u
        TyP s = below(2) ? tyA() : tyB();
        Term fn = Term::ann(lambda(arrow(s, ty), depth - 1), to_term(arrow(s, ty)));
        return Term::app(fn, of(s, depth - 1));
      }
      case 3:
        if (ty->k == Ty::A) {
          return Term::app(Term::named("g"), {of(tyA(), depth - 1), of(tyA(), depth - 1)});
        }
        if (ty->k == Ty::B) return Term::app(Term::named("f"), of(tyA(), depth - 1));
        break;
      case 4: {
        // J A (\x y _ -> T) (\x -> t) u u refl  reduces to t[u/x]
        Term u = of(tyA(), depth - 1);
        Term T = to_term(ty);
        Term motive = Term::lam("x", Term::lam("y", Term::lam("_", T)));
        Term base = Term::lam("x", under(tyA(), [&] { return of(ty, depth - 1); }));
        return Term::j({Term::named("A"), motive, base, u, u, Term::refl()});
      }
      case 5:
        return Term::ann(of(ty, depth - 1), to_term(ty));
      case 6: {
        // variable applied to arguments
        std::vector<std::size_t> fns;
        for (std::size_t i = 0; i < scope_.size(); ++i)
          if (scope_[i]->k == Ty::Arrow && same(scope_[i]->r, ty)) fns.push_back(i);
        if (!fns.empty()) {
          std::size_t lvl = fns[below(static_cast<int>(fns.size()))];
          return Term::app(var(lvl), of(scope_[lvl]->l, depth - 1));
        }
        break;
      }
      default:
        break;
    }
    return atom(ty, depth);
  }

  /// A proof of Id A u u for some u built from t.
  Typed equality_proof(const Term& t, int depth) {
    Term A = Term::named("A");
    Term tt = Term::id(A, t, t);
    switch (depth <= 0 ? 0 : below(4)) {
      case 1: return {Term::app(Term::named("sym"), {A, t, t, Term::refl()}), tt};
      case 2: return {Term::app(Term::named("trans"), {A, t, t, t, Term::refl(), Term::refl()}), tt};
      case 3: {
        Term fn = Term::lam("h", Term::app(Term::named("g"), {Term::unnamed(0, "h"), Term::named("a")}));
        Term fa = Term::app(Term::named("g"), {t, Term::named("a")});
        return {Term::app(Term::named("cong"), {A, A, t, t, fn, Term::refl()}), Term::id(A, fa, fa)};
      }
      default: return {Term::refl(), tt};
    }
  }

 private:
  Term lambda(const TyP& ty, int depth) {
    return Term::lam("x", under(ty->l, [&] { return of(ty->r, depth - 1); }));
  }

  template <class F>
  Term under(const TyP& ty, F&& f) {
    scope_.push_back(ty);
    Term r = f();
    scope_.pop_back();
    return r;
  }

  Term var(std::size_t level) { return Term::unnamed(scope_.size() - level - 1, "x"); }

  Term atom(const TyP& ty, int depth) {
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < scope_.size(); ++i)
      if (same(scope_[i], ty)) hits.push_back(i);
    if (!hits.empty() && below(3) > 0) return var(hits[below(static_cast<int>(hits.size()))]);
    switch (ty->k) {
      case Ty::A: return Term::named("a");
      case Ty::B: return Term::named("b");
      default:
        if (same(ty, arrow(tyA(), tyB())) && below(2)) return Term::named("f");
        return lambda(ty, std::max(depth, 1));
    }
  }

  std::mt19937_64 rng_;
  std::vector<TyP> scope_;  // outermost first
};

}  // namespace testgen
