#include "mella/kernel/pretty.hpp"

#include <algorithm>
#include <sstream>

namespace mella::kernel {

namespace {

enum class Prec { Lowest = 0, Arrow = 1, App = 2, Atom = 3 };

class Printer {
 public:
  Printer(std::vector<std::string> scope, const NamedContext* globals)
      : scope_(std::move(scope)), globals_(globals) {}

  std::string print(const Term& t, Prec ctx) {
    std::ostringstream out;
    emit(out, t, ctx);
    return out.str();
  }

 private:
  bool taken(const std::string& name) const {
    if (std::find(scope_.begin(), scope_.end(), name) != scope_.end()) return true;
    return globals_ && globals_->contains(name);
  }

  std::string fresh(std::string base) {
    if (base.empty() || base == "_") base = "x";
    while (taken(base)) base += "'";
    return base;
  }

  // Name for a binder; unused binders in lambdas print as "_".
  std::string binder(const Tag& tag, bool used, bool allow_underscore) {
    if (!used && allow_underscore) return "_";
    return fresh(tag.name);
  }

  void push(const std::string& n) { scope_.insert(scope_.begin(), n); }
  void pop() { scope_.erase(scope_.begin()); }

  void emit(std::ostream& out, const Term& t, Prec ctx) {
    switch (t.kind()) {
      case Term::Kind::Sort:
        if (t.sort_value().is_star())
          out << "*";
        else
          out << "□" << t.sort_value().level;
        return;
      case Term::Kind::Unnamed:
        if (t.index() < scope_.size())
          out << scope_[t.index()];
        else
          out << "#" << t.index();
        return;
      case Term::Kind::Named:
        out << t.name();
        return;
      case Term::Kind::Refl:
        out << "refl";
        return;
      case Term::Kind::Meta:
        out << "?";
        return;
      case Term::Kind::Lam: {
        bool paren = ctx > Prec::Lowest;
        if (paren) out << "(";
        out << "\\";
        Term cur = t;
        std::size_t pushed = 0;
        while (cur.is(Term::Kind::Lam)) {
          std::string n = binder(cur.tag(), occurs_free(0, cur.body()), true);
          out << (pushed ? " " : "") << n;
          push(n == "_" ? std::string("_") : n);
          ++pushed;
          cur = cur.body();
        }
        out << " -> ";
        emit(out, cur, Prec::Lowest);
        for (std::size_t i = 0; i < pushed; ++i) pop();
        if (paren) out << ")";
        return;
      }
      case Term::Kind::Pi: {
        bool paren = ctx > Prec::Arrow;
        if (paren) out << "(";
        if (!occurs_free(0, t.codomain())) {
          emit(out, t.domain(), Prec::App);
          out << " -> ";
          push("_");
          emit(out, t.codomain(), Prec::Arrow);
          pop();
        } else {
          // Group consecutive dependent binders with syntactically equal domains.
          Term cur = t;
          std::size_t pushed = 0;
          while (cur.is(Term::Kind::Pi) && occurs_free(0, cur.codomain())) {
            std::string dom = print(cur.domain(), Prec::Lowest);
            std::vector<std::string> names;
            names.push_back(binder(cur.tag(), true, false));
            push(names.back());
            ++pushed;
            Term next = cur.codomain();
            while (next.is(Term::Kind::Pi) && occurs_free(0, next.codomain()) &&
                   next.domain() == shift(1, 0, cur.domain())) {
              cur = next;
              names.push_back(binder(cur.tag(), true, false));
              push(names.back());
              ++pushed;
              next = cur.codomain();
            }
            out << "(";
            for (std::size_t i = 0; i < names.size(); ++i) out << (i ? " " : "") << names[i];
            out << " : " << dom << ") ";
            cur = next;
          }
          out << "-> ";
          emit(out, cur, Prec::Arrow);
          for (std::size_t i = 0; i < pushed; ++i) pop();
        }
        if (paren) out << ")";
        return;
      }
      case Term::Kind::Ann: {
        bool paren = ctx > Prec::Lowest;
        if (paren) out << "(";
        emit(out, t.kid(0), Prec::Arrow);
        out << " :: ";
        emit(out, t.kid(1), Prec::Arrow);
        if (paren) out << ")";
        return;
      }
      case Term::Kind::App:
      case Term::Kind::Id:
      case Term::Kind::J: {
        bool paren = ctx > Prec::App;
        if (paren) out << "(";
        if (t.is(Term::Kind::App)) {
          Spine s = unapply(t);
          emit(out, s.head, Prec::App);
          for (const auto& a : s.args) {
            out << " ";
            emit(out, a, Prec::Atom);
          }
        } else {
          out << (t.is(Term::Kind::Id) ? "Id" : "J");
          for (const auto& a : t.kids()) {
            out << " ";
            emit(out, a, Prec::Atom);
          }
        }
        if (paren) out << ")";
        return;
      }
    }
  }

  std::vector<std::string> scope_;
  const NamedContext* globals_;
};

}  // namespace

std::string pretty(const Term& t, const std::vector<std::string>& scope,
                   const NamedContext* globals) {
  return Printer(scope, globals).print(t, Prec::Lowest);
}

}  // namespace mella::kernel
