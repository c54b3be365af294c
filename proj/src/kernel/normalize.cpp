#include "mella/kernel/normalize.hpp"

#include "mella/kernel/error.hpp"

namespace mella::kernel {

namespace {

class Normalizer {
 public:
  explicit Normalizer(const NormalizeOptions& o) : fuel_(o.fuel), unfold_(o.unfold) {}

  Term nf(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Sort:
      case Term::Kind::Unnamed:
      case Term::Kind::Refl:
      case Term::Kind::Meta:
        return t;
      case Term::Kind::Named: {
        if (!unfold_) return t;
        const Binding* b = unfold_->find(t.name());
        if (!b || !b->definiens) return t;
        tick();
        return nf(*b->definiens);
      }
      case Term::Kind::Ann:
        return nf(t.kid(0));
      case Term::Kind::App: {
        Term f = nf(t.fn());
        if (f.is(Term::Kind::Lam)) {
          tick();
          return nf(instantiate(f.body(), t.arg()));
        }
        Term x = nf(t.arg());
        if (f.same_node(t.fn()) && x.same_node(t.arg())) return t;
        return Term::app(std::move(f), std::move(x));
      }
      case Term::Kind::J: {
        Term proof = nf(t.kid(5));
        if (proof.is(Term::Kind::Refl)) {
          tick();
          return nf(Term::app(t.kid(2), t.kid(3)));
        }
        std::vector<Term> kids;
        for (std::size_t i = 0; i < 5; ++i) kids.push_back(nf(t.kid(i)));
        kids.push_back(std::move(proof));
        return with_kids(t, std::move(kids));
      }
      default: {
        std::vector<Term> kids;
        bool changed = false;
        for (const auto& k : t.kids()) {
          kids.push_back(nf(k));
          changed = changed || !kids.back().same_node(k);
        }
        return changed ? with_kids(t, std::move(kids)) : t;
      }
    }
  }

 private:
  void tick() {
    if (fuel_ == 0)
      throw TypeError(ErrorKind::UniverseError, "no normal form within the step budget");
    --fuel_;
  }

  std::size_t fuel_;
  const NamedContext* unfold_;
};

}  // namespace

Term normalize(const Term& t, const NormalizeOptions& options) {
  return Normalizer(options).nf(t);
}

bool beta_equal(const Term& a, const Term& b, const NamedContext* globals, std::size_t fuel) {
  if (a == b) return true;
  if (normalize(a, {fuel, nullptr}) == normalize(b, {fuel, nullptr})) return true;
  if (!globals) return false;
  return normalize(a, {fuel, globals}) == normalize(b, {fuel, globals});
}

}  // namespace mella::kernel
