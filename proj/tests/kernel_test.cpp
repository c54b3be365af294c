#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mella/kernel/basis.hpp"
#include "mella/kernel/check.hpp"
#include "mella/kernel/normalize.hpp"
#include "mella/kernel/pretty.hpp"
#include "support/term_gen.hpp"

using namespace mella::kernel;

namespace {

Term U(std::size_t n) { return Term::unnamed(n); }
Term N(const char* s) { return Term::named(s); }

// Rewrites every tag and display name to junk; equality must not notice.
Term scramble(const Term& t, int& counter) {
  std::string junk = "q" + std::to_string(counter++);
  switch (t.kind()) {
    case Term::Kind::Unnamed: return Term::unnamed(t.index(), junk);
    case Term::Kind::Pi:
      return Term::pi(junk, scramble(t.domain(), counter), scramble(t.codomain(), counter));
    case Term::Kind::Lam: return Term::lam(junk, scramble(t.body(), counter));
    default: {
      if (t.kids().empty()) return t;
      std::vector<Term> kids;
      for (const auto& k : t.kids()) kids.push_back(scramble(k, counter));
      return with_kids(t, kids);
    }
  }
}

}  // namespace

TEST_CASE("shift examples") {
  CHECK(shift(1, 0, U(0)) == U(1));
  CHECK(shift(1, 0, Term::lam("x", Term::app(U(0), U(1)))) == Term::lam("x", Term::app(U(0), U(2))));
  Term closed = Term::lam("x", U(0));
  CHECK(shift(5, 0, closed) == closed);
  CHECK(shift(-1, 0, U(3)) == U(2));
  CHECK(shift(2, 1, Term::app(U(0), U(1))) == Term::app(U(0), U(3)));
}

TEST_CASE("negative shift underflow is an invalid-context error") {
  try {
    shift(-1, 0, Term::app(U(0), U(2)));
    FAIL("expected underflow");
  } catch (const TypeError& e) {
    CHECK(e.kind() == ErrorKind::InvalidContext);
  }
}

TEST_CASE("substitute examples") {
  CHECK(substitute(0, N("a"), U(0)) == N("a"));
  CHECK(substitute(0, N("a"), Term::lam("x", U(1))) == Term::lam("x", N("a")));
  // s is shifted under binders
  CHECK(substitute(0, U(3), Term::lam("x", Term::app(U(0), U(1)))) ==
        Term::lam("x", Term::app(U(0), U(4))));
  // no implicit decrement
  CHECK(substitute(0, N("a"), Term::app(U(0), U(1))) == Term::app(N("a"), U(1)));
}

TEST_CASE("lookupUnnamed shifts by n + 1") {
  UnnamedContext d;
  d.push("A", Term::star());
  d.push("x", U(0));
  CHECK(lookup_unnamed(d, 0) == U(1));
  CHECK(lookup_unnamed(d, 1) == Term::star());

  UnnamedContext three;
  Term C = Term::app(U(0), U(1));
  three.push("c", C);
  three.push("b", N("B"));
  three.push("a", N("A"));
  CHECK(lookup_unnamed(three, 0) == N("A"));
  CHECK(lookup_unnamed(three, 2) == shift(3, 0, C));
  try {
    lookup_unnamed(three, 3);
    FAIL("expected unbound");
  } catch (const TypeError& e) {
    CHECK(e.kind() == ErrorKind::UnboundName);
  }
}

TEST_CASE("setR and axiom sorts") {
  CHECK(set_r(Sort::star(), Sort::star()) == Sort::star());
  CHECK(set_r(Sort::box(2), Sort::box(3)) == Sort::box(3));
  CHECK(set_r(Sort::box(7), Sort::star()) == Sort::star());
  CHECK(set_r(Sort::star(), Sort::box(4)) == Sort::box(4));
  CHECK(axiom_sort(Sort::star()) == Sort::box(0));
  CHECK(axiom_sort(Sort::box(0)) == Sort::box(1));
  CHECK(axiom_sort(Sort::box(9)) == Sort::box(10));
}

TEST_CASE("normalize examples") {
  CHECK(normalize(Term::app(Term::lam("x", U(0)), N("a"))) == N("a"));
  Term j = Term::j({N("A"), N("C"), N("e"), N("x"), N("x"), Term::refl()});
  CHECK(normalize(j) == Term::app(N("e"), N("x")));
  CHECK(normalize(Term::ann(N("a"), N("A"))) == N("a"));
  // stuck J
  Term stuck = Term::j({N("A"), N("C"), N("e"), N("x"), N("y"), N("h")});
  CHECK(normalize(stuck) == stuck);
}

TEST_CASE("normalize reports fuel exhaustion") {
  Term omega = Term::lam("x", Term::app(U(0), U(0)));
  try {
    normalize(Term::app(omega, omega), {1000, nullptr});
    FAIL("expected fuel exhaustion");
  } catch (const TypeError& e) {
    CHECK(e.kind() == ErrorKind::UniverseError);
  }
}

TEST_CASE("betaEqual") {
  Term t = Term::pi("x", N("A"), U(0));
  CHECK(beta_equal(t, t));
  CHECK(beta_equal(Term::app(Term::lam("x", U(0)), Term::star()), Term::star()));
  CHECK_FALSE(beta_equal(N("a"), N("b")));
}

TEST_CASE("definitions unfold only when asked") {
  NamedContext g;
  g.insert("A", {std::nullopt, Term::star()});
  g.insert("a", {std::nullopt, N("A")});
  g.insert("c", {N("a"), N("A")});
  CHECK(normalize(N("c")) == N("c"));
  CHECK(normalize(N("c"), {kDefaultFuel, &g}) == N("a"));
  CHECK_FALSE(beta_equal(N("c"), N("a")));
  CHECK(beta_equal(N("c"), N("a"), &g));
}

TEST_CASE("infer examples") {
  CheckState st;
  CHECK(infer(st, Term::star()) == Term::box(0));
  CHECK(infer(st, Term::box(3)) == Term::box(4));

  st.named.insert("A", {std::nullopt, Term::star()});
  st.named.insert("a", {std::nullopt, N("A")});
  CHECK(infer(st, N("a")) == N("A"));

  // f : (x : A) -> A, so f a : A after down-shifting [0 -> up a] body
  st.named.insert("f", {std::nullopt, Term::pi("x", N("A"), N("A"))});
  CHECK(infer(st, Term::app(N("f"), N("a"))) == N("A"));

  // a dependent codomain: d : (T : *) -> T -> T, d A a : A
  st.named.insert("d", {std::nullopt, Term::pi("T", Term::star(), Term::pi("_", U(0), U(1)))});
  CHECK(infer(st, Term::app(N("d"), {N("A"), N("a")})) == N("A"));

  CHECK(infer(st, Term::pi("x", N("A"), N("A"))) == Term::star());
  CHECK(infer(st, Term::pi("T", Term::star(), U(0))) == Term::star());
  CHECK(infer(st, Term::pi("_", Term::star(), Term::star())) == Term::box(0));
  CHECK(infer(st, Term::id(N("A"), N("a"), N("a"))) == Term::star());
}

TEST_CASE("T-App result matches the closure oracle") {
  testgen::Oracle oracle;
  CheckState st;
  st.named.insert("A", {std::nullopt, Term::star()});
  st.named.insert("x", {std::nullopt, N("A")});
  // F : (T : *) -> T -> T applied to A gives T[0 -> A]
  Term cod = Term::pi("_", U(0), U(1));
  st.named.insert("F", {std::nullopt, Term::pi("T", Term::star(), cod)});
  Term got = infer(st, Term::app(N("F"), N("A")));
  Term expected = shift(-1, 0, oracle.substitute(0, shift(1, 0, N("A")), cod));
  CHECK(got == expected);
  CHECK(got == Term::pi("_", N("A"), N("A")));
}

TEST_CASE("unbound names and non-functions") {
  CheckState st;
  try {
    infer(st, N("nope"));
    FAIL("expected error");
  } catch (const TypeError& e) {
    CHECK(e.kind() == ErrorKind::UnboundName);
  }
  st.named.insert("A", {std::nullopt, Term::star()});
  try {
    infer(st, Term::app(N("A"), N("A")));
    FAIL("expected error");
  } catch (const TypeError& e) {
    CHECK(e.kind() == ErrorKind::Mismatch);
  }
  try {
    infer(st, Term::lam("x", U(0)));
    FAIL("expected error");
  } catch (const TypeError& e) {
    CHECK(e.kind() == ErrorKind::NoRuleApplies);
  }
}

TEST_CASE("lambda hole derivation") {
  // \ ? against (A : *) -> A -> A  i.e.  Pi * . Pi 0 . 1
  Term type = Term::pi("A", Term::star(), Term::pi("_", U(0), U(1)));
  CheckState st;
  CHECK(check(st, Term::lam("A", Term::meta(0)), type) == "T-Abs");
  REQUIRE(st.metas.size() == 1);
  const auto& mc = st.metas[0];
  CHECK(mc.meta_id == 0);
  CHECK(mc.expected == Term::pi("_", U(0), U(1)));
  REQUIRE(mc.captured_unnamed.size() == 1);
  CHECK(mc.captured_unnamed.at(0).type == Term::star());
  CHECK(st.meta_counter == 1);

  CheckState done = instantiate_meta(st, 0, Term::lam("x", U(0)));
  CHECK(done.metas.empty());

  CheckState refined = instantiate_meta(st, 0, Term::meta(1));
  REQUIRE(refined.metas.size() == 1);
  CHECK(refined.metas[0].meta_id == 1);
  CHECK(refined.metas[0].expected == mc.expected);
  CHECK(refined.meta_counter == 2);

  try {
    instantiate_meta(st, 0, Term::star());
    FAIL("expected error");
  } catch (const TypeError&) {
  }
  CHECK(st.metas.size() == 1);
}

TEST_CASE("refl checking") {
  CheckState st;
  st.named.insert("A", {std::nullopt, Term::star()});
  st.named.insert("a", {std::nullopt, N("A")});
  st.named.insert("b", {std::nullopt, N("A")});
  CHECK(check(st, Term::refl(), Term::id(N("A"), N("a"), N("a"))) == "Eq-Refl");
  Term redex = Term::app(Term::ann(Term::lam("x", U(0)), Term::pi("_", N("A"), N("A"))), N("a"));
  CHECK(check(st, Term::refl(), Term::id(N("A"), redex, N("a"))) == "Eq-Refl");
  try {
    check(st, Term::refl(), Term::id(N("A"), N("a"), N("b")));
    FAIL("expected mismatch");
  } catch (const TypeError& e) {
    CHECK(e.kind() == ErrorKind::Mismatch);
  }
}

TEST_CASE("check log records rule names by depth") {
  CheckState st;
  st.options.log = true;
  Term type = Term::pi("A", Term::star(), Term::pi("_", U(0), U(1)));
  check(st, Term::lam("A", Term::lam("x", U(0))), type);
  REQUIRE_FALSE(st.log.empty());
  CHECK(st.log.back().rule == "T-Abs");
  CHECK(st.log.back().depth == 1);
  bool saw_unnamed = false;
  for (const auto& e : st.log) saw_unnamed = saw_unnamed || e.rule == "T-Unnamed";
  CHECK(saw_unnamed);
}

TEST_CASE("equational basis") {
  NamedContext g;
  install_basis(g);
  REQUIRE(g.size() == 5);
  const char* names[] = {"elimJ", "sym", "trans", "cong", "subst"};
  for (std::size_t i = 0; i < 5; ++i) CHECK(g.entries()[i].name == names[i]);

  CheckState st;
  st.named = g;
  for (const auto& def : equational_basis()) CHECK(infer(st, def.type) == Term::star());

  CHECK(pretty(equational_basis()[0].type) ==
        "(A : *) (C : (x y : A) -> Id A x y -> *) -> ((x : A) -> C x x refl) -> "
        "(x y : A) (P : Id A x y) -> C x y P");
  CHECK(pretty(equational_basis()[4].type) ==
        "(A : *) (P : A -> *) (a b : A) -> Id A a b -> P a -> P b");

  NamedContext h = g;
  h.insert("A", {std::nullopt, Term::star()});
  h.insert("B", {std::nullopt, Term::star()});
  h.insert("a", {std::nullopt, N("A")});
  h.insert("f", {std::nullopt, Term::pi("_", N("A"), N("B"))});
  NormalizeOptions delta{kDefaultFuel, &h};
  Term A = N("A"), a = N("a");
  CHECK(normalize(Term::app(N("sym"), {A, a, a, Term::refl()}), delta) == Term::refl());
  CHECK(normalize(Term::app(N("trans"), {A, a, a, a, Term::refl(), Term::refl()}), delta) ==
        Term::refl());
  CHECK(normalize(Term::app(N("cong"), {A, N("B"), a, a, N("f"), Term::refl()}), delta) ==
        Term::refl());

  st.named = h;
  CHECK(infer(st, Term::app(N("sym"), {A, a, a, Term::refl()})) == Term::id(A, a, a));
}

TEST_CASE("pretty printing") {
  Term type = Term::pi("A", Term::star(), Term::pi("_", U(0), U(1)));
  CHECK(pretty(type) == "(A : *) -> A -> A");
  CHECK(pretty(Term::lam("_", Term::lam("x", U(0)))) == "\\_ x -> x");
  CHECK(pretty(Term::box(2)) == "□2");
  // shadowing gets primes
  Term shadow = Term::lam("x", Term::lam("x", Term::app(U(0), U(1))));
  CHECK(pretty(shadow) == "\\x x' -> x' x");
}

// ---------------------------------------------------------------------------
// Property suites.

TEST_CASE("property: shift composition") {
  testgen::RawGen gen(11);
  for (int i = 0; i < 2000; ++i) {
    Term t = gen.term(5);
    std::int64_t d = gen.below(4), e = gen.below(4);
    REQUIRE(shift(d, 0, shift(e, 0, t)) == shift(d + e, 0, t));
    std::size_t c = gen.below(3);
    REQUIRE(shift(-e, c, shift(e, c, t)) == t);
  }
}

TEST_CASE("property: locally closed terms are shift fixpoints") {
  testgen::RawGen gen(12);
  for (int i = 0; i < 2000; ++i) {
    Term t = gen.closed(5);
    REQUIRE(t.locally_closed());
    REQUIRE(shift(gen.below(7) + 1, 0, t) == t);
    // and more generally nothing at or above the cutoff moves
    Term open = gen.term(4, 2);
    REQUIRE(shift(3, open.free_bound(), open) == open);
  }
}

TEST_CASE("property: substitution agrees with the closure oracle") {
  testgen::RawGen gen(13);
  testgen::Oracle oracle;
  for (int i = 0; i < 2000; ++i) {
    Term t = gen.term(5);
    Term s = gen.term(3);
    std::size_t k = gen.below(4);
    REQUIRE(substitute(k, s, t) == oracle.substitute(k, s, t));

    // the T-App shape: index 0 unused after up-shift, so cancellation recovers t
    Term x = gen.term(3);
    Term up = shift(1, 0, t);
    Term replaced = substitute(0, shift(1, 0, x), up);
    REQUIRE_FALSE(occurs_free(0, replaced));
    REQUIRE(shift(-1, 0, replaced) == t);
    REQUIRE(instantiate(up, x) == t);
  }
}

TEST_CASE("property: normalize is idempotent and preserves types") {
  NamedContext sig = testgen::typed_signature();
  testgen::TypedGen gen(14);
  int dependent = 0, redexes = 0;
  for (int i = 0; i < 1500; ++i) {
    testgen::Typed tt = gen.any(4);
    CheckState st;
    st.named = sig;
    REQUIRE_NOTHROW(check(st, tt.term, tt.type));
    Term n = normalize(tt.term);
    REQUIRE(normalize(n) == n);
    CheckState st2;
    st2.named = sig;
    INFO(pretty(tt.term, {}, &sig));
    REQUIRE_NOTHROW(check(st2, n, tt.type));
    Term nd = normalize(tt.term, {kDefaultFuel, &sig});
    REQUIRE(normalize(nd, {kDefaultFuel, &sig}) == nd);
    if (!(n == tt.term)) ++redexes;
    if (tt.type.is(Term::Kind::App) || tt.type.is(Term::Kind::Id)) ++dependent;
  }
  CHECK(redexes > 300);
  CHECK(dependent > 200);
}

TEST_CASE("property: tags never matter") {
  testgen::RawGen gen(15);
  NamedContext sig = testgen::typed_signature();
  testgen::TypedGen typed(16);
  int counter = 0;
  for (int i = 0; i < 1500; ++i) {
    Term t = gen.term(5);
    Term s = scramble(t, counter);
    REQUIRE(s == t);
    REQUIRE(shift(2, 0, s) == shift(2, 0, t));

    testgen::Typed tt = typed.any(3);
    Term renamed = scramble(tt.term, counter);
    REQUIRE(beta_equal(renamed, tt.term));
    REQUIRE(normalize(renamed) == normalize(tt.term));
    CheckState a, b;
    a.named = sig;
    b.named = sig;
    REQUIRE(check(a, tt.term, tt.type) == check(b, renamed, scramble(tt.type, counter)));
  }
}

TEST_CASE("property: checking is deterministic") {
  NamedContext sig = testgen::typed_signature();
  testgen::TypedGen gen(17);
  for (int i = 0; i < 300; ++i) {
    testgen::Typed tt = gen.any(4);
    CheckState a, b;
    a.named = sig;
    b.named = sig;
    a.options.log = b.options.log = true;
    check(a, tt.term, tt.type);
    check(b, tt.term, tt.type);
    REQUIRE(a.log.size() == b.log.size());
    for (std::size_t k = 0; k < a.log.size(); ++k) {
      REQUIRE(a.log[k].rule == b.log[k].rule);
      REQUIRE(a.log[k].judgement == b.log[k].judgement);
    }
  }
}
