#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "support/fo_gen.hpp"

using namespace mella::rewriting;
using fogen::Fixture;

namespace {

Problem group_problem(Fixture& f, const std::string& l, const std::string& r) {
  auto axioms = fogen::group_axioms(f);
  return Problem{f.sig, fogen::group_lpo(f), axioms, f.eq(l, r, Label::theorem())};
}

std::string subst_str(const Substitution& s, const Signature& sig) { return to_string(s, sig); }

}  // namespace

TEST_CASE("positions") {
  Fixture f = fogen::group();
  FoTerm t = f.t("f(a,i(a))");
  CHECK(f.str(subterm_at(t, {2})) == "i(a)");
  CHECK(f.str(replace_at(t, {}, f.t("e"))) == "e");
  CHECK(f.str(subterm_at(f.t("f(x,f(i(x),i(i(x))))"), {2})) == "f(i(x1),i(i(x1)))");
  CHECK(f.str(replace_at(t, {2, 1}, f.t("e"))) == "f(a,i(e))");
  CHECK_THROWS_AS(subterm_at(t, {3}), PositionError);
  CHECK_THROWS_AS(subterm_at(t, {1, 1}), PositionError);
  CHECK(to_string(Position{}) == "e");
  CHECK(to_string(Position{2, 2}) == "2.2");
  CHECK(parse_position("2.2") == Position{2, 2});
  CHECK(parse_position("e").empty());
}

TEST_CASE("signature rejects duplicates and parsing checks arity") {
  Fixture f = fogen::group();
  CHECK_THROWS_AS(f.sig.add_symbol("f", 2), std::invalid_argument);
  CHECK_THROWS(f.t("f(a)"));
  CHECK_THROWS(f.t("g(a)"));
  CHECK_THROWS(f.t("i(a"));
}

TEST_CASE("match examples") {
  Fixture f = fogen::group();
  auto m = match(f.t("f(x,i(x))"), f.t("f(i(a),i(i(a)))"));
  REQUIRE(m);
  CHECK(subst_str(*m, f.sig) == "{x1 <- i(a)}");
  f.vars.clear();
  auto m2 = match(f.t("x"), f.t("f(a,e)"));
  REQUIRE(m2);
  CHECK(subst_str(*m2, f.sig) == "{x1 <- f(a,e)}");
  CHECK_FALSE(match(f.t("f(x,x)"), f.t("f(a,e)")));
  CHECK_FALSE(match(f.t("i(x)"), f.t("f(a,e)")));
}

TEST_CASE("unify examples") {
  Fixture f = fogen::group();
  // x, y are variables 0 and 1
  auto u = unify(f.t("f(x,e)"), f.t("f(a,y)"));
  REQUIRE(u);
  CHECK(f.str((*u)(f.t("x"))) == "a");
  CHECK(f.str((*u)(f.t("y"))) == "e");
  CHECK_FALSE(unify(f.t("x"), f.t("i(x)")));

  f.vars.clear();
  FoTerm l = f.t("f(f(x,y),z)");
  FoTerm r = f.t("f(w,e)");  // w plays x'
  auto v = unify(l, r);
  REQUIRE(v);
  CHECK(f.str((*v)(f.t("w"))) == "f(x1,x2)");
  CHECK(f.str((*v)(f.t("z"))) == "e");
  CHECK((*v)(l) == (*v)(r));
  auto oracle = fogen::naive_unify(l, r);
  REQUIRE(oracle);
  CHECK(Substitution(*oracle)(l) == (*v)(l));
}

// Ground unifiers drawn from a finite space must all factor through the mgu.
TEST_CASE("property: unify against brute-force ground unifiers") {
  Signature sig;
  sig.add_symbol("a", 0);
  sig.add_symbol("b", 0);
  sig.add_symbol("g", 1);
  sig.add_symbol("h", 2);
  auto space = fogen::all_ground(sig, 2);
  fogen::Gen gen(sig, 2, 11);
  int unifiable = 0, checked = 0;
  for (int n = 0; n < 300; ++n) {
    FoTerm s = gen.term(3), t = gen.term(3);
    auto mgu = unify(s, t);
    auto ref = fogen::naive_unify(s, t);
    CHECK(mgu.has_value() == ref.has_value());
    bool found = false;
    for (const auto& g0 : space) {
      for (const auto& g1 : space) {
        Substitution theta({{0, g0}, {1, g1}});
        if (!(theta(s) == theta(t))) continue;
        found = true;
        ++checked;
        REQUIRE(mgu);
        for (VarId x = 0; x < 2; ++x)
          CHECK(theta((*mgu)(FoTerm::var(x))) == theta(FoTerm::var(x)));
      }
    }
    if (mgu) {
      ++unifiable;
      CHECK((*mgu)(s) == (*mgu)(t));
      for (const auto& [x, u] : mgu->bindings()) CHECK((*mgu)(u) == u);
    } else {
      CHECK_FALSE(found);
    }
  }
  CHECK(unifiable > 30);
  CHECK(checked > 100);
}

TEST_CASE("LPO examples") {
  Fixture f = fogen::group();
  Ordering o = fogen::group_lpo(f);
  CHECK(o.compare(f.t("i(x)"), f.t("x")) == Cmp::Greater);
  CHECK(o.compare(f.t("f(x,e)"), f.t("x")) == Cmp::Greater);
  FoTerm s = f.t("f(x,i(x))"), t = f.t("e");
  CHECK(fogen::naive_lpo(o, s, t));
  CHECK(o.compare(s, t) == Cmp::Greater);
  CHECK(o.compare(f.t("x"), f.t("y")) == Cmp::Incomparable);
  CHECK(o.compare(f.t("f(x,y)"), f.t("f(y,x)")) == Cmp::Incomparable);
  CHECK(o.compare(f.t("f(f(x,y),z)"), f.t("f(x,f(y,z))")) == Cmp::Greater);
  CHECK(o.compare(f.t("i(f(x,y))"), f.t("f(i(y),i(x))")) == Cmp::Greater);
  CHECK_THROWS_AS(Ordering::lpo(f.sig, f.prec({"i", "f", "e"})), std::invalid_argument);
}

TEST_CASE("KBO examples") {
  Fixture f = fogen::group();
  Ordering o = Ordering::kbo(f.sig, f.prec({"i", "f", "e", "a"}));
  CHECK(o.compare(f.t("f(x,e)"), f.t("x")) == Cmp::Greater);
  CHECK(o.compare(f.t("x"), f.t("y")) == Cmp::Incomparable);
  FoTerm s = f.t("f(x,i(x))"), t = f.t("i(i(x))");
  bool gt = fogen::naive_kbo(o, s, t), lt = fogen::naive_kbo(o, t, s);
  Cmp expected = gt ? Cmp::Greater : lt ? Cmp::Less : Cmp::Incomparable;
  CHECK(o.compare(s, t) == expected);
  // weight 4 vs 3
  CHECK(expected == Cmp::Greater);

  std::map<SymbolId, unsigned> zero_f{{*f.sig.find("f"), 0}};
  CHECK_NOTHROW(Ordering::kbo(f.sig, f.prec({"i", "f", "e", "a"}), {{*f.sig.find("i"), 0}}));
  CHECK_THROWS_AS(Ordering::kbo(f.sig, f.prec({"f", "i", "e", "a"}), {{*f.sig.find("i"), 0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Ordering::kbo(f.sig, f.prec({"i", "f", "e", "a"}), {{*f.sig.find("a"), 0}}),
                  std::invalid_argument);
  Ordering z = Ordering::kbo(f.sig, f.prec({"i", "f", "e", "a"}), {{*f.sig.find("i"), 0}});
  CHECK(z.compare(f.t("i(i(x))"), f.t("x")) == Cmp::Greater);
  (void)zero_f;
}

namespace {

void ordering_properties(const Ordering& o, const Signature& sig,
                         const std::function<bool(const FoTerm&, const FoTerm&)>& oracle,
                         bool lpo, unsigned seed) {
  fogen::Gen gen(sig, 3, seed);
  std::vector<FoTerm> pool;
  int greater = 0;
  for (int n = 0; n < 10000; ++n) {
    FoTerm s = gen.term(4), t = gen.term(4);
    bool gt = o.greater(s, t);
    REQUIRE(gt == oracle(s, t));
    CHECK_FALSE(o.greater(s, s));
    if (gt) {
      ++greater;
      CHECK_FALSE(o.greater(t, s));
      Substitution sigma = gen.subst(2);
      CHECK(o.greater(sigma(s), sigma(t)));
      // one-hole context
      FoTerm c = gen.term(2);
      while (c.is_var()) c = gen.term(2);
      auto ps = fun_positions(c);
      Position p = ps[gen.below(ps.size())];
      CHECK(o.greater(replace_at(c, p, s), replace_at(c, p, t)));
    }
    if (lpo) {
      for (const auto& p : fun_positions(s))
        if (!p.empty()) CHECK(o.greater(s, subterm_at(s, p)));
    }
    if (pool.size() < 60) pool.push_back(s);
  }
  CHECK(greater > 1000);
  for (const auto& a : pool)
    for (const auto& b : pool)
      if (o.greater(a, b))
        for (const auto& c : pool)
          if (o.greater(b, c)) CHECK(o.greater(a, c));
}

Signature prop_signature() {
  Signature sig;
  sig.add_symbol("c", 0);
  sig.add_symbol("d", 0);
  sig.add_symbol("g", 1);
  sig.add_symbol("h", 2);
  sig.add_symbol("k", 3);
  return sig;
}

}  // namespace

TEST_CASE("property: LPO is a simplification ordering and agrees with the naive definition") {
  Signature sig = prop_signature();
  Ordering o = Ordering::lpo(sig, {2, 4, 3, 0, 1});
  ordering_properties(o, sig, [&](const FoTerm& s, const FoTerm& t) { return fogen::naive_lpo(o, s, t); },
                      true, 3);
}

TEST_CASE("property: KBO is stable and agrees with the occurrence-count oracle") {
  Signature sig = prop_signature();
  Ordering o = Ordering::kbo(sig, {2, 4, 3, 0, 1}, {{2, 0}, {4, 2}, {0, 3}}, 1);
  ordering_properties(o, sig, [&](const FoTerm& s, const FoTerm& t) { return fogen::naive_kbo(o, s, t); },
                      false, 5);
}

TEST_CASE("orient") {
  Fixture f = fogen::group();
  Ordering o = fogen::group_lpo(f);
  CHECK(orient(f.eq("f(x,e)", "x"), o) == Orientation::LR);
  CHECK(orient(f.eq("x", "f(x,e)"), o) == Orientation::RL);
  CHECK(orient(f.eq("x", "x"), o) == Orientation::None);
  CHECK(orient(f.eq("f(x,y)", "f(y,x)"), o) == Orientation::None);
}

namespace {

std::set<std::pair<FoTerm, FoTerm>> as_set(const std::vector<CriticalPair>& cps) {
  std::set<std::pair<FoTerm, FoTerm>> out;
  for (const auto& cp : cps) out.insert({cp.eq.lhs, cp.eq.rhs});
  return out;
}

void check_cp_chain(const CriticalPair& cp, const Equation& inner, const Equation& outer) {
  REQUIRE(cp.chain.size() == 2);
  CHECK(cp.chain[0].from == cp.eq.lhs);
  CHECK(cp.chain[0].to == cp.peak);
  CHECK(cp.chain[1].from == cp.peak);
  CHECK(cp.chain[1].to == cp.eq.rhs);
  auto env = [&](const Label& l) -> const Equation* {
    if (l == inner.label) return &inner;
    if (l == outer.label) return &outer;
    return nullptr;
  };
  CHECK(replay_step(cp.chain[0], env));
  CHECK(replay_step(cp.chain[1], env));
}

}  // namespace

TEST_CASE("critical pair examples") {
  Fixture f;
  f.sig.add_symbol("a", 0);
  f.sig.add_symbol("b", 0);
  f.sig.add_symbol("c", 0);
  Equation ab = f.eq("a", "b", Label::axiom(1)), ac = f.eq("a", "c", Label::axiom(2));
  auto cps = critical_pairs({ab, Direction::LR}, {ac, Direction::LR});
  REQUIRE(cps.size() == 1);
  CHECK(f.str(cps[0].eq.lhs) == "b");
  CHECK(f.str(cps[0].eq.rhs) == "c");
  CHECK(cps[0].position.empty());
  check_cp_chain(cps[0], ab, ac);

  Fixture g = fogen::group();
  Equation unit = g.eq("f(x,e)", "x", Label::axiom(1));
  Equation assoc = g.eq("f(f(x,y),z)", "f(x,f(y,z))", Label::axiom(3));
  auto got = critical_pairs({unit, Direction::LR}, {assoc, Direction::LR});
  auto ref = fogen::naive_overlaps(unit.lhs, unit.rhs, assoc.lhs, assoc.rhs);
  CHECK(as_set(got) == ref);
  REQUIRE(got.size() == 2);
  bool at1 = false;
  for (const auto& cp : got) {
    check_cp_chain(cp, unit, assoc);
    if (cp.position == Position{1}) {
      at1 = true;
      CHECK(g.str(cp.eq.lhs) == "f(x1,x2)");
      CHECK(g.str(cp.eq.rhs) == "f(x1,f(e,x2))");
    }
  }
  CHECK(at1);

  Equation invinv = g.eq("i(i(x))", "x", Label::lemma(1));
  CHECK(critical_pairs({unit, Direction::LR}, {invinv, Direction::LR}).empty());
  CHECK(fogen::naive_overlaps(unit.lhs, unit.rhs, invinv.lhs, invinv.rhs).empty());
  CHECK(critical_pairs({invinv, Direction::LR}, {unit, Direction::LR}).empty());
}

TEST_CASE("property: critical pairs agree with the overlap enumerator") {
  Fixture f = fogen::group();
  fogen::Gen gen(f.sig, 3, 21);
  int nonempty = 0;
  for (int n = 0; n < 400; ++n) {
    Equation r1 = canonical({Label::axiom(1), gen.term(3), gen.term(2)});
    Equation r2 = canonical({Label::axiom(2), gen.term(3), gen.term(2)});
    auto got = critical_pairs({r1, Direction::LR}, {r2, Direction::LR});
    CHECK(as_set(got) == fogen::naive_overlaps(r1.lhs, r1.rhs, r2.lhs, r2.rhs));
    for (const auto& cp : got) check_cp_chain(cp, r1, r2);
    if (!got.empty()) ++nonempty;
  }
  CHECK(nonempty > 50);
}

TEST_CASE("group trace steps replay") {
  Fixture f = fogen::group();
  auto axioms = fogen::group_axioms(f);
  auto env = [&](const Label& l) -> const Equation* {
    return l.kind == Label::Kind::Axiom && l.number <= 3 ? &axioms[l.number - 1] : nullptr;
  };
  f.vars.clear();
  FoTerm from = f.t("f(x,f(i(x),i(i(x))))");
  FoTerm to = f.t("f(x,e)");
  RewriteStep step{Label::axiom(2), Direction::LR, {2}, Substitution({{0, f.t("i(x)")}}), from, to};
  CHECK(replay_step(step, env));
  CHECK(to_string(step, f.sig) == "by Axiom 2 LR at 2 with {x1 <- i(x1)}");
  RewriteStep bad = step;
  bad.position = {1};
  CHECK_FALSE(replay_step(bad, env));
  bad = step;
  bad.direction = Direction::RL;
  CHECK_FALSE(replay_step(bad, env));
  bad = step;
  bad.subst = Substitution();
  CHECK_FALSE(replay_step(bad, env));
  bad = step;
  bad.equation = Label::axiom(4);
  CHECK_FALSE(replay_step(bad, env));
}

namespace {

void check_complete_trace(const Outcome& out) {
  REQUIRE(out.status == Status::Proved);
  REQUIRE(out.trace);
  const ProofTrace& tr = *out.trace;
  CHECK_FALSE(check_trace(tr).has_value());
  for (std::size_t k = 0; k < tr.lemmas.size(); ++k) {
    CHECK(tr.lemmas[k].statement.label == Label::lemma(k + 1));
    for (const auto& s : tr.lemmas[k].chain) {
      if (s.equation.kind == Label::Kind::Lemma) CHECK(s.equation.number <= k);
      CHECK(replay_step(s, [&](const Label& l) { return tr.find(l); }));
    }
  }
  for (const auto& s : tr.theorem.chain)
    CHECK(replay_step(s, [&](const Label& l) { return tr.find(l); }));
}

}  // namespace

TEST_CASE("completion proves the group goal") {
  Fixture f = fogen::group();
  Problem p = group_problem(f, "f(a,i(a))", "f(i(a),a)");
  Outcome out = complete(p);
  check_complete_trace(out);
  const ProofTrace& tr = *out.trace;
  CHECK(f.str(tr.theorem.statement.lhs) == "f(a,i(a))");
  CHECK(f.str(tr.theorem.statement.rhs) == "f(i(a),a)");
  REQUIRE_FALSE(tr.theorem.chain.empty());
  CHECK(to_string(tr.theorem.chain.front(), tr.signature) == "by Axiom 2 LR at e with {x1 <- a}");
  CHECK(f.str(tr.theorem.chain.back().to) == "f(i(a),a)");
  CHECK(out.skolems.empty());
  MESSAGE(render_trace(tr));
}

TEST_CASE("completion proves further group identities") {
  for (auto [l, r] : std::vector<std::pair<const char*, const char*>>{
           {"i(i(x))", "x"}, {"f(i(x),x)", "e"}, {"f(e,x)", "x"}, {"i(e)", "e"},
           {"i(f(x,y))", "f(i(y),i(x))"}, {"f(i(x),f(x,y))", "y"}}) {
    CAPTURE(l);
    Fixture f = fogen::group();
    Problem p = group_problem(f, l, r);
    Outcome out = complete(p);
    check_complete_trace(out);
  }
}

TEST_CASE("goal variables become lowest Skolem constants") {
  Fixture f = fogen::group();
  Problem p = group_problem(f, "f(e,x)", "x");
  Outcome out = complete(p);
  check_complete_trace(out);
  REQUIRE(out.skolems.size() == 1);
  const ProofTrace& tr = *out.trace;
  CHECK(tr.signature.size() == f.sig.size() + 1);
  CHECK(tr.signature.symbol(out.skolems[0].second).name == "sk1");
  CHECK(tr.theorem.statement.lhs.ground());
}

TEST_CASE("goal that is an axiom instance") {
  Fixture f = fogen::group();
  Problem p = group_problem(f, "f(f(a,e),i(f(a,e)))", "e");
  Outcome out = complete(p);
  check_complete_trace(out);
  CHECK(out.trace->theorem.chain.size() == 1);
  CHECK(out.trace->lemmas.empty());

  Problem q = group_problem(f, "f(a,i(a))", "f(a,i(a))");
  Outcome trivial = complete(q);
  check_complete_trace(trivial);
  CHECK(trivial.trace->theorem.chain.empty());
}

TEST_CASE("disjoint classes saturate as unprovable") {
  Fixture f;
  for (const char* c : {"a", "b", "c", "d"}) f.sig.add_symbol(c, 0);
  Problem p{f.sig, Ordering::lpo(f.sig, f.prec({"a", "b", "c", "d"})), {f.eq("a", "b")},
            f.eq("c", "d", Label::theorem())};
  Outcome out = complete(p);
  CHECK(out.status == Status::Unprovable);
  CHECK_FALSE(out.trace);
}

TEST_CASE("limits") {
  Fixture f = fogen::group();
  Problem p = group_problem(f, "f(a,i(a))", "f(a,a)");  // false in groups
  Limits lim;
  lim.seconds = 0.2;
  Outcome out = complete(p, lim);
  CHECK((out.status == Status::Timeout || out.status == Status::Unprovable));

  std::atomic<bool> stop{true};
  Limits stopped;
  stopped.stop = &stop;
  CHECK(complete(group_problem(f, "i(f(x,y))", "f(i(y),i(x))"), stopped).status == Status::Timeout);

  Limits small;
  small.max_equations = 5;
  CHECK(complete(group_problem(f, "i(f(x,y))", "f(i(y),i(x))"), small).status == Status::Timeout);

  int calls = 0;
  Limits prog;
  prog.progress_every = 1;
  prog.progress = [&](const Progress& pr) {
    ++calls;
    CHECK(pr.equations >= pr.active);
  };
  complete(group_problem(f, "i(f(x,y))", "f(i(y),i(x))"), prog);
  CHECK(calls > 0);
}

namespace {

FoTerm rewrite_once(const std::vector<Equation>& rules, const FoTerm& t, bool innermost) {
  if (t.is_var()) return FoTerm();
  auto at_root = [&]() -> FoTerm {
    for (const auto& r : rules)
      if (auto m = match(r.lhs, t)) return (*m)(r.rhs);
    return FoTerm();
  };
  if (!innermost)
    if (FoTerm u = at_root()) return u;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (FoTerm a = rewrite_once(rules, t.arg(i), innermost)) {
      std::vector<FoTerm> args = t.args();
      args[i] = a;
      return FoTerm::fun(t.symbol(), args);
    }
  }
  return innermost ? at_root() : FoTerm();
}

FoTerm normalize_with(const std::vector<Equation>& rules, FoTerm t, bool innermost) {
  while (FoTerm u = rewrite_once(rules, t, innermost)) t = u;
  return t;
}

}  // namespace

TEST_CASE("ground confluence of the saturated group system") {
  Fixture f = fogen::group();
  Problem p = group_problem(f, "a", "e");
  Outcome out = complete(p);
  REQUIRE(out.status == Status::Unprovable);
  std::vector<Equation> rules;
  for (const auto& e : out.active) {
    Orientation o = orient(e, p.ordering);
    REQUIRE(o != Orientation::None);
    rules.push_back(o == Orientation::LR ? e : Equation{e.label, e.rhs, e.lhs});
  }
  MESSAGE("saturated system has " << rules.size() << " rules");
  auto terms = fogen::all_ground(f.sig, 3);
  fogen::Gen gen(f.sig, 0, 9);
  for (int n = 0; n < 3000; ++n) terms.push_back(gen.ground(4));
  for (const auto& t : terms)
    REQUIRE(normalize_with(rules, t, true) == normalize_with(rules, t, false));
}

TEST_CASE("completion is deterministic") {
  Fixture f = fogen::group();
  std::string first;
  for (int run = 0; run < 3; ++run) {
    Outcome out = complete(group_problem(f, "i(f(x,y))", "f(i(y),i(x))"));
    REQUIRE(out.trace);
    std::string text = render_trace(*out.trace);
    if (run == 0)
      first = text;
    else
      CHECK(text == first);
  }
}

TEST_CASE("property: random derivable goals yield replayable traces") {
  Fixture f = fogen::group();
  auto axioms = fogen::group_axioms(f);
  fogen::Gen gen(f.sig, 0, 33);
  int proved = 0;
  for (int n = 0; n < 40; ++n) {
    FoTerm start = gen.ground(3);
    FoTerm cur = start;
    // random axiom rewrites in either direction at random positions
    for (int k = 0; k < 4; ++k) {
      const Equation& ax = axioms[gen.below(axioms.size())];
      Direction d = gen.below(2) ? Direction::LR : Direction::RL;
      auto ps = fun_positions(cur);
      const Position& p = ps[gen.below(ps.size())];
      auto m = match(ax.source(d), subterm_at(cur, p));
      if (!m) continue;
      Substitution s = *m;
      for (VarId v : ax.variables())
        if (!s.contains(v)) s.bind(v, gen.ground(1));
      cur = replace_at(cur, p, s(ax.target(d)));
    }
    Problem prob{f.sig, fogen::group_lpo(f), axioms, {Label::theorem(), start, cur}};
    Limits lim;
    lim.seconds = 2;
    Outcome out = complete(prob, lim);
    CHECK(out.status != Status::Unprovable);
    CHECK(out.status != Status::Error);
    if (out.status == Status::Proved) {
      ++proved;
      check_complete_trace(out);
    }
  }
  CHECK(proved >= 30);
}
