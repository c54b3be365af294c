#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/stat.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>

#include "mella/bridge/prover.hpp"
#include "mella/kernel/pretty.hpp"
#include "mella/script/session.hpp"
#include "support/fixtures.hpp"
#include "support/fo_gen.hpp"

using namespace mella;
using namespace mella::bridge;
namespace rw = mella::rewriting;
namespace k = mella::kernel;
using namespace fixtures;

namespace {

// The hole left after `theorem t : statement. intro names.`
struct Hole {
  script::Session session;
  k::CheckState state;
  k::Term goal;

  Hole(const std::string& statement, const std::string& intro) {
    auto rs = session.run("theorem t : \"" + statement + "\"." + (intro.empty() ? "" : " intro " + intro + "."));
    for (const auto& r : rs) REQUIRE_MESSAGE(r.ok, r.output);
    const auto& m = session.state().open->state.metas.front();
    state.named = session.state().named;
    state.unnamed = m.captured_unnamed;
    goal = m.expected;
  }

  Translation translate(const std::vector<std::string>& sig, const std::vector<std::string>& axioms,
                        OrderingChoice o = OrderingChoice::KBO) const {
    return serialize_problem(state, goal, sig, axioms, o, 5);
  }

  std::string show(const k::Term& t, const k::NamedContext& named) const {
    return k::pretty(t, state.unnamed.names(), &named);
  }
};

Hole example_hole() { return Hole(kExampleStatement, "A f g ax1 ax2 x y"); }
Hole group_hole() { return Hole(kGroupStatement, "A e i f a ax1 ax2 ax3"); }

std::string str(const ParsedTrace& p, const rw::FoTerm& t) { return rw::to_string(t, p.trace.signature); }

}  // namespace

TEST_CASE("group problem file parses") {
  ProblemFile p = parse_problem(kGroupFile);
  CHECK(p.name == "group");
  CHECK(p.equations.size() == 3);
  CHECK(p.ordering.kind == rw::Ordering::Kind::LPO);
  CHECK(p.ordering.precedence == std::vector<std::string>{"i", "f", "e", "a"});
  CHECK(p.variable_names() == std::vector<std::string>{"x", "y", "z"});
  auto sig = p.signature();
  CHECK(term_text(p, sig, p.conclusion.first) == "f(a,i(a))");
  CHECK(term_text(p, sig, p.conclusion.second) == "f(i(a),a)");
  CHECK(term_text(p, sig, p.equations[2].first) == "f(f(x,y),z)");
  CHECK(serialize(p) == kGroupFile);
  CHECK(parse_problem(serialize(p)) == p);
}

TEST_CASE("problem file errors carry positions") {
  auto fails_at = [](std::string text, std::size_t line, const std::string& needle) {
    try {
      parse_problem(text);
      FAIL("accepted: " << text);
    } catch (const ParseError& e) {
      CHECK(e.line == line);
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
    }
  };
  std::string g = kGroupFile;
  auto replace = [&](const std::string& from, const std::string& to) {
    std::string s = g;
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  fails_at(replace("  f(x,e) = x\n  f(x,i(x)) = e\n  f(f(x,y),z) = f(x,f(y,z))\n", ""), 15, "EQUATIONS");
  fails_at(replace("MODE PROOF", "MODE COMPLETION"), 2, "PROOF");
  fails_at(replace("VARIABLES", "VARIABLEZ"), 13, "VARIABLEZ");
  fails_at(replace("f(x,e) = x", "f(x) = x"), 16, "argument");
  fails_at(replace("f(x,e) = x", "f(x,q) = x"), 16, "q");
  fails_at(replace("x,y,z : ANY", "x,y,z : NUM"), 14, "NUM");
  fails_at(replace("  i > f > e > a", "  i > f > e"), 12, "a");
}

TEST_CASE("KBO ordering blocks round-trip") {
  ProblemFile p = parse_problem(kGroupFile);
  p.ordering.kind = rw::Ordering::Kind::KBO;
  p.ordering.weights = {{"i", 0}, {"f", 1}, {"e", 1}, {"a", 1}};
  std::string text = serialize(p);
  CHECK(text.find("KBO\n  w(i) = 0\n  w(f) = 1\n  w(e) = 1\n  w(a) = 1\n  i > f > e > a\n") != std::string::npos);
  ProblemFile q = parse_problem(text);
  CHECK(q == p);
  CHECK(q.make_ordering(q.signature()).kind() == rw::Ordering::Kind::KBO);
  CHECK(q.make_ordering(q.signature()).weight(*q.signature().find("i")) == 0);
}

TEST_CASE("property: generated problems round-trip") {
  for (unsigned seed = 0; seed < 200; ++seed) {
    std::mt19937 rng(seed);
    auto below = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    ProblemFile p;
    p.name = "gen" + std::to_string(seed);
    p.sorts = {"ANY"};
    rw::Signature sig;
    std::size_t nsyms = 1 + below(5);
    for (std::size_t s = 0; s < nsyms; ++s) {
      std::string name = std::string(1, static_cast<char>('a' + s)) + (s % 2 ? "op" : "");
      std::size_t arity = s == 0 ? 0 : below(3);
      sig.add_symbol(name, arity);
      p.symbols.push_back({name, std::vector<std::string>(arity, "ANY"), "ANY"});
      p.ordering.precedence.push_back(name);
    }
    std::shuffle(p.ordering.precedence.begin(), p.ordering.precedence.end(), rng);
    if (below(2)) {
      p.ordering.kind = rw::Ordering::Kind::KBO;
      for (const auto& s : p.symbols) p.ordering.weights.push_back({s.name, 1 + static_cast<unsigned>(below(3))});
    }
    std::size_t nvars = below(4);
    if (nvars) p.variables.push_back({{"x", "y", "z", "u"}, "ANY"});
    if (nvars) p.variables[0].names.resize(nvars);
    fogen::Gen gen(sig, nvars, seed);
    std::size_t neq = 1 + below(4);
    for (std::size_t e = 0; e < neq; ++e) p.equations.push_back({gen.term(3), gen.term(3)});
    p.conclusion = {gen.ground(3), gen.ground(3)};
    std::string text = serialize(p);
    ProblemFile q;
    try {
      q = parse_problem(text);
    } catch (const ParseError& e) {
      FAIL(e.what() << "\n" << text);
    }
    CHECK_MESSAGE(q == p, text);
    CHECK(serialize(q) == text);
  }
}

TEST_CASE("group proof output parses with exact steps") {
  ProblemFile p = parse_problem(kGroupFile);
  ParsedTrace t = parse_proof_trace(kGroupOutput, p);
  REQUIRE(t.trace.lemmas.size() == 4);
  const auto& l1 = t.trace.lemmas[0];
  CHECK(str(t, l1.statement.lhs) == "f(e,i(i(x1)))");
  CHECK(str(t, l1.statement.rhs) == "x1");
  REQUIRE(l1.chain.size() == 4);
  std::vector<rw::Position> positions = {{1}, {}, {2}, {}};
  std::vector<rw::Direction> dirs = {rw::Direction::RL, rw::Direction::LR, rw::Direction::LR, rw::Direction::LR};
  std::vector<std::size_t> axioms = {2, 3, 2, 1};
  std::vector<std::string> substs = {"{x1 <- x1}", "{x1 <- x1, x2 <- i(x1), x3 <- i(i(x1))}", "{x1 <- i(x1)}",
                                     "{x1 <- x1}"};
  for (std::size_t s = 0; s < 4; ++s) {
    CHECK(l1.chain[s].position == positions[s]);
    CHECK(l1.chain[s].direction == dirs[s]);
    CHECK(l1.chain[s].equation == rw::Label::axiom(axioms[s]));
    CHECK(rw::to_string(l1.chain[s].subst, t.trace.signature) == substs[s]);
  }
  CHECK(str(t, l1.chain[2].from) == "f(x1,f(i(x1),i(i(x1))))");
  CHECK(str(t, l1.chain[2].to) == "f(x1,e)");
  for (std::size_t i = 1; i < 4; ++i) CHECK(t.trace.lemmas[i].elided);

  const auto& th = t.trace.theorem;
  REQUIRE(th.chain.size() == 3);
  CHECK(th.chain[2].equation == rw::Label::lemma(4));
  CHECK(th.chain[2].direction == rw::Direction::LR);
  CHECK(th.chain[2].position == rw::Position{2});
  CHECK(rw::to_string(th.chain[2].subst, t.trace.signature) == "{x1 <- a}");
  CHECK(th.chain[1].direction == rw::Direction::RL);
  CHECK(rw::to_string(th.chain[1].subst, t.trace.signature) == "{x1 <- i(a)}");

  // Lemma 4 is elided; its statement is fixed by the step it justifies.
  fogen::Fixture f;
  f.sig = t.trace.signature;
  rw::Equation lemma4 = f.eq("i(i(x))", "x", rw::Label::lemma(4));
  auto env = [&](const rw::Label& l) -> const rw::Equation* { return l == lemma4.label ? &lemma4 : t.trace.find(l); };
  for (const auto& s : l1.chain) CHECK(rw::replay_step(s, env));
  for (const auto& s : th.chain) CHECK(rw::replay_step(s, env));
}

TEST_CASE("proof output defects are reported with their line") {
  ProblemFile p = parse_problem(kGroupFile);
  auto fails_at = [&](std::string text, std::size_t line) {
    try {
      parse_proof_trace(text, p);
      FAIL("accepted:\n" << text);
    } catch (const ParseError& e) {
      CHECK_MESSAGE(e.line == line, e.what());
    }
  };
  std::string g = kGroupOutput;
  auto replace = [&](const std::string& from, const std::string& to) {
    std::string s = g;
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  fails_at(replace("    f(x1,f(i(x1),i(i(x1))))\n", "    f(x1,f(i(x1),i(x1)))\n"), 7);
  fails_at(replace("by Axiom 2 LR at 2 with", "by Axiom 2 LR at 1 with"), 9);
  fails_at(replace("by Axiom 2 RL at 1 with", "by Axiom 2 LR at 1 with"), 5);
  fails_at(replace("by Axiom 1 LR at e with {x1 <- x1}", "by Axiom 7 LR at e with {x1 <- x1}"), 11);
  fails_at(replace("{x1 <- i(a)}", "{x1 <- i(a}"), 25);
  fails_at(replace("    f(i(a),a)\n", ""), 27);
  fails_at(replace("by Axiom 2 LR at e with {x1 <- a}", "by Axiom 2 LR"), 23);
}

const char* kExampleFile =
    "NAME mella\n"
    "MODE PROOF\n"
    "SORTS\n"
    "  ANY\n"
    "SIGNATURE\n"
    "  f: ANY ANY -> ANY\n"
    "  g: ANY ANY -> ANY\n"
    "  x: -> ANY\n"
    "  y: -> ANY\n"
    "ORDERING\n"
    "KBO\n"
    "  w(f) = 1\n"
    "  w(g) = 1\n"
    "  w(x) = 1\n"
    "  w(y) = 1\n"
    "  f > g > x > y\n"
    "VARIABLES\n"
    "  z,u,v : ANY\n"
    "EQUATIONS\n"
    "  f(z,g(u,g(z,v))) = z\n"
    "  g(z,f(u,f(z,v))) = z\n"
    "CONCLUSION\n"
    "  f(x,g(y,x)) = x\n";

TEST_CASE("example hole serialises to a problem file") {
  Hole h = example_hole();
  Translation tr = h.translate({"f", "g", "x", "y"}, {"ax1", "ax2"});
  CHECK(serialize(tr.file) == kExampleFile);
  CHECK(tr.axioms.size() == 2);
  CHECK(tr.axioms[1].prover_label == "Axiom 2");
  CHECK(tr.axioms[1].ref.name == "ax2");
  CHECK(tr.axioms[1].binder_vars == std::vector<std::optional<rw::VarId>>{0, 1, 2});
  CHECK(tr.symbols.by_prover("x")->kind == KernelRef::Kind::Local);
  CHECK(tr.goal_binders.empty());
  CHECK(h.show(tr.base, h.state.named) == "A");
}

TEST_CASE("example trace reconstructs to the expected term") {
  Hole h = example_hole();
  Translation tr = h.translate({"f", "g", "x", "y"}, {"ax1", "ax2"});
  ParsedTrace p = parse_proof_trace(kExampleTrace, tr.file);
  CHECK(p.renamed.at("s5") == *p.trace.signature.find("f"));
  CHECK(p.renamed.at("s0") == *p.trace.signature.find("y"));
  CHECK(p.foreign_variables.size() == 2);
  ReconstructionResult r = reconstruct(tr, p);
  CHECK(r.lemmas().empty());
  CHECK(h.show(r.proof(), r.named()) == kExampleTerm);
  CHECK(r.stats().steps == 2);
  CHECK(r.stats().congruences == 1);
  CHECK(r.stats().symmetries == 1);
  k::CheckState st = h.state;
  CHECK_NOTHROW(k::check(st, r.proof(), h.goal));

  ReconstructOptions strict;
  strict.invented_variables = false;
  try {
    reconstruct(tr, p, strict);
    FAIL("invented variables accepted");
  } catch (const ReconstructionError& e) {
    CHECK(e.where == "Theorem 1");
    CHECK(std::string(e.what()).find("y") != std::string::npos);
    CHECK(std::string(e.what()).find("z") != std::string::npos);
  }
}

TEST_CASE("prover constants are replaced or reported") {
  std::string text = kExampleTrace;
  for (auto [from, to] : {std::pair<std::string, std::string>{"y", "sk1"}, {"z", "sk2"}}) {
    for (std::size_t at; (at = text.find(from + ")")) != std::string::npos || (at = text.find(from + ",")) != std::string::npos;)
      text.replace(at, from.size(), to);
  }
  CHECK(text.find("sk1") != std::string::npos);
  CHECK(text.find("sk2") != std::string::npos);
  Hole h = example_hole();
  Translation tr = h.translate({"f", "g", "x", "y"}, {"ax1", "ax2"});
  ParsedTrace p = parse_proof_trace(text, tr.file);
  CHECK(p.prover_constants.size() == 2);
  CHECK(p.foreign_variables.empty());
  ReconstructionResult r = reconstruct(tr, p);
  CHECK(h.show(r.proof(), r.named()) == kExampleTerm);
  REQUIRE(r.instantiations().size() == 1);
  CHECK(r.instantiations()[0] == "Theorem 1: sk1, sk2 := y");

  ReconstructOptions strict;
  strict.prover_constants = false;
  try {
    reconstruct(tr, p, strict);
    FAIL("prover constants accepted");
  } catch (const ReconstructionError& e) {
    CHECK(std::string(e.what()).find("sk1, sk2") != std::string::npos);
  }
}

TEST_CASE("universal goals become the lowest constants") {
  Hole h(kExampleStatement, "A f g ax1 ax2");
  Translation tr = h.translate({"f", "g"}, {"ax1", "ax2"});
  CHECK(tr.goal_binders == std::vector<std::string>{"x", "y"});
  CHECK(tr.file.ordering.precedence == std::vector<std::string>{"f", "g", "x", "y"});
  CHECK(tr.symbols.by_prover("y")->kind == KernelRef::Kind::GoalVar);
  CHECK(tr.symbols.by_prover("y")->level == 1);
  CHECK(term_text(tr.file, tr.file.signature(), tr.file.conclusion.first) == "f(x,g(y,x))");
  ParsedTrace p = parse_proof_trace(kExampleTrace, tr.file);
  ReconstructionResult r = reconstruct(tr, p);
  CHECK(h.show(r.proof(), r.named()) == std::string("\\x y -> ") + kExampleTerm);
  k::CheckState st = h.state;
  CHECK_NOTHROW(k::check(st, r.proof(), h.goal));
}

TEST_CASE("lemma with invented variables") {
  Hole h(kInventedStatement, "A f g ax1 ax2 ax3 ax4 ax5 ax6 ax7 ax8");
  Translation tr = h.translate({"f", "g"}, {"ax1", "ax2", "ax3", "ax4", "ax5", "ax6", "ax7", "ax8"});
  ParsedTrace p = parse_proof_trace(kInventedTrace, tr.file);
  CHECK(p.renamed.at("s10") == *p.trace.signature.find("f"));
  CHECK(p.renamed.at("s14") == *p.trace.signature.find("g"));

  ReconstructionResult r = reconstruct(tr, p);
  REQUIRE(r.lemmas().size() == 1);
  CHECK(r.lemmas()[0].name == "lemma1");
  CHECK(r.instantiations() == std::vector<std::string>{"Lemma 1: z := x1", "Lemma 1: y := x2"});
  CHECK(k::pretty(r.lemmas()[0].type, {}, &r.named()) ==
        "(A : *) (f g : A -> A -> A) -> ((x : A) -> Id A (f x x) x)"
        " -> ((x : A) -> Id A (g x x) x) -> ((x y : A) -> Id A (f x y) (f y x))"
        " -> ((x y : A) -> Id A (g x y) (g y x))"
        " -> ((x y z : A) -> Id A (f (f x y) z) (f x (f y z)))"
        " -> ((x y z : A) -> Id A (g (g x y) z) (g x (g y z)))"
        " -> ((x y z : A) -> Id A (g x (f y (f x z))) x)"
        " -> ((x y z : A) -> Id A (f x (g y (g x z))) x)"
        " -> A -> A -> (x1 x2 : A) -> Id A (f x1 (g x2 x1)) x1");
  CHECK(h.show(r.proof(), r.named()) == "\\x y -> lemma1 A f g ax1 ax2 ax3 ax4 ax5 ax6 ax7 ax8 x y x y");
  k::CheckState st = h.state;
  st.named = r.named();
  CHECK_NOTHROW(k::check(st, r.proof(), h.goal));

  ReconstructOptions strict;
  strict.invented_variables = false;
  try {
    reconstruct(tr, p, strict);
    FAIL("invented variables accepted");
  } catch (const ReconstructionError& e) {
    CHECK(e.where == "Lemma 1");
    CHECK(std::string(e.what()).find("z, y") != std::string::npos);
  }
}

TEST_CASE("invented variable heuristic") {
  fogen::Fixture f;
  f.sig.add_symbol("f", 2);
  f.sig.add_symbol("c", 0);
  rw::Equation stmt = f.eq("f(x,y)", "x");
  rw::RewriteStep s;
  s.from = f.t("f(x,y)");
  s.to = f.t("f(x,f(v,f(w,u)))");
  rw::Chain chain{s};
  // statement has x1 = 0, x2 = 1; the chain adds three more
  auto inv = invented_variables(stmt, chain);
  REQUIRE(inv.size() == 3);
  auto theta = invented_variable_heuristic(stmt, chain, nullptr);
  CHECK(*theta.lookup(inv[0]) == rw::FoTerm::var(0));
  CHECK(*theta.lookup(inv[1]) == rw::FoTerm::var(1));
  CHECK(*theta.lookup(inv[2]) == rw::FoTerm::var(0));

  rw::Equation ground{rw::Label::lemma(1), f.t("c"), f.t("c")};
  rw::FoTerm c = f.t("c");
  auto t2 = invented_variable_heuristic(ground, chain, &c);
  for (auto v : inv) CHECK(*t2.lookup(v) == c);
  CHECK_THROWS_AS(invented_variable_heuristic(ground, chain, nullptr), ReconstructionError);
  CHECK(invented_variable_heuristic(stmt, {}, nullptr).bindings().empty());
}

TEST_CASE("property: corrupted traces never reconstruct") {
  Hole h = example_hole();
  Translation tr = h.translate({"f", "g", "x", "y"}, {"ax1", "ax2"});
  const ParsedTrace base = parse_proof_trace(kExampleTrace, tr.file);
  std::mt19937 rng(7);
  auto below = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  fogen::Gen gen(base.trace.signature, 0, 11);
  int mutants = 0;
  for (int round = 0; round < 150; ++round) {
    ParsedTrace p = base;
    auto& chain = p.trace.theorem.chain;
    auto& step = chain[below(chain.size())];
    switch (below(4)) {
      case 0:
        step.direction = rw::flip(step.direction);
        break;
      case 1: {
        rw::Position q = step.position;
        if (q.empty() || below(2)) q.push_back(1 + below(2));
        else q.back() = q.back() == 1 ? 2 : 1;
        step.position = q;
        break;
      }
      case 2: {
        auto b = step.subst.bindings();
        if (b.size() < 2) continue;
        auto it1 = b.begin();
        auto it2 = std::next(b.begin(), 1 + below(b.size() - 1));
        if (it1->second == it2->second) continue;
        std::swap(it1->second, it2->second);
        step.subst = rw::Substitution(b);
        break;
      }
      default: {
        auto b = step.subst.bindings();
        auto it = std::next(b.begin(), below(b.size()));
        rw::FoTerm t = gen.ground(2);
        if (t == it->second) continue;
        it->second = t;
        step.subst = rw::Substitution(b);
      }
    }
    ++mutants;
    bool rejected = rw::check_trace(p.trace).has_value();
    try {
      reconstruct(tr, p);
    } catch (const ReconstructionError&) {
      rejected = true;
    }
    CHECK_MESSAGE(rejected, render_trace(p.trace));
  }
  CHECK(mutants >= 100);
}

namespace {

std::size_t count_refs(const std::string& text, const std::string& name) {
  std::size_t n = 0;
  for (std::size_t at = 0; (at = text.find(name, at)) != std::string::npos; at += name.size())
    if (at + name.size() == text.size() || !std::isdigit(static_cast<unsigned char>(text[at + name.size()]))) ++n;
  return n;
}

}  // namespace

TEST_CASE("each lemma is defined once and referenced per citing step") {
  Hole h = group_hole();
  Translation tr = h.translate({"i", "f", "e", "a"}, {"ax1", "ax2", "ax3"}, OrderingChoice::LPO);
  ProveReport rep = prove(tr);
  REQUIRE_MESSAGE(rep.status == ProveStatus::Proved, rep.message);
  const auto& trace = rep.trace->trace;
  const auto& r = *rep.result;
  REQUIRE(r.lemmas().size() == trace.lemmas.size());
  std::string all = h.show(r.proof(), r.named());
  for (const auto& l : r.lemmas()) all += " " + k::pretty(l.body, {}, &r.named());
  std::size_t total_cites = 0;
  for (std::size_t n = 1; n <= trace.lemmas.size(); ++n) {
    std::size_t cites = 0;
    auto count = [&](const rw::Chain& c) {
      for (const auto& s : c) cites += s.equation == rw::Label::lemma(n);
    };
    for (const auto& l : trace.lemmas) count(l.chain);
    count(trace.theorem.chain);
    CHECK(count_refs(all, "lemma" + std::to_string(n)) == cites);
    total_cites += cites;
  }
  CHECK(total_cites > 0);
}

TEST_CASE("a goal closed without steps is refl") {
  Hole h("(A : *) (f : A -> A -> A) (a : A) -> (ax : (x : A) -> Id A (f x x) x) -> Id A (f a a) (f a a)",
         "A f a ax");
  Translation tr = h.translate({"f", "a"}, {"ax"});
  ParsedTrace p = parse_proof_trace("  Theorem 1: f(a,a) = f(a,a)\n\n    f(a,a)\n", tr.file);
  ReconstructionResult r = reconstruct(tr, p);
  CHECK(r.proof().is(k::Term::Kind::Refl));
  CHECK(r.stats().steps == 0);
}

TEST_CASE("congruence contexts") {
  Hole h = example_hole();
  std::vector<std::string> scope = h.state.unnamed.names();
  k::Term t = script::read_term("f x (g y x)", scope, h.state.named);
  auto ctx = [&](const rw::Position& p) { return h.show(context_lambda(p, t), h.state.named); };
  CHECK(ctx({}) == "\\rc-cong-var -> rc-cong-var");
  CHECK(ctx({1}) == "\\rc-cong-var -> f rc-cong-var (g y x)");
  CHECK(ctx({2}) == "\\rc-cong-var -> f x rc-cong-var");
  CHECK(ctx({2, 2}) == "\\rc-cong-var -> f x (g y rc-cong-var)");
  CHECK_THROWS_AS(context_lambda({3}, t), rw::PositionError);
  CHECK_THROWS_AS(context_lambda({1, 1}, t), rw::PositionError);
}

TEST_CASE("translation rejects what is not first-order") {
  Hole h("(A : *) (f : A -> A -> A) (P : A -> *) (c : A)"
         " -> (bad : (x : A) (Q : A -> A) -> Id A (f x (Q x)) x)"
         " -> (ok : (x : A) -> Id A (f x x) x) -> Id A (f c c) c",
         "A f P c bad ok");
  try {
    h.translate({"f", "c"}, {"bad"});
    FAIL("higher-order axiom accepted");
  } catch (const TranslationError& e) {
    CHECK(std::string(e.what()).find("binder 'Q'") != std::string::npos);
  }
  Hole partial("(A : *) (f : A -> A -> A) (c : A) -> (ax : Id (A -> A) (f c) (f c)) -> Id A c c", "A f c ax");
  CHECK_THROWS_AS(partial.translate({"f", "c"}, {"ax"}), TranslationError);
  CHECK_THROWS_WITH_AS(h.translate({"f"}, {"ok"}), doctest::Contains("not in the signature"), TranslationError);
  CHECK_THROWS_WITH_AS(h.translate({"f", "c"}, {"nope"}), doctest::Contains("unknown name 'nope'"), TranslationError);
  CHECK_NOTHROW(h.translate({"f", "c"}, {"ok"}));
  CHECK_NOTHROW(h.translate({}, {"ok"}));
}

namespace {

struct FakeProver {
  std::string path;
  explicit FakeProver(const std::string& body) {
    char name[] = "/tmp/mella-fake-XXXXXX";
    int fd = mkstemp(name);
    REQUIRE(fd >= 0);
    close(fd);
    path = name;
    std::ofstream(path) << "#!/bin/sh\n" << body;
    chmod(path.c_str(), 0755);
  }
  ~FakeProver() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("external prover processes") {
  ProblemFile p = parse_problem(kGroupFile);
  {
    FakeProver ok("test \"$1\" = --details || exit 3\ngrep -q 'NAME group' \"$2\" || exit 4\necho proved\n");
    CHECK(run_external(ok.path, p, 5) == "proved\n");
  }
  {
    FakeProver bad("echo oops >&2\nexit 2\n");
    try {
      run_external(bad.path, p, 5);
      FAIL("nonzero exit accepted");
    } catch (const ExternalProverError& e) {
      CHECK(e.kind == ExternalProverError::Kind::ExitStatus);
      CHECK(e.stderr_text == "oops\n");
    }
  }
  {
    FakeProver slow("exec sleep 30\n");
    auto t0 = std::chrono::steady_clock::now();
    try {
      run_external(slow.path, p, 0.3);
      FAIL("timeout not enforced");
    } catch (const ExternalProverError& e) {
      CHECK(e.kind == ExternalProverError::Kind::Timeout);
    }
    CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(5));
  }
  try {
    run_external("/nonexistent/prover", p, 1);
    FAIL("missing command accepted");
  } catch (const ExternalProverError& e) {
    CHECK(e.kind == ExternalProverError::Kind::Spawn);
  }
}

TEST_CASE("external prover output is reconstructed") {
  Hole h = example_hole();
  Translation tr = h.translate({"f", "g", "x", "y"}, {"ax1", "ax2"});
  std::string body = "cat <<'EOF'\nWaldmeister banner\n" + std::string(kExampleTrace) + "EOF\n";
  FakeProver w(body);
  ProverConfig cfg;
  cfg.external = w.path;
  ProveReport rep = prove(tr, cfg);
  REQUIRE_MESSAGE(rep.status == ProveStatus::Proved, rep.message);
  CHECK(rep.prover == w.path);
  CHECK(h.show(rep.result->proof(), rep.result->named()) == kExampleTerm);

  FakeProver junk("echo 'no proof here'\n");
  cfg.external = junk.path;
  rep = prove(tr, cfg);
  CHECK(rep.status != ProveStatus::Proved);
  CHECK(!rep.message.empty());
}

TEST_CASE("bundled prover closes the group goal") {
  Hole h = group_hole();
  Translation tr = h.translate({"i", "f", "e", "a"}, {"ax1", "ax2", "ax3"}, OrderingChoice::LPO);
  CHECK(serialize(tr.file).find("EQUATIONS\n  f(x,e) = x\n  f(x,i(x)) = e\n  f(f(x,y),z) = f(x,f(y,z))\n") !=
        std::string::npos);
  ProveReport rep = prove(tr);
  REQUIRE_MESSAGE(rep.status == ProveStatus::Proved, rep.message);
  CHECK(rep.prover == "bundled");
  k::CheckState st = h.state;
  st.named = rep.result->named();
  CHECK_NOTHROW(k::check(st, rep.result->proof(), h.goal));
}
