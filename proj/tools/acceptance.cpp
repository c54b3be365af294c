// Checks each primary acceptance criterion and prints one PASS/FAIL line per
// criterion. Usage: acceptance [project-root]

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <thread>

#include "mella/bridge/prover.hpp"
#include "mella/cli/commands.hpp"
#include "mella/kernel/basis.hpp"
#include "mella/kernel/pretty.hpp"
#include "mella/script/session.hpp"
#include "mella/tptp/bench.hpp"
#include "mella/tptp/tptp.hpp"
#include "support/fixtures.hpp"
#include "support/fo_gen.hpp"
#include "support/term_gen.hpp"

namespace fs = std::filesystem;
namespace k = mella::kernel;
namespace rw = mella::rewriting;
namespace br = mella::bridge;
namespace sc = mella::script;
namespace tp = mella::tptp;
using k::Term;

namespace {

// Tolerances.
constexpr double kGroupSeconds = 5.0;
constexpr int kKernelCases = 1000;
constexpr double kKernelSeconds = 60.0;
constexpr int kOrderingPairs = 10000;
constexpr double kReconOverhead = 10.0;
constexpr int kMinMutants = 100;
constexpr double kBenchSeconds = 600.0;

fs::path root = ".";

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << (detail.tellp() > 0 ? "; " : "") << "failed: " << what;
    }
  }
  template <class T>
  Verdict& note(const T& x) {
    detail << (detail.tellp() > 0 ? "; " : "") << x;
    return *this;
  }
};

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Hole {
  sc::Session session;
  k::CheckState state;
  Term goal;

  Hole(const std::string& statement, const std::string& intro) {
    for (const auto& r : session.run("theorem t : \"" + statement + "\". intro " + intro + "."))
      if (!r.ok) throw std::runtime_error(r.output);
    const auto& m = session.state().open->state.metas.front();
    state.named = session.state().named;
    state.unnamed = m.captured_unnamed;
    goal = m.expected;
  }
  std::string show(const Term& t, const k::NamedContext& named) const {
    return k::pretty(t, state.unnamed.names(), &named);
  }
  bool typechecks(const br::ReconstructionResult& r) const {
    k::CheckState st = state;
    st.named = r.named();
    try {
      k::check(st, r.proof(), goal);
      return st.metas.empty();
    } catch (const std::exception&) {
      return false;
    }
  }
};

Hole example_hole() { return Hole(fixtures::kExampleStatement, "A f g ax1 ax2 x y"); }

// ---------------------------------------------------------------------------

Verdict group_end_to_end() {
  Verdict v;
  Hole h(fixtures::kGroupStatement, "A e i f a ax1 ax2 ax3");
  br::Translation tr =
      br::serialize_problem(h.state, h.goal, {"i", "f", "e", "a"}, {"ax1", "ax2", "ax3"}, br::OrderingChoice::LPO, 5);
  v.require(br::serialize(tr.file).find("f(x,e) = x\n  f(x,i(x)) = e\n  f(f(x,y),z) = f(x,f(y,z))") !=
                std::string::npos,
            "three group axioms in the problem file");
  auto t0 = Clock::now();
  br::ProveReport rep = br::prove(tr);
  double wall = since(t0);
  v.require(rep.status == br::ProveStatus::Proved, "bundled prover: " + rep.message);
  v.require(wall < kGroupSeconds, "prover within 5 s");
  v.note("search " + std::to_string(rep.search_seconds) + " s, total " + std::to_string(wall) + " s");
  if (!rep.result) return v;
  v.require(h.typechecks(*rep.result), "reconstruction typechecks");
  Term nf = k::normalize(rep.result->proof(), {k::kDefaultFuel, &rep.result->named()});
  bool refl = nf.is(Term::Kind::Refl);
  v.require(refl, "normal form is refl; it is " + h.show(nf, rep.result->named()).substr(0, 48) + "...");
  return v;
}

bool has_shape(const Term& t, const std::vector<std::string>& scope) {
  // trans A _ _ _ (cong A A _ _ _ (sym A _ _ (ax2 ...))) (ax1 ...)
  auto head = [](const Term& x, std::vector<Term>& args) {
    Term f = x;
    args.clear();
    while (f.is(Term::Kind::App)) {
      args.insert(args.begin(), f.kids()[1]);
      f = f.kids()[0];
    }
    return f.is(Term::Kind::Named) ? f.name() : std::string("?");
  };
  auto local = [&](const Term& x, const std::string& name, std::vector<Term>& args) {
    Term f = x;
    args.clear();
    while (f.is(Term::Kind::App)) {
      args.insert(args.begin(), f.kids()[1]);
      f = f.kids()[0];
    }
    return f.is(Term::Kind::Unnamed) && f.index() < scope.size() && scope[f.index()] == name;
  };
  std::vector<Term> a, b, c, d;
  if (head(t, a) != "trans" || a.size() != 6) return false;
  if (head(a[4], b) != "cong" || b.size() != 6) return false;
  if (head(b[5], c) != "sym" || c.size() != 4) return false;
  if (!local(c[3], "ax2", d) || d.size() != 3) return false;
  return local(a[5], "ax1", d) && d.size() == 3;
}

Verdict example_scripts() {
  Verdict v;
  for (const char* file : {"scripts/example_manual.mla", "scripts/example_waldmeister.mla"}) {
    sc::Session s;
    auto rs = s.run(slurp(root / file));
    bool ok = std::all_of(rs.begin(), rs.end(), [](const sc::Response& r) { return r.ok; });
    bool qed = std::any_of(s.state().transcript.begin(), s.state().transcript.end(),
                           [](const std::string& c) { return c == "qed"; });
    v.require(ok && qed && !s.state().open, std::string(file) + " completes");
  }
  Hole h = example_hole();
  br::Translation tr = br::serialize_problem(h.state, h.goal, {"f", "g", "x", "y"}, {"ax1", "ax2"},
                                             br::OrderingChoice::KBO, 5);
  br::ParsedTrace p = br::parse_proof_trace(fixtures::kExampleTrace, tr.file);
  br::ReconstructionResult r = br::reconstruct(tr, p);
  v.require(h.show(r.proof(), r.named()) == fixtures::kExampleTerm, "reconstructed term text");
  v.require(has_shape(r.proof(), h.state.unnamed.names()), "trans(cong(sym(ax2 ...)))(ax1 ...) shape");
  v.require(h.typechecks(r), "two-step term typechecks");
  v.note("both scripts reach qed; term = trans (cong (sym (ax2 x y y))) (ax1 x y (f y (f x y)))");
  return v;
}

Verdict fig3_parsing() {
  Verdict v;
  br::ProblemFile pf = br::parse_problem(fixtures::kGroupFile);
  br::ParsedTrace t = br::parse_proof_trace(fixtures::kGroupOutput, pf);
  const auto& sig = t.trace.signature;
  v.require(t.trace.lemmas.size() == 4, "four lemma blocks");
  if (t.trace.lemmas.size() != 4) return v;
  const auto& l1 = t.trace.lemmas[0].chain;
  const auto& th = t.trace.theorem.chain;
  v.require(l1.size() == 4, "Lemma 1 has 4 steps");
  v.require(th.size() == 3, "Theorem 1 has 3 steps");
  if (l1.size() != 4 || th.size() != 3) return v;

  struct Expect {
    rw::Label label;
    rw::Direction dir;
    rw::Position pos;
    std::string subst;
  };
  using D = rw::Direction;
  std::vector<Expect> lemma = {{rw::Label::axiom(2), D::RL, {1}, "{x1 <- x1}"},
                               {rw::Label::axiom(3), D::LR, {}, "{x1 <- x1, x2 <- i(x1), x3 <- i(i(x1))}"},
                               {rw::Label::axiom(2), D::LR, {2}, "{x1 <- i(x1)}"},
                               {rw::Label::axiom(1), D::LR, {}, "{x1 <- x1}"}};
  std::vector<Expect> theorem = {{rw::Label::axiom(2), D::LR, {}, "{x1 <- a}"},
                                 {rw::Label::axiom(2), D::RL, {}, "{x1 <- i(a)}"},
                                 {rw::Label::lemma(4), D::LR, {2}, "{x1 <- a}"}};
  auto compare = [&](const rw::Chain& c, const std::vector<Expect>& e, const std::string& block) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      bool same = c[i].equation == e[i].label && c[i].direction == e[i].dir && c[i].position == e[i].pos &&
                  rw::to_string(c[i].subst, sig) == e[i].subst;
      v.require(same, block + " step " + std::to_string(i + 1));
    }
  };
  compare(l1, lemma, "Lemma 1");
  compare(th, theorem, "Theorem 1");

  // Lemma 4's body is elided in the figure; its statement i(i(x)) = x is the
  // one the citing step determines.
  fogen::Fixture f;
  f.sig = sig;
  rw::Equation lemma4 = f.eq("i(i(x))", "x", rw::Label::lemma(4));
  auto env = [&](const rw::Label& l) -> const rw::Equation* {
    return l == lemma4.label ? &lemma4 : t.trace.find(l);
  };
  std::size_t replayed = 0;
  for (const auto* c : {&l1, &th})
    for (const auto& s : *c) replayed += rw::replay_step(s, env);
  v.require(replayed == 7, "every step replays");
  v.note("4 + 3 steps, " + std::to_string(replayed) + " replayed");
  return v;
}

Verdict lambda_hole() {
  Verdict v;
  Term type = Term::pi("A", Term::star(), Term::pi("_", Term::unnamed(0), Term::unnamed(1)));
  k::CheckState st;
  k::check(st, Term::lam("A", Term::meta(0)), type);
  v.require(st.metas.size() == 1, "exactly one continuation");
  if (st.metas.size() != 1) return v;
  const auto& m = st.metas[0];
  v.require(m.meta_id == 0, "continuation for ?0");
  v.require(m.expected == Term::pi("_", Term::unnamed(0), Term::unnamed(1)), "expected type Pi 0 . 1");
  v.require(m.captured_unnamed.size() == 1 && m.captured_unnamed.at(0).type == Term::star(), "Delta = [*]");
  k::CheckState done = k::instantiate_meta(st, 0, Term::lam("x", Term::unnamed(0)));
  v.require(done.metas.empty(), "identity closes it");
  v.note("?0 : " + k::pretty(m.expected, m.captured_unnamed.names()) + " under [A : *]");
  return v;
}

Verdict equational_basis() {
  Verdict v;
  const std::vector<std::pair<std::string, std::string>> stated = {
      {"elimJ", "(A : *) (C : (x y : A) -> Id A x y -> *) -> ((x : A) -> C x x refl) -> (x y : A) (P : Id A x y) -> C x y P"},
      {"sym", "(A : *) (a b : A) -> Id A a b -> Id A b a"},
      {"trans", "(A : *) (a b c : A) -> Id A a b -> Id A b c -> Id A a c"},
      {"cong", "(A B : *) (a b : A) (f : A -> B) -> Id A a b -> Id B (f a) (f b)"},
      {"subst", "(A : *) (P : A -> *) (a b : A) -> Id A a b -> P a -> P b"}};
  const auto& basis = k::equational_basis();
  v.require(basis.size() == stated.size(), "five definitions");
  k::NamedContext g;
  for (std::size_t i = 0; i < std::min(basis.size(), stated.size()); ++i) {
    const auto& d = basis[i];
    k::CheckState st;
    st.named = g;
    bool ok = d.name == stated[i].first && k::pretty(d.type) == stated[i].second;
    try {
      ok = ok && k::infer(st, d.type) == Term::star();
      k::check(st, d.body, d.type);
    } catch (const std::exception&) {
      ok = false;
    }
    v.require(ok, d.name + " typechecks at its stated type");
    g.insert(d.name, {d.body, d.type});
  }
  k::NamedContext h = g;
  h.insert("A", {std::nullopt, Term::star()});
  h.insert("B", {std::nullopt, Term::star()});
  h.insert("a", {std::nullopt, Term::named("A")});
  h.insert("f", {std::nullopt, Term::pi("_", Term::named("A"), Term::named("B"))});
  Term A = Term::named("A"), a = Term::named("a"), R = Term::refl();
  k::NormalizeOptions delta{k::kDefaultFuel, &h};
  v.require(k::normalize(Term::app(Term::named("sym"), {A, a, a, R}), delta) == R, "sym refl");
  v.require(k::normalize(Term::app(Term::named("trans"), {A, a, a, a, R, R}), delta) == R, "trans refl refl");
  v.require(k::normalize(Term::app(Term::named("cong"), {A, Term::named("B"), a, a, Term::named("f"), R}), delta) == R,
            "cong refl");
  v.note("5 definitions checked; sym/trans/cong on refl normalize to refl");
  return v;
}

Term scramble(const Term& t, int& counter) {
  std::string junk = "q" + std::to_string(counter++);
  switch (t.kind()) {
    case Term::Kind::Unnamed: return Term::unnamed(t.index(), junk);
    case Term::Kind::Pi: return Term::pi(junk, scramble(t.domain(), counter), scramble(t.codomain(), counter));
    case Term::Kind::Lam: return Term::lam(junk, scramble(t.body(), counter));
    default: {
      if (t.kids().empty()) return t;
      std::vector<Term> kids;
      for (const auto& x : t.kids()) kids.push_back(scramble(x, counter));
      return k::with_kids(t, kids);
    }
  }
}

bool checks(const k::NamedContext& sig, const Term& t, const Term& type) {
  k::CheckState st;
  st.named = sig;
  try {
    k::check(st, t, type);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

Verdict kernel_properties() {
  Verdict v;
  auto t0 = Clock::now();
  std::map<std::string, int> bad;
  testgen::RawGen raw(101);
  testgen::Oracle oracle;
  k::NamedContext sig = testgen::typed_signature();
  testgen::TypedGen typed(102);
  int counter = 0;
  for (int i = 0; i < kKernelCases; ++i) {
    Term t = raw.term(5);
    std::int64_t d = raw.below(4), e = raw.below(4);
    if (!(k::shift(d, 0, k::shift(e, 0, t)) == k::shift(d + e, 0, t))) ++bad["shift composition"];

    Term c = raw.closed(5);
    if (!c.locally_closed() || !(k::shift(raw.below(7) + 1, 0, c) == c)) ++bad["closed fixpoint"];

    Term s = raw.term(3);
    std::size_t at = raw.below(4);
    if (!(k::substitute(at, s, t) == oracle.substitute(at, s, t))) ++bad["substitution oracle"];

    testgen::Typed tt = typed.any(4);
    Term n = k::normalize(tt.term);
    if (!(k::normalize(n) == n)) ++bad["normalize idempotence"];
    if (!checks(sig, tt.term, tt.type) || !checks(sig, n, tt.type)) ++bad["subject reduction"];

    Term renamed = scramble(tt.term, counter);
    if (!(renamed == tt.term) || !(k::normalize(renamed) == n) ||
        checks(sig, renamed, scramble(tt.type, counter)) != checks(sig, tt.term, tt.type))
      ++bad["tag erasure"];
  }
  double secs = since(t0);
  for (const auto& [name, count] : bad) v.require(false, name + " (" + std::to_string(count) + " cases)");
  v.require(secs < kKernelSeconds, "under 60 s");
  v.note(std::to_string(kKernelCases) + " cases x 6 properties in " + std::to_string(secs) + " s");
  return v;
}

Verdict ordering_properties() {
  Verdict v;
  rw::Signature sig;
  sig.add_symbol("c", 0);
  sig.add_symbol("d", 0);
  sig.add_symbol("g", 1);
  sig.add_symbol("h", 2);
  sig.add_symbol("k", 3);
  rw::Ordering lpo = rw::Ordering::lpo(sig, {2, 4, 3, 0, 1});
  rw::Ordering kbo = rw::Ordering::kbo(sig, {2, 4, 3, 0, 1}, {{2, 0}, {4, 2}, {0, 3}}, 1);
  std::size_t greater = 0;
  for (auto [o, name] : {std::pair{&lpo, "LPO"}, std::pair{&kbo, "KBO"}}) {
    bool is_lpo = o == &lpo;
    fogen::Gen gen(sig, 3, is_lpo ? 31 : 37);
    std::map<std::string, int> bad;
    for (int n = 0; n < kOrderingPairs; ++n) {
      rw::FoTerm s = gen.term(3), t = gen.term(3);
      bool gt = o->greater(s, t);
      if (gt != (is_lpo ? fogen::naive_lpo(*o, s, t) : fogen::naive_kbo(*o, s, t))) ++bad["oracle"];
      if (o->greater(s, s)) ++bad["irreflexivity"];
      if (gt) {
        ++greater;
        rw::Substitution sigma = gen.subst(2);
        if (!o->greater(sigma(s), sigma(t))) ++bad["substitution stability"];
        rw::FoTerm c = gen.term(2);
        while (c.is_var()) c = gen.term(2);
        auto ps = rw::fun_positions(c);
        rw::Position p = ps[gen.below(ps.size())];
        if (!o->greater(rw::replace_at(c, p, s), rw::replace_at(c, p, t))) ++bad["context stability"];
      }
      if (is_lpo)
        for (const auto& p : rw::fun_positions(s))
          if (!p.empty() && !o->greater(s, rw::subterm_at(s, p))) ++bad["subterm property"];
    }
    for (const auto& [what, count] : bad)
      v.require(false, std::string(name) + " " + what + " (" + std::to_string(count) + ")");
  }
  v.note(std::to_string(kOrderingPairs) + " pairs per ordering, depth <= 3, " + std::to_string(greater) +
         " oriented pairs checked for stability");
  return v;
}

// One corpus problem with its hole and translation.
struct CorpusProblem {
  std::string name;
  std::unique_ptr<sc::Session> session;
  k::CheckState state;
  Term goal;
  std::optional<br::Translation> tr;
  std::string script;
};

CorpusProblem load_problem(const fs::path& file, const fs::path& corpus) {
  CorpusProblem cp;
  cp.name = file.stem().string();
  tp::Conversion conv = tp::to_problem(tp::parse_tptp_file(file, corpus), cp.name, 5);
  cp.script = conv.script;
  cp.session = std::make_unique<sc::Session>();
  for (const auto& r : cp.session->run(conv.opening()))
    if (!r.ok) throw std::runtime_error(cp.name + ": " + r.output);
  const auto& m = cp.session->state().open->state.metas.front();
  cp.state.named = cp.session->state().named;
  cp.state.unnamed = m.captured_unnamed;
  cp.goal = m.expected;
  cp.tr = br::serialize_problem(cp.state, cp.goal, conv.signature, conv.axioms, br::OrderingChoice::LPO, 5, cp.name);
  return cp;
}

Verdict reconstruction_totality(const fs::path& corpus) {
  Verdict v;
  tp::BenchmarkOptions opt;
  opt.timeouts = {5};
  opt.jobs = std::max(1u, std::thread::hardware_concurrency());
  tp::BenchmarkReport rep = tp::run_benchmark(corpus, opt);
  std::size_t proved = 0, recon = 0;
  std::vector<double> search, rec;
  for (const auto& r : rep.rows) {
    if (r.outcome != tp::SearchOutcome::Proved) continue;
    ++proved;
    if (*r.reconstructed) {
      ++recon;
      search.push_back(r.search_seconds);
      rec.push_back(r.recon_seconds);
    } else {
      v.require(false, r.problem + " did not reconstruct: " + r.reason);
    }
  }
  // Independently: the generated script must pass the kernel through qed.
  std::size_t scripts_ok = 0;
  for (const auto& file : tp::corpus_files(corpus)) {
    std::string name = file.stem().string();
    auto row = std::find_if(rep.rows.begin(), rep.rows.end(), [&](const tp::BenchmarkRow& r) { return r.problem == name; });
    if (row == rep.rows.end() || row->outcome != tp::SearchOutcome::Proved) continue;
    CorpusProblem cp = load_problem(file, corpus);
    sc::Session s;
    auto rs = s.run(cp.script);
    bool ok = std::all_of(rs.begin(), rs.end(), [](const sc::Response& r) { return r.ok; }) && !s.state().open;
    v.require(ok, name + " script reaches qed");
    scripts_ok += ok;
  }
  auto median = [](std::vector<double> xs) {
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    std::size_t n = xs.size();
    return n % 2 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2;
  };
  double ms = median(search), mr = median(rec);
  v.require(proved > 0, "some proofs found");
  v.require(mr <= kReconOverhead * ms, "median reconstruction <= 10x median search");
  std::ostringstream o;
  o << rep.rows.size() << " problems, " << proved << " proved, " << recon << " reconstructed, " << scripts_ok
    << " scripts checked; median search " << ms * 1000 << " ms, reconstruction " << mr * 1000 << " ms (ratio "
    << (ms > 0 ? mr / ms : 0) << ")";
  v.note(o.str());
  return v;
}

Verdict heuristic_coverage() {
  Verdict v;
  Hole h(fixtures::kInventedStatement, "A f g ax1 ax2 ax3 ax4 ax5 ax6 ax7 ax8");
  br::Translation tr = br::serialize_problem(h.state, h.goal, {"f", "g"},
                                             {"ax1", "ax2", "ax3", "ax4", "ax5", "ax6", "ax7", "ax8"},
                                             br::OrderingChoice::KBO, 5);
  br::ParsedTrace p = br::parse_proof_trace(fixtures::kInventedTrace, tr.file);
  try {
    br::ReconstructionResult r = br::reconstruct(tr, p);
    v.require(h.typechecks(r), "invented-variable lemma typechecks");
    v.require(r.instantiations() == std::vector<std::string>{"Lemma 1: z := x1", "Lemma 1: y := x2"},
              "heuristic instantiation z := x1, y := x2");
  } catch (const std::exception& e) {
    v.require(false, std::string("invented lemma with heuristic: ") + e.what());
  }
  br::ReconstructOptions strict;
  strict.invented_variables = false;
  try {
    br::reconstruct(tr, p, strict);
    v.require(false, "heuristic disabled still reconstructs");
  } catch (const br::ReconstructionError& e) {
    v.require(e.where == "Lemma 1" && std::string(e.what()).find("z, y") != std::string::npos,
              "documented error names Lemma 1 and z, y");
    v.note(std::string("disabled: ") + e.what());
  }

  std::string text = fixtures::kExampleTrace;
  for (auto [from, to] : {std::pair<std::string, std::string>{"y", "sk1"}, {"z", "sk2"}})
    for (std::size_t at; (at = text.find(from + ")")) != std::string::npos || (at = text.find(from + ",")) != std::string::npos;)
      text.replace(at, from.size(), to);
  Hole e = example_hole();
  br::Translation tr2 = br::serialize_problem(e.state, e.goal, {"f", "g", "x", "y"}, {"ax1", "ax2"},
                                              br::OrderingChoice::KBO, 5);
  br::ParsedTrace sk = br::parse_proof_trace(text, tr2.file);
  try {
    br::ReconstructionResult r = br::reconstruct(tr2, sk);
    v.require(e.typechecks(r), "Skolem fixture typechecks");
  } catch (const std::exception& ex) {
    v.require(false, std::string("Skolem fixture with heuristic: ") + ex.what());
  }
  br::ReconstructOptions strict_sk;
  strict_sk.prover_constants = false;
  try {
    br::reconstruct(tr2, sk, strict_sk);
    v.require(false, "Skolem fixture accepted with the fallback disabled");
  } catch (const br::ReconstructionError& ex) {
    v.require(std::string(ex.what()).find("sk1, sk2") != std::string::npos, "Skolem error names sk1, sk2");
  }
  return v;
}

Verdict mutation_soundness(const fs::path& corpus) {
  Verdict v;
  struct Source {
    std::string name;
    br::Translation tr;
    br::ParsedTrace trace;
  };
  std::vector<Source> sources;
  Hole ex = example_hole();
  br::Translation tr = br::serialize_problem(ex.state, ex.goal, {"f", "g", "x", "y"}, {"ax1", "ax2"},
                                             br::OrderingChoice::KBO, 5);
  sources.push_back({"interactive example trace", tr, br::parse_proof_trace(fixtures::kExampleTrace, tr.file)});
  for (const auto& file : tp::corpus_files(corpus)) {
    CorpusProblem cp = load_problem(file, corpus);
    br::ProveReport rep = br::prove(*cp.tr);
    if (rep.status == br::ProveStatus::Proved && rep.trace) sources.push_back({cp.name, *cp.tr, *rep.trace});
  }

  std::mt19937 rng(2024);
  auto below = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  std::map<std::string, int> made;
  int accepted = 0;
  std::vector<std::string> escapes;
  for (const auto& src : sources) {
    for (int round = 0; round < 12; ++round) {
      br::ParsedTrace p = src.trace;
      std::vector<rw::RewriteStep*> steps;
      for (auto& l : p.trace.lemmas)
        for (auto& s : l.chain) steps.push_back(&s);
      for (auto& s : p.trace.theorem.chain) steps.push_back(&s);
      if (steps.empty()) break;
      rw::RewriteStep& step = *steps[below(steps.size())];
      std::string kind;
      switch (round % 3) {
        case 0:
          step.direction = rw::flip(step.direction);
          kind = "direction";
          break;
        case 1: {
          rw::Position q = step.position;
          if (q.empty() || below(2)) q.push_back(1 + below(3));
          else q.back() = q.back() == 1 ? 2 : 1;
          step.position = q;
          kind = "position";
          break;
        }
        default: {
          auto b = step.subst.bindings();
          if (b.size() < 2) continue;
          auto i1 = std::next(b.begin(), below(b.size()));
          auto i2 = std::next(b.begin(), below(b.size()));
          if (i1 == i2 || i1->second == i2->second) continue;
          std::swap(i1->second, i2->second);
          step.subst = rw::Substitution(b);
          kind = "binding swap";
        }
      }
      ++made[kind];
      bool rejected = rw::check_trace(p.trace).has_value();
      if (!rejected) {
        try {
          br::reconstruct(src.tr, p);
        } catch (const br::ReconstructionError&) {
          rejected = true;
        }
      }
      if (!rejected) {
        ++accepted;
        escapes.push_back(src.name + " (" + kind + ")");
      }
    }
  }
  int total = 0;
  for (const auto& [_, n] : made) total += n;
  v.require(total >= kMinMutants, "at least 100 mutants");
  v.require(accepted == 0, std::to_string(accepted) + " mutants accepted silently" +
                               (escapes.empty() ? "" : ", first " + escapes.front()));
  std::ostringstream o;
  o << total << " mutants from " << sources.size() << " traces (";
  bool first = true;
  for (const auto& [kind, n] : made) {
    o << (first ? "" : ", ") << n << " " << kind;
    first = false;
  }
  o << "), all rejected";
  if (accepted == 0) v.note(o.str());
  return v;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

Verdict benchmark_harness(const fs::path& corpus) {
  Verdict v;
  fs::path out = fs::temp_directory_path() / ("mella-acceptance-" + std::to_string(::getpid()));
  mella::cli::BenchArgs args;
  args.dir = corpus.string();
  args.timeouts = {1, 5};
  args.jobs = std::max(1u, std::thread::hardware_concurrency());
  args.out = out.string();
  std::ostringstream text, err;
  auto t0 = Clock::now();
  int rc = mella::cli::cmd_bench(args, text, err);
  double secs = since(t0);
  v.require(rc == 0, "bench exit status 0: " + err.str());
  v.require(secs < kBenchSeconds, "full run under 10 minutes");
  if (rc != 0) return v;
  std::istringstream table(text.str().substr(std::min(text.str().find("Group"), text.str().size())));
  std::string header;
  std::getline(table, header);
  std::istringstream words(header);
  std::vector<std::string> columns{std::istream_iterator<std::string>(words), {}};
  v.require(columns == std::vector<std::string>{"Group", "Time", "Timeout", "Error", "Unprovable", "|", "Fail",
                                                "Success", "%"},
            "table columns");

  std::size_t problems = tp::corpus_files(corpus).size();
  auto summary = read_csv(out / "summary.csv");
  v.require(!summary.empty() && summary[0] ==
                                    std::vector<std::string>{"group", "time", "timeout", "error", "unprovable",
                                                             "fail", "success", "percent"},
            "summary.csv header");
  std::map<std::string, std::size_t> per_time;
  std::size_t successes = 0;
  for (std::size_t i = 1; i < summary.size(); ++i) {
    const auto& r = summary[i];
    if (r.size() != 8) {
      v.require(false, "summary row width");
      continue;
    }
    std::size_t to = std::stoul(r[2]), er = std::stoul(r[3]), un = std::stoul(r[4]), fa = std::stoul(r[5]),
                su = std::stoul(r[6]);
    per_time[r[1]] += to + er + un + fa + su;
    successes += su;
    if (su + fa == 0) {
      v.require(r[7].empty(), r[0] + " % column empty without proofs");
    } else {
      double want = 100.0 * static_cast<double>(su) / static_cast<double>(su + fa);
      v.require(std::abs(std::stod(r[7]) - want) <= 0.05, r[0] + "@" + r[1] + " % = Success/(Success+Fail)");
    }
  }
  v.require(per_time.size() == 2 && per_time["1"] == problems && per_time["5"] == problems,
            "counts partition the corpus at each time limit");
  auto scatter = read_csv(out / "scatter.csv");
  v.require(!scatter.empty() && scatter[0] == std::vector<std::string>{"search_seconds", "recon_seconds"},
            "scatter.csv header");
  v.require(scatter.size() == successes + 1, "one scatter point per reconstructed proof");
  std::ostringstream o;
  o << problems << " problems x {1 s, 5 s} in " << secs << " s; " << scatter.size() - 1 << " scatter points";
  v.note(o.str());
  fs::remove_all(out);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) root = argv[1];
  fs::path corpus = root / "corpus";
  std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"group end-to-end", group_end_to_end},
      {"example scripts", example_scripts},
      {"proof output parsing", fig3_parsing},
      {"lambda hole derivation", lambda_hole},
      {"equational basis", equational_basis},
      {"kernel property suites", kernel_properties},
      {"ordering property suites", ordering_properties},
      {"reconstruction totality", [&] { return reconstruction_totality(corpus); }},
      {"heuristic coverage", heuristic_coverage},
      {"mutation soundness", [&] { return mutation_soundness(corpus); }},
      {"benchmark harness", [&] { return benchmark_harness(corpus); }},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail.str() << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
