#include "mella/script/session.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "mella/kernel/basis.hpp"
#include "mella/kernel/pretty.hpp"

namespace mella::script {

namespace {

bool same_metas(const k::CheckState& a, const k::CheckState& b) {
  if (a.metas.size() != b.metas.size() || a.meta_counter != b.meta_counter) return false;
  for (std::size_t i = 0; i < a.metas.size(); ++i)
    if (a.metas[i].meta_id != b.metas[i].meta_id || a.metas[i].expected != b.metas[i].expected ||
        !(a.metas[i].captured_unnamed == b.metas[i].captured_unnamed))
      return false;
  return true;
}

}  // namespace

bool operator==(const SessionState& a, const SessionState& b) {
  if (!(a.named == b.named) || a.transcript != b.transcript || a.open.has_value() != b.open.has_value() ||
      a.last != b.last)
    return false;
  if (!a.open) return true;
  return a.open->name == b.open->name && a.open->type == b.open->type && a.open->proof == b.open->proof &&
         same_metas(a.open->state, b.open->state);
}

SessionState initial_state() {
  SessionState s;
  k::install_basis(s.named);
  return s;
}

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string show(const k::Term& t, const k::UnnamedContext& delta, const k::NamedContext& gamma) {
  return k::pretty(t, delta.names(), &gamma);
}

std::string render_context(const k::UnnamedContext& delta, const k::NamedContext& gamma) {
  std::ostringstream out;
  k::UnnamedContext prefix;
  for (std::size_t i = delta.size(); i-- > 0;) {
    const auto& e = delta.at(i);
    out << "  " << e.tag.name << " : " << show(e.type, prefix, gamma) << "\n";
    prefix.push(e.tag, e.type);
  }
  return out.str();
}

class Executor {
 public:
  Executor(const SessionState& s, const SessionConfig& config) : s_(s), config_(config) {}

  Response run(const Command& c) {
    using K = Command::Kind;
    switch (c.kind) {
      case K::Fun: return define(c, true);
      case K::Postulate: return define(c, false);
      case K::Theorem: return theorem(c);
      case K::Intro: return intro(c);
      case K::EqStep: return eq_step(c);
      case K::Refl: return refine(hole(), k::Term::refl());
      case K::Exact: return exact(c);
      case K::Qed: return qed();
      case K::Abort: {
        open();
        std::string name = s_.open->name;
        s_.open.reset();
        return {true, "aborted " + name};
      }
      case K::Waldmeister: return waldmeister(c);
      case K::Normalize: return print_proof(c, true);
      case K::Describe: return print_proof(c, false);
      case K::Type: return type_of(c);
      case K::Goals: return {true, render_goals(s_)};
      case K::Print: return print(c.name);
      case K::Commands: {
        std::ostringstream out;
        for (const auto& i : command_registry()) out << std::left << std::setw(12) << i.name << i.usage << "\n";
        return {true, out.str()};
      }
      case K::Help: {
        if (c.name.empty()) return {true, "help COMMAND describes a command; commands lists them all.\n"};
        for (const auto& i : command_registry())
          if (i.name == c.name) return {true, i.usage + "\n  " + i.doc + "\n"};
        throw Failure("no command named '" + c.name + "'");
      }
      case K::Agda: throw Failure("agda: unsupported in this artifact");
      case K::Undo: throw Failure("undo is handled by the session");
    }
    throw Failure("unknown command");
  }

  SessionState& state() { return s_; }

 private:
  OpenTheorem& open() {
    if (!s_.open) throw Failure("no theorem is open");
    return *s_.open;
  }

  const k::MetaContinuation& hole() {
    OpenTheorem& o = open();
    if (o.state.metas.empty()) throw Failure("no open goals; use qed");
    return o.state.metas.front();
  }

  k::CheckState at_hole(const k::MetaContinuation& h) {
    k::CheckState st = open().state;
    st.named = s_.named;
    st.unnamed = h.captured_unnamed;
    return st;
  }

  k::Term read(const Quoted& q, const k::UnnamedContext& delta, bool holes, std::size_t* counter = nullptr) {
    k::Term t = read_term(q.text, delta.names(), s_.named, q.loc, counter);
    if (!holes && !k::collect_metas(t).empty()) throw Failure("holes are not allowed here");
    return t;
  }

  Response define(const Command& c, bool with_body) {
    if (s_.open) throw Failure("finish or abort theorem " + s_.open->name + " first");
    if (s_.named.contains(c.name)) throw Failure("'" + c.name + "' is already defined");
    k::CheckState st;
    st.named = s_.named;
    k::Term type = read(*c.type, {}, false);
    k::infer_sort(st, type);
    std::optional<k::Term> body;
    if (with_body) {
      body = read(*c.term, {}, false);
      k::check(st, *body, type);
    }
    s_.named.insert(c.name, k::Binding{body, type});
    return {true, c.name + " : " + show(type, {}, s_.named) + "\n"};
  }

  Response theorem(const Command& c) {
    if (s_.open) throw Failure("finish or abort theorem " + s_.open->name + " first");
    if (s_.named.contains(c.name)) throw Failure("'" + c.name + "' is already defined");
    k::CheckState st;
    st.named = s_.named;
    k::Term type = read(*c.type, {}, false);
    k::infer_sort(st, type);
    std::size_t id = st.fresh_meta();
    k::check(st, k::Term::meta(id), type);
    s_.open = OpenTheorem{c.name, type, k::Term::meta(id), st};
    return {true, render_goals(s_)};
  }

  Response refine(const k::MetaContinuation& h, const k::Term& t) {
    std::size_t id = h.meta_id;
    OpenTheorem& o = open();
    k::CheckState st = o.state;
    st.named = s_.named;
    k::CheckState next = k::instantiate_meta(st, id, t);
    o.state = std::move(next);
    o.proof = k::replace_meta(o.proof, id, t);
    return {true, render_goals(s_)};
  }

  Response intro(const Command& c) {
    const k::MetaContinuation h = hole();
    k::Term goal = k::normalize(h.expected, {k::kDefaultFuel, &s_.named});
    std::size_t avail = 0;
    for (k::Term g = goal; g.is(k::Term::Kind::Pi) && avail < c.names.size(); g = g.codomain()) ++avail;
    if (avail < c.names.size())
      throw Failure("intro: the goal has only " + std::to_string(avail) + " binders, " +
                    std::to_string(c.names.size()) + " names given");
    k::Term t = k::Term::meta(open().state.meta_counter);
    for (std::size_t i = c.names.size(); i-- > 0;) t = k::Term::lam(c.names[i], t);
    return refine(h, t);
  }

  Response exact(const Command& c) {
    const k::MetaContinuation h = hole();
    std::size_t counter = open().state.meta_counter;
    k::Term t = read(*c.term, h.captured_unnamed, true, &counter);
    return refine(h, t);
  }

  Response eq_step(const Command& c) {
    const k::MetaContinuation h = hole();
    k::CheckState st = at_hole(h);
    auto goal = k::as_id(st, h.expected);
    if (!goal) throw Failure("the goal " + show(h.expected, h.captured_unnamed, s_.named) + " is not an equation");
    const k::Term& a = goal->kid(0);
    const k::Term& lhs = goal->kid(1);
    const k::Term& rhs = goal->kid(2);
    k::Term mid = read(*c.term, h.captured_unnamed, false);
    k::Term by = read(*c.by, h.captured_unnamed, false);
    k::Term by_type = k::infer(st, by);
    auto eq = k::as_id(st, by_type);
    if (!eq) throw Failure("the justification has type " + show(by_type, h.captured_unnamed, s_.named) +
                           ", not an equation");
    k::Term from = eq->kid(1), to = eq->kid(2), step = by;
    PositionSpec at = c.at.value_or(PositionSpec{});
    if (at.direction == rewriting::Direction::RL) {
      step = k::Term::app(k::Term::named("sym"), {eq->kid(0), from, to, by});
      std::swap(from, to);
    }
    if (!at.path.empty()) {
      k::Term ctx;
      try {
        ctx = bridge::context_lambda(at.path, lhs);
      } catch (const std::invalid_argument& e) {
        throw Failure(std::string(e.what()) + " in " + show(lhs, h.captured_unnamed, s_.named));
      }
      step = k::Term::app(k::Term::named("cong"), {a, a, from, to, ctx, step});
    }
    k::Term rest = k::Term::meta(open().state.meta_counter);
    k::Term t = k::Term::app(k::Term::named("trans"), {a, lhs, mid, rhs, step, rest});
    return refine(h, t);
  }

  Response qed() {
    OpenTheorem& o = open();
    if (!o.state.metas.empty())
      throw Failure(std::to_string(o.state.metas.size()) + " goal(s) still open\n" + render_goals(s_));
    k::CheckState st;
    st.named = s_.named;
    k::check(st, o.proof, o.type);
    s_.named.insert(o.name, k::Binding{o.proof, o.type});
    s_.last = std::make_pair(o.name, o.proof);
    std::string name = o.name;
    s_.open.reset();
    return {true, name + " proved\n"};
  }

  Response waldmeister(const Command& c) {
    const k::MetaContinuation h = hole();
    k::CheckState hole_state;
    hole_state.named = s_.named;
    hole_state.unnamed = h.captured_unnamed;
    bridge::Translation tr;
    try {
      tr = bridge::serialize_problem(hole_state, h.expected, c.signature, c.axioms,
                                     c.kbo ? bridge::OrderingChoice::KBO : bridge::OrderingChoice::LPO, c.timeout);
    } catch (const bridge::TranslationError& e) {
      throw Failure(std::string("waldmeister: ") + e.what());
    }
    bridge::ProveReport rep = bridge::prove(tr, config_.prover);
    if (rep.status != bridge::ProveStatus::Proved)
      throw Failure("waldmeister: " + std::string(bridge::to_string(rep.status)) +
                    (rep.message.empty() ? "" : ": " + rep.message));
    const auto& res = *rep.result;
    s_.named = res.named();
    refine(h, res.proof());
    std::ostringstream out;
    out << "proved by " << rep.prover << " in " << std::fixed << std::setprecision(3) << rep.search_seconds
        << " s, reconstructed in " << res.stats().seconds << " s";
    if (!res.lemmas().empty()) {
      out << "; lemmas:";
      for (const auto& l : res.lemmas()) out << " " << l.name;
    }
    out << "\n";
    for (const auto& i : res.instantiations()) out << "  instantiated " << i << "\n";
    out << render_goals(s_);
    return {true, out.str()};
  }

  Response print_proof(const Command& c, bool normal) {
    k::Term t;
    std::string label;
    if (c.name == "proof" && !s_.named.contains("proof")) {
      if (s_.open) {
        t = s_.open->proof;
        label = s_.open->name;
      } else if (s_.last) {
        t = s_.last->second;
        label = s_.last->first;
      } else {
        throw Failure("there is no proof to show");
      }
    } else {
      const k::Binding* b = s_.named.find(c.name);
      if (!b) throw Failure("unknown name '" + c.name + "'");
      if (!b->definiens) throw Failure("'" + c.name + "' has no definition");
      t = *b->definiens;
      label = c.name;
    }
    if (normal) {
      try {
        t = k::normalize(t, {k::kDefaultFuel, &s_.named});
      } catch (const k::TypeError& e) {
        throw Failure(std::string("normalize: ") + e.what());
      }
    }
    return {true, label + " = " + show(t, {}, s_.named) + "\n"};
  }

  Response type_of(const Command& c) {
    k::CheckState st;
    st.named = s_.named;
    if (s_.open && !s_.open->state.metas.empty()) st.unnamed = s_.open->state.metas.front().captured_unnamed;
    k::Term t = read(*c.term, st.unnamed, false);
    k::Term ty = k::infer(st, t);
    return {true, show(t, st.unnamed, s_.named) + " : " + show(ty, st.unnamed, s_.named) + "\n"};
  }

  Response print(const std::string& name) {
    const k::Binding* b = s_.named.find(name);
    if (!b) throw Failure("unknown name '" + name + "'");
    std::string out = name + " : " + show(b->type, {}, s_.named) + "\n";
    if (b->definiens) out += name + " = " + show(*b->definiens, {}, s_.named) + "\n";
    return {true, out};
  }

  SessionState s_;
  const SessionConfig& config_;
};

}  // namespace

std::string render_goals(const SessionState& state) {
  if (!state.open) return "no theorem is open\n";
  const auto& metas = state.open->state.metas;
  if (metas.empty()) return "no goals left in " + state.open->name + "\n";
  std::ostringstream out;
  out << metas.size() << " goal" << (metas.size() == 1 ? "" : "s") << "\n";
  for (std::size_t i = 0; i < metas.size(); ++i) {
    const auto& m = metas[i];
    if (i == 0) out << render_context(m.captured_unnamed, state.named);
    out << "  ----\n  ?" << i + 1 << " : " << show(m.expected, m.captured_unnamed, state.named) << "\n";
  }
  return out.str();
}

std::pair<SessionState, Response> execute(const Command& cmd, const SessionState& state, const SessionConfig& config) {
  Executor ex(state, config);
  try {
    Response r = ex.run(cmd);
    SessionState next = std::move(ex.state());
    if (!cmd.source.empty()) next.transcript.push_back(cmd.source);
    return {std::move(next), std::move(r)};
  } catch (const SyntaxError& e) {
    return {state, {false, std::string(e.what()) + "\n", k::SourceLoc{e.line, e.column}}};
  } catch (const std::exception& e) {
    return {state, {false, std::string(e.what()) + "\n", cmd.loc}};
  }
}

Response Session::execute(const Command& cmd) {
  if (cmd.kind == Command::Kind::Undo) {
    if (history_.empty()) return {false, "nothing to undo\n"};
    state_ = std::move(history_.back());
    history_.pop_back();
    return {true, "undone\n" + render_goals(state_)};
  }
  auto [next, r] = script::execute(cmd, state_, config_);
  history_.push_back(std::move(state_));
  state_ = std::move(next);
  return r;
}

std::vector<Response> Session::run(const std::string& text) {
  std::vector<Command> cmds;
  try {
    cmds = parse_outer(text);
  } catch (const SyntaxError& e) {
    return {{false, std::string("syntax error at ") + e.what() + "\n", k::SourceLoc{e.line, e.column}}};
  }
  std::vector<Response> out;
  for (const auto& c : cmds) {
    out.push_back(execute(c));
    if (!out.back().ok) break;
  }
  return out;
}

}  // namespace mella::script
