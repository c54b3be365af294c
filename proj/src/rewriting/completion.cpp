#include "mella/rewriting/completion.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <new>
#include <set>

namespace mella::rewriting {

Orientation orient(const Equation& eq, const Ordering& o) {
  switch (o.compare(eq.lhs, eq.rhs)) {
    case Cmp::Greater: return Orientation::LR;
    case Cmp::Less: return Orientation::RL;
    default: return Orientation::None;
  }
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Proved: return "Proved";
    case Status::Timeout: return "Timeout";
    case Status::Unprovable: return "Unprovable";
    case Status::Error: return "Error";
  }
  return "?";
}

namespace {

void chain_variables(const Chain& chain, std::vector<VarId>& out) {
  for (const auto& s : chain) {
    collect_variables(s.from, out);
    collect_variables(s.to, out);
    for (const auto& [v, t] : s.subst.bindings()) collect_variables(t, out);
  }
}

Substitution map_range(const Substitution& s, const std::function<FoTerm(const FoTerm&)>& f) {
  Substitution out;
  for (const auto& [v, t] : s.bindings()) out.bind(v, f(t));
  return out;
}

void map_chain(Chain& chain, const std::function<FoTerm(const FoTerm&)>& f) {
  for (auto& s : chain) {
    s.from = f(s.from);
    s.to = f(s.to);
    s.subst = map_range(s.subst, f);
  }
}

// Renames lhs/rhs variables to 0..k-1 and any other chain variables after them.
void canonicalize(FoTerm& lhs, FoTerm& rhs, FoTerm* peak, Chain& chain) {
  std::vector<VarId> vs;
  collect_variables(lhs, vs);
  collect_variables(rhs, vs);
  if (peak) collect_variables(*peak, vs);
  chain_variables(chain, vs);
  std::map<VarId, VarId> table;
  for (std::size_t i = 0; i < vs.size(); ++i) table[vs[i]] = i;
  auto f = [&](const FoTerm& t) { return rename(t, table); };
  lhs = f(lhs);
  rhs = f(rhs);
  if (peak) *peak = f(*peak);
  map_chain(chain, f);
}

Substitution identity_on(const std::vector<VarId>& vars) {
  Substitution s;
  for (VarId v : vars) s.bind(v, FoTerm::var(v));
  return s;
}

}  // namespace

std::vector<CriticalPair> critical_pairs(const RuleView& inner, const RuleView& outer,
                                         const Ordering* ordering, bool include_root) {
  std::vector<CriticalPair> out;
  std::size_t off = std::max(max_var_plus_one(outer.eq.lhs), max_var_plus_one(outer.eq.rhs));
  FoTerm l1 = rename(inner.lhs(), off), r1 = rename(inner.rhs(), off);
  const FoTerm& l2 = outer.lhs();
  const FoTerm& r2 = outer.rhs();
  if (l1.is_var() || l2.is_var()) return out;
  auto violates = [&](const FoTerm& l, const FoTerm& r) {
    if (!ordering) return false;
    Cmp c = ordering->compare(l, r);
    return c == Cmp::Less || c == Cmp::Equal;
  };
  std::vector<VarId> inner_vars = inner.eq.variables();
  std::vector<VarId> outer_vars = outer.eq.variables();
  for (const Position& p : fun_positions(l2)) {
    if (p.empty() && !include_root) continue;
    auto mgu = unify(subterm_at(l2, p), l1);
    if (!mgu) continue;
    const Substitution& s = *mgu;
    if (violates(s(l1), s(r1)) || violates(s(l2), s(r2))) continue;
    CriticalPair cp;
    cp.position = p;
    cp.peak = s(l2);
    cp.eq.label = Label::lemma(0);
    cp.eq.lhs = replace_at(cp.peak, p, s(r1));
    cp.eq.rhs = s(r2);
    Substitution s1, s2;
    for (VarId v : inner_vars) s1.bind(v, s(FoTerm::var(v + off)));
    for (VarId v : outer_vars) s2.bind(v, s(FoTerm::var(v)));
    cp.chain.push_back({inner.eq.label, flip(inner.dir), p, std::move(s1), cp.eq.lhs, cp.peak});
    cp.chain.push_back({outer.eq.label, outer.dir, {}, std::move(s2), cp.peak, cp.eq.rhs});
    canonicalize(cp.eq.lhs, cp.eq.rhs, &cp.peak, cp.chain);
    out.push_back(std::move(cp));
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

struct RelStep {
  std::size_t ref;
  Direction dir;
  Position pos;
  Substitution subst;
};

struct Stored {
  FoTerm lhs, rhs;
  Orientation orient = Orientation::None;
  Chain chain;  // empty for axioms; steps cite internal ids as Label::lemma(id)
  bool is_axiom = false;
  std::size_t axiom_no = 0;
  bool active = false;
  bool queued = false;
  std::vector<VarId> vars;
  std::size_t weight = 0;
};

class Engine {
 public:
  Engine(const Problem& p, const Limits& limits)
      : problem_(p), limits_(limits), sig_(p.signature), ord_(p.ordering) {}

  Outcome run() {
    start_ = Clock::now();
    Outcome out;
    try {
      out = loop();
    } catch (const std::bad_alloc&) {
      out.status = Status::Error;
      out.message = "out of memory";
    }
    out.stats = stats_;
    out.stats.elapsed = elapsed();
    out.skolems = skolems_;
    for (std::size_t i = 0; i < active_.size(); ++i)
      out.active.push_back({Label::lemma(i + 1), store_[active_[i]].lhs, store_[active_[i]].rhs});
    return out;
  }

 private:
  double last_progress_ = 0;
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  Equation as_equation(std::size_t id) const {
    return {Label::lemma(id), store_[id].lhs, store_[id].rhs};
  }

  // ---- setup ----

  void skolemise_goal() {
    Equation g = canonical(problem_.goal);
    std::vector<VarId> vs = g.variables();
    Substitution sk;
    for (VarId v : vs) {
      std::string name = "sk" + std::to_string(v + 1);
      while (sig_.find(name)) name += "'";
      SymbolId f = sig_.add_symbol(name, {}, 0);
      ord_.add_lowest(f);
      skolems_.push_back({v, f});
      sk.bind(v, FoTerm::fun(f));
    }
    goal_lhs_ = sk(g.lhs);
    goal_rhs_ = sk(g.rhs);
    // lowest-precedence constant, used to instantiate variables that occur
    // only inside a proof
    for (auto it = ord_.precedence().rbegin(); it != ord_.precedence().rend(); ++it) {
      if (sig_.symbol(*it).arity() == 0) {
        filler_ = FoTerm::fun(*it);
        break;
      }
    }
  }

  std::size_t add_stored(Stored s) {
    s.vars = Equation{Label::lemma(0), s.lhs, s.rhs}.variables();
    s.weight = s.lhs.size() + s.rhs.size();
    s.orient = orient(Equation{Label::lemma(0), s.lhs, s.rhs}, ord_);
    store_.push_back(std::move(s));
    ++stats_.generated;
    return store_.size() - 1;
  }

  // New derived equation lhs = rhs justified by chain. Variables that occur
  // only inside the chain are instantiated, then everything is renamed.
  std::size_t add_derived(FoTerm lhs, FoTerm rhs, Chain chain) {
    std::vector<VarId> eq_vars;
    collect_variables(lhs, eq_vars);
    collect_variables(rhs, eq_vars);
    std::vector<VarId> all = eq_vars;
    chain_variables(chain, all);
    if (all.size() > eq_vars.size()) {
      FoTerm repl = eq_vars.empty() ? filler_ : FoTerm::var(eq_vars.front());
      if (repl) {
        Substitution theta;
        for (std::size_t i = eq_vars.size(); i < all.size(); ++i) theta.bind(all[i], repl);
        map_chain(chain, [&](const FoTerm& t) { return theta(t); });
      }
    }
    canonicalize(lhs, rhs, nullptr, chain);
    Stored s;
    s.lhs = std::move(lhs);
    s.rhs = std::move(rhs);
    s.chain = std::move(chain);
    return add_stored(std::move(s));
  }

  // ---- passive queue ----

  void enqueue(std::size_t id) {
    store_[id].queued = true;
    by_weight_.insert({store_[id].weight, id});
    by_age_.insert(id);
  }

  std::size_t pick() {
    std::size_t id;
    if (++picks_ % 6 == 0)
      id = *by_age_.begin();
    else
      id = by_weight_.begin()->second;
    by_weight_.erase({store_[id].weight, id});
    by_age_.erase(id);
    store_[id].queued = false;
    return id;
  }

  // ---- rewriting ----

  bool rewrite_usable(std::size_t id, Direction d) const {
    const Stored& s = store_[id];
    if (s.orient == Orientation::LR && d == Direction::RL) return false;
    if (s.orient == Orientation::RL && d == Direction::LR) return false;
    const FoTerm& src = d == Direction::LR ? s.lhs : s.rhs;
    const FoTerm& tgt = d == Direction::LR ? s.rhs : s.lhs;
    if (src.is_var()) return false;
    std::vector<VarId> sv = variables(src);
    for (VarId v : variables(tgt))
      if (std::find(sv.begin(), sv.end(), v) == sv.end()) return false;
    return true;
  }

  bool overlap_usable(std::size_t id, Direction d) const {
    const Stored& s = store_[id];
    if (s.orient == Orientation::LR && d == Direction::RL) return false;
    if (s.orient == Orientation::RL && d == Direction::LR) return false;
    return !(d == Direction::LR ? s.lhs : s.rhs).is_var();
  }

  // Root rewrite of t by rule (id, d), honouring the ordering for unorientable equations.
  std::optional<std::pair<Substitution, FoTerm>> try_rule(std::size_t id, Direction d,
                                                          const FoTerm& t) const {
    const Stored& s = store_[id];
    const FoTerm& src = d == Direction::LR ? s.lhs : s.rhs;
    const FoTerm& tgt = d == Direction::LR ? s.rhs : s.lhs;
    Substitution sigma;
    if (!match_into(src, t, sigma)) return std::nullopt;
    FoTerm result = sigma(tgt);
    if (s.orient == Orientation::None && !ord_.greater(t, result)) return std::nullopt;
    return std::make_pair(std::move(sigma), std::move(result));
  }

  std::optional<std::pair<RelStep, FoTerm>> rewrite_root(const FoTerm& t, const Position& pos) const {
    auto it = index_.find(t.symbol());
    if (it == index_.end()) return std::nullopt;
    for (const auto& [id, d] : it->second) {
      if (auto r = try_rule(id, d, t)) return std::make_pair(RelStep{id, d, pos, r->first}, r->second);
    }
    return std::nullopt;
  }

  // Innermost normal form; steps are recorded with absolute positions.
  FoTerm normal_form(const FoTerm& t, Position& pos, std::vector<RelStep>& steps) {
    if (t.is_var()) return t;
    FoTerm cur = t;
    if (cur.arity() > 0) {
      std::vector<FoTerm> args = cur.args();
      bool changed = false;
      for (std::size_t i = 0; i < args.size(); ++i) {
        pos.push_back(i + 1);
        FoTerm a = normal_form(args[i], pos, steps);
        pos.pop_back();
        if (!(a == args[i])) {
          args[i] = std::move(a);
          changed = true;
        }
      }
      if (changed) cur = FoTerm::fun(cur.symbol(), std::move(args));
    }
    auto r = rewrite_root(cur, pos);
    if (!r) return cur;
    steps.push_back(std::move(r->first));
    ++stats_.rewrites;
    return normal_form(r->second, pos, steps);
  }

  FoTerm normal_form(const FoTerm& t, std::vector<RelStep>& steps) {
    Position pos;
    return normal_form(t, pos, steps);
  }

  Chain materialize(const FoTerm& start, const std::vector<RelStep>& steps) const {
    Chain out;
    FoTerm cur = start;
    for (const auto& r : steps) {
      const Stored& s = store_[r.ref];
      FoTerm tgt = r.subst(r.dir == Direction::LR ? s.rhs : s.lhs);
      FoTerm next = replace_at(cur, r.pos, tgt);
      out.push_back({Label::lemma(r.ref), r.dir, r.pos, r.subst, cur, next});
      cur = std::move(next);
    }
    return out;
  }

  bool reducible_by(const FoTerm& t, std::size_t id) const {
    if (t.is_var()) return false;
    for (Direction d : {Direction::LR, Direction::RL})
      if (rewrite_usable(id, d) && try_rule(id, d, t)) return true;
    for (const auto& a : t.args())
      if (reducible_by(a, id)) return true;
    return false;
  }

  // An active equation with s = sigma(lhs), t = sigma(rhs) (LR) or swapped (RL).
  std::optional<RewriteStep> instance_of(const FoTerm& s, const FoTerm& t) const {
    return instance_of(s, t, active_);
  }

  std::optional<RewriteStep> instance_of(const FoTerm& s, const FoTerm& t,
                                         const std::vector<std::size_t>& ids) const {
    for (std::size_t id : ids) {
      const Stored& e = store_[id];
      for (Direction d : {Direction::LR, Direction::RL}) {
        Substitution sigma;
        if (match_into(e.lhs, d == Direction::LR ? s : t, sigma) &&
            match_into(e.rhs, d == Direction::LR ? t : s, sigma)) {
          return RewriteStep{Label::lemma(id), d, {}, sigma, s, t};
        }
      }
    }
    return std::nullopt;
  }

  void index_add(std::size_t id) {
    for (Direction d : {Direction::LR, Direction::RL}) {
      if (!rewrite_usable(id, d)) continue;
      const FoTerm& src = d == Direction::LR ? store_[id].lhs : store_[id].rhs;
      index_[src.symbol()].push_back({id, d});
    }
  }

  void index_remove(std::size_t id) {
    for (auto& [f, v] : index_)
      v.erase(std::remove_if(v.begin(), v.end(), [id](const auto& e) { return e.first == id; }), v.end());
  }

  // ---- main loop ----

  bool goal_closed() const { return goal_lhs_ == goal_rhs_; }

  bool advance_goal() {
    std::vector<RelStep> sl, sr;
    FoTerm l = normal_form(goal_lhs_, sl);
    FoTerm r = normal_form(goal_rhs_, sr);
    for (auto& s : materialize(goal_lhs_, sl)) goal_lchain_.push_back(std::move(s));
    for (auto& s : materialize(goal_rhs_, sr)) goal_rchain_.push_back(std::move(s));
    goal_lhs_ = l;
    goal_rhs_ = r;
    if (goal_closed()) return true;
    if (auto step = instance_of(goal_lhs_, goal_rhs_)) {
      goal_bridge_ = std::move(step);
      return true;
    }
    return false;
  }

  Outcome loop() {
    skolemise_goal();
    for (std::size_t k = 0; k < problem_.axioms.size(); ++k) {
      Equation a = canonical(problem_.axioms[k]);
      Stored s;
      s.lhs = a.lhs;
      s.rhs = a.rhs;
      s.is_axiom = true;
      s.axiom_no = k + 1;
      enqueue(add_stored(std::move(s)));
    }
    if (goal_closed()) return proved();
    std::vector<std::size_t> axiom_ids(store_.size());
    for (std::size_t k = 0; k < axiom_ids.size(); ++k) axiom_ids[k] = k;
    if (auto step = instance_of(goal_lhs_, goal_rhs_, axiom_ids)) {
      goal_bridge_ = std::move(step);
      return proved();
    }

    for (;;) {
      if (limits_.stop && limits_.stop->load()) return stopped("stopped");
      if (elapsed() > limits_.seconds) return stopped("time limit reached");
      if (store_.size() > limits_.max_equations) return stopped("equation limit reached");
      if (by_age_.empty()) {
        Outcome o;
        o.status = Status::Unprovable;
        o.message = "saturated without joining the goal";
        return o;
      }
      ++stats_.iterations;
      if (limits_.progress) {
        double now = elapsed();
        if (stats_.iterations % limits_.progress_every == 0 || now - last_progress_ >= 0.1) {
          last_progress_ = now;
          limits_.progress({now, store_.size(), active_.size(), by_age_.size()});
        }
      }

      std::size_t id = pick();
      std::vector<RelStep> sl, sr;
      FoTerm l = normal_form(store_[id].lhs, sl);
      FoTerm r = normal_form(store_[id].rhs, sr);
      if (l == r || instance_of(l, r)) continue;
      std::size_t gid = id;
      if (!sl.empty() || !sr.empty()) {
        Chain chain = reversed(materialize(store_[id].lhs, sl));
        chain.push_back({Label::lemma(id), Direction::LR, {}, identity_on(store_[id].vars),
                         store_[id].lhs, store_[id].rhs});
        for (auto& s : materialize(store_[id].rhs, sr)) chain.push_back(std::move(s));
        gid = add_derived(l, r, std::move(chain));
      }
      activate(gid);
      if (advance_goal()) return proved();
    }
  }

  void activate(std::size_t gid) {
    // interreduce: actives that the new equation simplifies go back to passive
    std::vector<std::size_t> keep;
    for (std::size_t a : active_) {
      if (reducible_by(store_[a].lhs, gid) || reducible_by(store_[a].rhs, gid)) {
        index_remove(a);
        store_[a].active = false;
        enqueue(a);
      } else {
        keep.push_back(a);
      }
    }
    active_ = std::move(keep);
    store_[gid].active = true;
    active_.push_back(gid);
    index_add(gid);
    stats_.active = active_.size();

    std::vector<CriticalPair> cps;
    for (std::size_t a : active_) {
      for (Direction gd : {Direction::LR, Direction::RL}) {
        if (!overlap_usable(gid, gd)) continue;
        RuleView gv{as_equation(gid), gd};
        for (Direction ad : {Direction::LR, Direction::RL}) {
          if (!overlap_usable(a, ad)) continue;
          RuleView av{as_equation(a), ad};
          for (auto& cp : critical_pairs(gv, av, &ord_, true)) cps.push_back(std::move(cp));
          if (a != gid)
            for (auto& cp : critical_pairs(av, gv, &ord_, false)) cps.push_back(std::move(cp));
        }
      }
    }
    for (auto& cp : cps) {
      if (cp.eq.lhs == cp.eq.rhs) continue;
      enqueue(add_derived(cp.eq.lhs, cp.eq.rhs, std::move(cp.chain)));
    }
    stats_.passive = by_age_.size();
  }

  Outcome stopped(const std::string& why) {
    Outcome o;
    o.status = Status::Timeout;
    o.message = why;
    return o;
  }

  // ---- trace extraction ----

  Label external(std::size_t id, const std::map<std::size_t, std::size_t>& lemma_no) const {
    if (store_[id].is_axiom) return Label::axiom(store_[id].axiom_no);
    return Label::lemma(lemma_no.at(id));
  }

  Outcome proved() {
    Chain theorem = goal_lchain_;
    if (goal_bridge_) theorem.push_back(*goal_bridge_);
    for (auto& s : reversed(goal_rchain_)) theorem.push_back(std::move(s));

    std::set<std::size_t> used;
    std::vector<std::size_t> todo;
    for (const auto& s : theorem) todo.push_back(s.equation.number);
    while (!todo.empty()) {
      std::size_t id = todo.back();
      todo.pop_back();
      if (store_[id].is_axiom || !used.insert(id).second) continue;
      for (const auto& s : store_[id].chain) todo.push_back(s.equation.number);
    }
    std::map<std::size_t, std::size_t> lemma_no;
    for (std::size_t id : used) lemma_no[id] = lemma_no.size() + 1;

    auto relabel = [&](Chain c) {
      for (auto& s : c) s.equation = external(s.equation.number, lemma_no);
      return c;
    };

    ProofTrace trace;
    trace.signature = sig_;
    for (std::size_t k = 0; k < problem_.axioms.size(); ++k) {
      Equation a = canonical(problem_.axioms[k]);
      a.label = Label::axiom(k + 1);
      trace.axioms.push_back(a);
    }
    for (std::size_t id : used) {
      ProofTrace::Entry e;
      e.statement = {Label::lemma(lemma_no[id]), store_[id].lhs, store_[id].rhs};
      e.chain = relabel(store_[id].chain);
      trace.lemmas.push_back(std::move(e));
    }
    Substitution sk;
    for (const auto& [v, f] : skolems_) sk.bind(v, FoTerm::fun(f));
    Equation goal = canonical(problem_.goal);
    trace.theorem.statement = {Label::theorem(1), sk(goal.lhs), sk(goal.rhs)};
    trace.theorem.chain = relabel(theorem);

    Outcome o;
    if (auto defect = check_trace(trace)) {
      o.status = Status::Error;
      o.message = "internal error: emitted trace fails replay at " + defect->where + ": " +
                  defect->message;
      return o;
    }
    o.status = Status::Proved;
    o.trace = std::move(trace);
    return o;
  }

  const Problem& problem_;
  const Limits& limits_;
  Signature sig_;
  Ordering ord_;
  Clock::time_point start_;
  Statistics stats_;

  std::vector<Stored> store_;
  std::vector<std::size_t> active_;
  std::map<SymbolId, std::vector<std::pair<std::size_t, Direction>>> index_;
  std::set<std::pair<std::size_t, std::size_t>> by_weight_;
  std::set<std::size_t> by_age_;
  std::size_t picks_ = 0;

  std::vector<std::pair<VarId, SymbolId>> skolems_;
  FoTerm filler_;
  FoTerm goal_lhs_, goal_rhs_;
  Chain goal_lchain_, goal_rchain_;
  std::optional<RewriteStep> goal_bridge_;
};

}  // namespace

Outcome complete(const Problem& problem, const Limits& limits) {
  Engine engine(problem, limits);
  return engine.run();
}

}  // namespace mella::rewriting
