#include "mella/kernel/check.hpp"

#include <algorithm>
#include <array>

#include "mella/kernel/pretty.hpp"

namespace mella::kernel {

Sort axiom_sort(Sort s) {
  if (s.is_star()) return Sort::box(0);
  return Sort::box(s.level + 1);
}

Sort set_r(Sort s1, Sort s2) {
  if (s2.is_star()) return Sort::star();
  if (s1.is_star()) return s2;
  return Sort::box(std::max(s1.level, s2.level));
}

const MetaContinuation* CheckState::find_meta(std::size_t id) const {
  for (const auto& m : metas)
    if (m.meta_id == id) return &m;
  return nullptr;
}

namespace {

std::string show(const CheckState& st, const Term& t) {
  return pretty(t, st.unnamed.names(), &st.named);
}

[[noreturn]] void fail(const CheckState& st, ErrorKind kind, std::string message,
                       std::vector<Term> terms = {}) {
  throw TypeError(kind, std::move(message), std::move(terms), st.unnamed.names());
}

void log_rule(CheckState& st, std::string_view rule, const Term& t, const Term* type) {
  if (!st.options.log) return;
  std::string j = show(st, t);
  j += type ? " :v " + show(st, *type) : std::string(" :^");
  st.log.push_back({st.depth, std::string(rule), std::move(j)});
}

struct DepthGuard {
  explicit DepthGuard(CheckState& s) : st(s) { ++st.depth; }
  ~DepthGuard() { --st.depth; }
  CheckState& st;
};

bool equal_types(const CheckState& st, const Term& a, const Term& b) {
  return beta_equal(a, b, &st.named, st.options.fuel);
}

template <Term::Kind K>
std::optional<Term> as_kind(const CheckState& st, const Term& type) {
  if (type.is(K)) return type;
  Term n = normalize(type, {st.options.fuel, nullptr});
  if (n.is(K)) return n;
  n = normalize(type, {st.options.fuel, &st.named});
  if (n.is(K)) return n;
  return std::nullopt;
}

// ---- inference rules ----

std::optional<Term> t_axiom(CheckState&, const Term& t) {
  if (!t.is(Term::Kind::Sort)) return std::nullopt;
  return Term::sort(axiom_sort(t.sort_value()));
}

std::optional<Term> t_named(CheckState& st, const Term& t) {
  if (!t.is(Term::Kind::Named)) return std::nullopt;
  const Binding* b = st.named.find(t.name());
  if (!b) fail(st, ErrorKind::UnboundName, "unknown name '" + t.name() + "'", {t});
  return b->type;
}

std::optional<Term> t_unnamed(CheckState& st, const Term& t) {
  if (!t.is(Term::Kind::Unnamed)) return std::nullopt;
  return lookup_unnamed(st.unnamed, t.index());
}

std::optional<Term> t_ann(CheckState& st, const Term& t) {
  if (!t.is(Term::Kind::Ann)) return std::nullopt;
  infer_sort(st, t.kid(1));
  check(st, t.kid(0), t.kid(1));
  return t.kid(1);
}

std::optional<Term> eq_id(CheckState& st, const Term& t) {
  if (!t.is(Term::Kind::Id)) return std::nullopt;
  Sort s = infer_sort(st, t.kid(0));
  check(st, t.kid(1), t.kid(0));
  check(st, t.kid(2), t.kid(0));
  return Term::sort(s);
}

std::optional<Term> eq_j(CheckState& st, const Term& t) {
  if (!t.is(Term::Kind::J)) return std::nullopt;
  const Term& a = t.kid(0);
  const Term& motive = t.kid(1);
  const Term& base = t.kid(2);
  const Term& x = t.kid(3);
  const Term& y = t.kid(4);
  const Term& p = t.kid(5);
  infer_sort(st, a);
  // C : (x y : A) -> Id A x y -> *
  Term motive_type = Term::pi(
      "x", a,
      Term::pi("y", shift(1, 0, a),
               Term::pi("_", Term::id(shift(2, 0, a), Term::unnamed(1, "x"), Term::unnamed(0, "y")),
                        Term::star())));
  check(st, motive, motive_type);
  // e : (x : A) -> C x x refl
  Term base_type =
      Term::pi("x", a,
               Term::app(shift(1, 0, motive),
                         {Term::unnamed(0, "x"), Term::unnamed(0, "x"), Term::refl()}));
  check(st, base, base_type);
  check(st, x, a);
  check(st, y, a);
  check(st, p, Term::id(a, x, y));
  return Term::app(motive, {x, y, p});
}

std::optional<Term> t_pi(CheckState& st, const Term& t) {
  if (!t.is(Term::Kind::Pi)) return std::nullopt;
  Sort s1 = infer_sort(st, t.domain());
  Sort s2 = [&] {
    BinderScope scope(st, t.tag(), t.domain());
    return infer_sort(st, t.codomain());
  }();
  return Term::sort(set_r(s1, s2));
}

std::optional<Term> t_app(CheckState& st, const Term& t) {
  if (!t.is(Term::Kind::App)) return std::nullopt;
  Term fn_type = infer(st, t.fn());
  auto pi = as_pi(st, fn_type);
  if (!pi)
    fail(st, ErrorKind::Mismatch,
         "cannot apply " + show(st, t.fn()) + " of non-function type " + show(st, fn_type),
         {t.fn(), fn_type});
  check(st, t.arg(), pi->domain());
  return instantiate(pi->codomain(), t.arg());
}

// ---- checking rules ----

bool meta_capture(CheckState& st, const Term& t, const Term& type) {
  if (!t.is(Term::Kind::Meta)) return false;
  if (const MetaContinuation* seen = st.find_meta(t.meta_id())) {
    if (seen->captured_unnamed.size() != st.unnamed.size() ||
        !beta_equal(seen->expected, type, &st.named, st.options.fuel))
      fail(st, ErrorKind::Mismatch,
           "hole ?" + std::to_string(t.meta_id()) + " is used at two different types", {t, type});
    return true;
  }
  infer_sort(st, type);
  st.meta_counter = std::max(st.meta_counter, t.meta_id() + 1);
  st.metas.push_back({t.meta_id(), st.named, st.unnamed, type});
  return true;
}

bool t_abs(CheckState& st, const Term& t, const Term& type) {
  if (!t.is(Term::Kind::Lam)) return false;
  auto pi = as_pi(st, type);
  if (!pi) return false;
  infer_sort(st, pi->domain());
  BinderScope scope(st, t.tag().name.empty() ? pi->tag() : t.tag(), pi->domain());
  check(st, t.body(), pi->codomain());
  return true;
}

bool eq_refl(CheckState& st, const Term& t, const Term& type) {
  if (!t.is(Term::Kind::Refl)) return false;
  auto id = as_id(st, type);
  if (!id) return false;
  infer_sort(st, id->kid(0));
  check(st, id->kid(1), id->kid(0));
  check(st, id->kid(2), id->kid(0));
  if (!equal_types(st, id->kid(1), id->kid(2)))
    fail(st, ErrorKind::Mismatch,
         "refl cannot prove " + show(st, *id) + ": the sides are not beta-equal",
         {id->kid(1), id->kid(2)});
  return true;
}

bool t_inf(CheckState& st, const Term& t, const Term& type) {
  infer_sort(st, type);
  Term actual = infer(st, t);
  if (!equal_types(st, type, actual))
    fail(st, ErrorKind::Mismatch,
         "type mismatch for " + show(st, t) + ": expected " + show(st, type) + ", inferred " +
             show(st, actual),
         {t, type, actual});
  return true;
}

constexpr std::array<InferRule, 8> kInferRules{{
    {"T-Axiom", t_axiom},
    {"T-Named", t_named},
    {"T-Unnamed", t_unnamed},
    {"T-Ann", t_ann},
    {"Eq-Id", eq_id},
    {"Eq-J", eq_j},
    {"T-Pi", t_pi},
    {"T-App", t_app},
}};

constexpr std::array<CheckRule, 4> kCheckRules{{
    {"Meta-capture", meta_capture},
    {"T-Abs", t_abs},
    {"Eq-Refl", eq_refl},
    {"T-Inf", t_inf},
}};

}  // namespace

std::span<const InferRule> inference_rules() { return kInferRules; }
std::span<const CheckRule> checking_rules() { return kCheckRules; }

std::optional<Term> as_pi(const CheckState& state, const Term& type) {
  return as_kind<Term::Kind::Pi>(state, type);
}

std::optional<Term> as_id(const CheckState& state, const Term& type) {
  return as_kind<Term::Kind::Id>(state, type);
}

Term infer(CheckState& st, const Term& t) {
  DepthGuard guard(st);
  for (const auto& rule : kInferRules) {
    if (auto r = rule.apply(st, t)) {
      log_rule(st, rule.name, t, nullptr);
      return *r;
    }
  }
  fail(st, ErrorKind::NoRuleApplies, "no rule could be applied to infer the type of " + show(st, t),
       {t});
}

std::string_view check(CheckState& st, const Term& t, const Term& type) {
  DepthGuard guard(st);
  for (const auto& rule : kCheckRules) {
    if (rule.apply(st, t, type)) {
      log_rule(st, rule.name, t, &type);
      return rule.name;
    }
  }
  fail(st, ErrorKind::NoRuleApplies,
       "no rule could be applied to check " + show(st, t) + " against " + show(st, type),
       {t, type});
}

Sort infer_sort(CheckState& st, const Term& type) {
  Term s;
  try {
    s = infer(st, type);
  } catch (const TypeError& e) {
    // A type like (\x -> B) a is only inferable once reduced.
    if (e.kind() != ErrorKind::NoRuleApplies) throw;
    Term n = normalize(type, {st.options.fuel, nullptr});
    if (n == type) throw;
    s = infer(st, n);
  }
  if (!s.is(Term::Kind::Sort)) s = normalize(s, {st.options.fuel, &st.named});
  if (!s.is(Term::Kind::Sort))
    fail(st, ErrorKind::UniverseError,
         show(st, type) + " is not a type: its type " + show(st, s) + " is not a sort", {type, s});
  return s.sort_value();
}

namespace {

// Replaces Meta(id) by r, where r lives `extra` binders further out.
Term replace_meta_under(const Term& t, std::size_t id, const Term& r, std::size_t extra) {
  if (!t.has_meta()) return t;
  if (t.is(Term::Kind::Meta)) return t.meta_id() == id ? shift(static_cast<std::int64_t>(extra), 0, r) : t;
  std::vector<Term> kids = t.kids();
  for (std::size_t i = 0; i < kids.size(); ++i) {
    bool binder = t.is(Term::Kind::Lam) || (t.is(Term::Kind::Pi) && i == 1);
    kids[i] = replace_meta_under(kids[i], id, r, extra + binder);
  }
  return with_kids(t, std::move(kids));
}

}  // namespace

CheckState instantiate_meta(const CheckState& state, std::size_t id, const Term& t) {
  auto it = std::find_if(state.metas.begin(), state.metas.end(),
                         [id](const MetaContinuation& m) { return m.meta_id == id; });
  if (it == state.metas.end())
    throw TypeError(ErrorKind::UnboundName, "no pending metavariable ?" + std::to_string(id));
  MetaContinuation cont = *it;
  CheckState work = state;
  work.metas.erase(work.metas.begin() + (it - state.metas.begin()));
  work.unnamed = cont.captured_unnamed;
  work.depth = 0;
  check(work, t, cont.expected);
  work.unnamed = state.unnamed;
  for (auto& m : work.metas) {
    std::size_t extra = m.captured_unnamed.size() >= cont.captured_unnamed.size()
                            ? m.captured_unnamed.size() - cont.captured_unnamed.size()
                            : 0;
    m.expected = replace_meta_under(m.expected, id, t, extra);
  }
  return work;
}

}  // namespace mella::kernel
