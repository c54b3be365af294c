#include "mella/kernel/term.hpp"

#include <algorithm>
#include <utility>

#include "mella/kernel/error.hpp"

namespace mella::kernel {

Term Term::make(Node node) {
  std::size_t bound = 0;
  bool meta = node.kind == Kind::Meta;
  std::size_t size = 1;
  switch (node.kind) {
    case Kind::Unnamed:
      bound = node.index + 1;
      break;
    case Kind::Pi: {
      auto cod = node.kids[1].free_bound();
      bound = std::max(node.kids[0].free_bound(), cod > 0 ? cod - 1 : 0);
      break;
    }
    case Kind::Lam: {
      auto b = node.kids[0].free_bound();
      bound = b > 0 ? b - 1 : 0;
      break;
    }
    default:
      for (const auto& k : node.kids) bound = std::max(bound, k.free_bound());
      break;
  }
  for (const auto& k : node.kids) {
    meta = meta || k.has_meta();
    size += k.size();
  }
  node.free_bound = bound;
  node.has_meta = meta;
  node.size = size;
  return Term(std::make_shared<const Node>(std::move(node)));
}

Term Term::sort(Sort s) {
  Node n;
  n.kind = Kind::Sort;
  n.sort = s;
  return make(std::move(n));
}

Term Term::unnamed(std::size_t index, std::string display) {
  Node n;
  n.kind = Kind::Unnamed;
  n.index = index;
  n.name = std::move(display);
  return make(std::move(n));
}

Term Term::named(std::string name) {
  Node n;
  n.kind = Kind::Named;
  n.name = std::move(name);
  return make(std::move(n));
}

Term Term::pi(Tag tag, Term domain, Term codomain) {
  Node n;
  n.kind = Kind::Pi;
  n.tag = std::move(tag);
  n.kids = {std::move(domain), std::move(codomain)};
  return make(std::move(n));
}

Term Term::lam(Tag tag, Term body) {
  Node n;
  n.kind = Kind::Lam;
  n.tag = std::move(tag);
  n.kids = {std::move(body)};
  return make(std::move(n));
}

Term Term::app(Term fn, Term arg) {
  Node n;
  n.kind = Kind::App;
  n.kids = {std::move(fn), std::move(arg)};
  return make(std::move(n));
}

Term Term::app(Term fn, std::initializer_list<Term> args) {
  for (const auto& a : args) fn = app(std::move(fn), a);
  return fn;
}

Term Term::app(Term fn, const std::vector<Term>& args) {
  for (const auto& a : args) fn = app(std::move(fn), a);
  return fn;
}

Term Term::ann(Term term, Term type) {
  Node n;
  n.kind = Kind::Ann;
  n.kids = {std::move(term), std::move(type)};
  return make(std::move(n));
}

Term Term::id(Term type, Term left, Term right) {
  Node n;
  n.kind = Kind::Id;
  n.kids = {std::move(type), std::move(left), std::move(right)};
  return make(std::move(n));
}

Term Term::refl() {
  static const Term r = [] {
    Node n;
    n.kind = Kind::Refl;
    return make(std::move(n));
  }();
  return r;
}

Term Term::j(std::array<Term, 6> args) {
  Node n;
  n.kind = Kind::J;
  n.kids.assign(std::make_move_iterator(args.begin()), std::make_move_iterator(args.end()));
  return make(std::move(n));
}

Term Term::meta(std::size_t id) {
  Node n;
  n.kind = Kind::Meta;
  n.index = id;
  return make(std::move(n));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind()) return false;
  if (a.free_bound() != b.free_bound() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case Term::Kind::Sort:
      return a.sort_value() == b.sort_value();
    case Term::Kind::Unnamed:
    case Term::Kind::Meta:
      return a.index() == b.index();
    case Term::Kind::Named:
      return a.name() == b.name();
    case Term::Kind::Refl:
      return true;
    default:
      break;
  }
  const auto& ka = a.kids();
  const auto& kb = b.kids();
  for (std::size_t i = 0; i < ka.size(); ++i)
    if (!(ka[i] == kb[i])) return false;
  return true;
}

Term with_kids(const Term& t, std::vector<Term> kids) {
  switch (t.kind()) {
    case Term::Kind::Pi:
      return Term::pi(t.tag(), std::move(kids[0]), std::move(kids[1]));
    case Term::Kind::Lam:
      return Term::lam(t.tag(), std::move(kids[0]));
    case Term::Kind::App:
      return Term::app(std::move(kids[0]), std::move(kids[1]));
    case Term::Kind::Ann:
      return Term::ann(std::move(kids[0]), std::move(kids[1]));
    case Term::Kind::Id:
      return Term::id(std::move(kids[0]), std::move(kids[1]), std::move(kids[2]));
    case Term::Kind::J:
      return Term::j({kids[0], kids[1], kids[2], kids[3], kids[4], kids[5]});
    default:
      return t;
  }
}

namespace {

// Number of binders a child sits under, relative to its parent.
std::size_t binder_offset(Term::Kind parent, std::size_t child) {
  if (parent == Term::Kind::Lam) return 1;
  if (parent == Term::Kind::Pi && child == 1) return 1;
  return 0;
}

template <class Leaf>
Term map_indices(const Term& t, std::size_t depth, const Leaf& leaf) {
  if (t.free_bound() <= depth) return t;
  if (t.is(Term::Kind::Unnamed)) return leaf(t, depth);
  const auto& kids = t.kids();
  std::vector<Term> out;
  out.reserve(kids.size());
  bool changed = false;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    out.push_back(map_indices(kids[i], depth + binder_offset(t.kind(), i), leaf));
    changed = changed || !out.back().same_node(kids[i]);
  }
  return changed ? with_kids(t, std::move(out)) : t;
}

}  // namespace

Term shift(std::int64_t d, std::size_t c, const Term& t) {
  if (d == 0) return t;
  return map_indices(t, c, [d](const Term& v, std::size_t cutoff) {
    auto n = static_cast<std::int64_t>(v.index());
    if (n + d < static_cast<std::int64_t>(cutoff))
      throw TypeError(ErrorKind::InvalidContext,
                      "negative shift would capture free index " + std::to_string(n), {v});
    return Term::unnamed(static_cast<std::size_t>(n + d), v.name());
  });
}

Term substitute(std::size_t k, const Term& s, const Term& t) {
  // map_indices only visits indices >= cutoff; use cutoff k and track depth.
  struct Rec {
    std::size_t k;
    const Term& s;
    Term go(const Term& t, std::size_t depth) const {
      if (t.free_bound() <= k + depth) return t;
      if (t.is(Term::Kind::Unnamed)) {
        if (t.index() == k + depth) return shift(static_cast<std::int64_t>(depth), 0, s);
        return t;
      }
      const auto& kids = t.kids();
      std::vector<Term> out;
      out.reserve(kids.size());
      bool changed = false;
      for (std::size_t i = 0; i < kids.size(); ++i) {
        out.push_back(go(kids[i], depth + binder_offset(t.kind(), i)));
        changed = changed || !out.back().same_node(kids[i]);
      }
      return changed ? with_kids(t, std::move(out)) : t;
    }
  };
  return Rec{k, s}.go(t, 0);
}

Term instantiate(const Term& body, const Term& x) {
  return shift(-1, 0, substitute(0, shift(1, 0, x), body));
}

bool occurs_free(std::size_t k, const Term& t) {
  struct Rec {
    std::size_t k;
    bool go(const Term& t, std::size_t depth) const {
      if (t.free_bound() <= k + depth) return false;
      if (t.is(Term::Kind::Unnamed)) return t.index() == k + depth;
      const auto& kids = t.kids();
      for (std::size_t i = 0; i < kids.size(); ++i)
        if (go(kids[i], depth + binder_offset(t.kind(), i))) return true;
      return false;
    }
  };
  return Rec{k}.go(t, 0);
}

Term replace_meta(const Term& t, std::size_t id, const Term& replacement) {
  if (!t.has_meta()) return t;
  if (t.is(Term::Kind::Meta)) return t.meta_id() == id ? replacement : t;
  const auto& kids = t.kids();
  std::vector<Term> out;
  out.reserve(kids.size());
  bool changed = false;
  for (const auto& k : kids) {
    out.push_back(replace_meta(k, id, replacement));
    changed = changed || !out.back().same_node(k);
  }
  return changed ? with_kids(t, std::move(out)) : t;
}

namespace {
void collect(const Term& t, std::vector<std::size_t>& out) {
  if (!t.has_meta()) return;
  if (t.is(Term::Kind::Meta)) {
    out.push_back(t.meta_id());
    return;
  }
  for (const auto& k : t.kids()) collect(k, out);
}
}  // namespace

std::vector<std::size_t> collect_metas(const Term& t) {
  std::vector<std::size_t> out;
  collect(t, out);
  return out;
}

Spine unapply(const Term& t) {
  Spine s;
  Term cur = t;
  while (cur.is(Term::Kind::App)) {
    s.args.push_back(cur.arg());
    cur = cur.fn();
  }
  std::reverse(s.args.begin(), s.args.end());
  s.head = cur;
  return s;
}

}  // namespace mella::kernel
