#ifndef MELLA_KERNEL_TERM_HPP
#define MELLA_KERNEL_TERM_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mella::kernel {

enum class SortKind : std::uint8_t { Star, Box };

/// A universe: the sort of proper types, or one of the boxes above it.
struct Sort {
  SortKind kind = SortKind::Star;
  std::uint64_t level = 0;  // only meaningful for Box

  static constexpr Sort star() { return Sort{SortKind::Star, 0}; }
  static constexpr Sort box(std::uint64_t n) { return Sort{SortKind::Box, n}; }

  bool is_star() const { return kind == SortKind::Star; }
  friend bool operator==(const Sort& a, const Sort& b) {
    return a.kind == b.kind && (a.kind == SortKind::Star || a.level == b.level);
  }
};

struct SourceLoc {
  std::size_t line = 0;
  std::size_t column = 0;
};

/// Printing-only annotation on binders. Never consulted by equality.
struct Tag {
  std::string name;
  std::optional<SourceLoc> loc;

  Tag() = default;
  Tag(std::string n) : name(std::move(n)) {}  // NOLINT: implicit on purpose
  Tag(const char* n) : name(n) {}             // NOLINT
};

/// Immutable, shared CC-omega term in locally nameless form.
///
/// Bound variables are de Bruijn indices (Unnamed); top-level declarations
/// are referenced by name (Named). Copying a Term copies a pointer.
class Term {
 public:
  enum class Kind : std::uint8_t { Sort, Unnamed, Named, Pi, Lam, App, Ann, Id, Refl, J, Meta };

  Term() = default;

  static Term sort(Sort s);
  static Term star() { return sort(Sort::star()); }
  static Term box(std::uint64_t n) { return sort(Sort::box(n)); }
  static Term unnamed(std::size_t index, std::string display = {});
  static Term named(std::string name);
  static Term pi(Tag tag, Term domain, Term codomain);
  static Term lam(Tag tag, Term body);
  static Term app(Term fn, Term arg);
  static Term app(Term fn, std::initializer_list<Term> args);
  static Term app(Term fn, const std::vector<Term>& args);
  static Term ann(Term term, Term type);
  static Term id(Term type, Term left, Term right);
  static Term refl();
  static Term j(std::array<Term, 6> args);
  static Term meta(std::size_t id);

  explicit operator bool() const { return node_ != nullptr; }

  Kind kind() const { return node_->kind; }
  bool is(Kind k) const { return node_ && node_->kind == k; }

  const Sort& sort_value() const { return node_->sort; }
  std::size_t index() const { return node_->index; }      // Unnamed
  std::size_t meta_id() const { return node_->index; }    // Meta
  const std::string& name() const { return node_->name; } // Named name, Unnamed display name
  const Tag& tag() const { return node_->tag; }           // Pi, Lam

  /// Children in constructor order: Pi(dom, cod), Lam(body), App(fn, arg),
  /// Ann(term, type), Id(type, left, right), J(a1..a6).
  const std::vector<Term>& kids() const { return node_->kids; }
  const Term& kid(std::size_t i) const { return node_->kids[i]; }

  const Term& domain() const { return kid(0); }
  const Term& codomain() const { return kid(1); }
  const Term& body() const { return kid(0); }
  const Term& fn() const { return kid(0); }
  const Term& arg() const { return kid(1); }

  /// One more than the largest free de Bruijn index; 0 iff locally closed.
  std::size_t free_bound() const { return node_->free_bound; }
  bool locally_closed() const { return node_->free_bound == 0; }
  bool has_meta() const { return node_->has_meta; }
  std::size_t size() const { return node_->size; }

  bool same_node(const Term& other) const { return node_ == other.node_; }

  /// Structural equality; tags and display names are ignored.
  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind = Kind::Refl;
    Sort sort{};
    std::size_t index = 0;
    std::string name;
    Tag tag;
    std::vector<Term> kids;
    std::size_t free_bound = 0;
    bool has_meta = false;
    std::size_t size = 1;
  };

  static Term make(Node node);
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

/// Rebuilds a node of the same kind with new children (tag, name, etc. kept).
Term with_kids(const Term& t, std::vector<Term> kids);

/// Adds d to every free index >= c. A negative d requires that no free index
/// n satisfies c <= n < c - d; violation throws TypeError(InvalidContext).
Term shift(std::int64_t d, std::size_t c, const Term& t);

/// [k -> s]t: replaces free occurrences of k, shifting s under binders.
/// Does not decrement any index.
Term substitute(std::size_t k, const Term& s, const Term& t);

/// The instantiated codomain of an application: down-shift of [0 -> up-shift x]body.
Term instantiate(const Term& body, const Term& x);

/// True iff index k occurs free in t.
bool occurs_free(std::size_t k, const Term& t);

/// Replaces every Meta(id) node by replacement.
Term replace_meta(const Term& t, std::size_t id, const Term& replacement);

/// Meta ids in left-to-right order of occurrence.
std::vector<std::size_t> collect_metas(const Term& t);

/// Head and arguments of an application spine: f a1 .. an.
struct Spine {
  Term head;
  std::vector<Term> args;
};
Spine unapply(const Term& t);

}  // namespace mella::kernel

#endif
