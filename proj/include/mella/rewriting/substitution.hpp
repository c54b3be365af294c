#ifndef MELLA_REWRITING_SUBSTITUTION_HPP
#define MELLA_REWRITING_SUBSTITUTION_HPP

#include <map>
#include <optional>
#include <string>

#include "mella/rewriting/term.hpp"

namespace mella::rewriting {

/// Finite map from variables to terms; unbound variables map to themselves.
class Substitution {
 public:
  using Map = std::map<VarId, FoTerm>;

  Substitution() = default;
  explicit Substitution(Map m) : map_(std::move(m)) {}

  void bind(VarId v, FoTerm t) { map_[v] = std::move(t); }
  const FoTerm* lookup(VarId v) const {
    auto it = map_.find(v);
    return it == map_.end() ? nullptr : &it->second;
  }
  bool contains(VarId v) const { return map_.count(v) > 0; }
  std::size_t size() const { return map_.size(); }
  bool empty() const { return map_.empty(); }
  const Map& bindings() const { return map_; }

  FoTerm apply(const FoTerm& t) const;
  FoTerm operator()(const FoTerm& t) const { return apply(t); }

  friend bool operator==(const Substitution& a, const Substitution& b) { return a.map_ == b.map_; }

 private:
  Map map_;
};

/// "{x1 <- i(a), x2 <- e}"
std::string to_string(const Substitution& s, const Signature& sig);

/// Smallest s with s(pattern) == subject, extending `s` in place. On failure
/// `s` may contain partial bindings.
bool match_into(const FoTerm& pattern, const FoTerm& subject, Substitution& s);
std::optional<Substitution> match(const FoTerm& pattern, const FoTerm& subject);

/// Idempotent most general unifier, with occurs check.
std::optional<Substitution> unify(const FoTerm& a, const FoTerm& b);

/// Adds `offset` to every variable.
FoTerm rename(const FoTerm& t, std::size_t offset);
/// Renames variables through a table; unmapped ones are left alone.
FoTerm rename(const FoTerm& t, const std::map<VarId, VarId>& table);

}  // namespace mella::rewriting

#endif
