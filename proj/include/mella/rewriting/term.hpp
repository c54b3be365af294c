#ifndef MELLA_REWRITING_TERM_HPP
#define MELLA_REWRITING_TERM_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mella::rewriting {

using SymbolId = std::size_t;
using VarId = std::size_t;
using SortId = std::size_t;

struct Symbol {
  std::string name;
  std::vector<SortId> args;
  SortId result = 0;

  std::size_t arity() const { return args.size(); }
};

/// Sorts and function symbols in declaration order.
class Signature {
 public:
  SortId add_sort(const std::string& name);
  /// Throws std::invalid_argument on a duplicate name.
  SymbolId add_symbol(const std::string& name, std::vector<SortId> args, SortId result);
  /// Single-sorted convenience: arity arguments of sort 0.
  SymbolId add_symbol(const std::string& name, std::size_t arity);

  std::optional<SortId> find_sort(const std::string& name) const;
  std::optional<SymbolId> find(const std::string& name) const;

  const std::vector<std::string>& sorts() const { return sorts_; }
  const std::vector<Symbol>& symbols() const { return symbols_; }
  const Symbol& symbol(SymbolId id) const { return symbols_.at(id); }
  std::size_t size() const { return symbols_.size(); }

  friend bool operator==(const Signature& a, const Signature& b);

 private:
  std::vector<std::string> sorts_;
  std::vector<Symbol> symbols_;
  std::map<std::string, SymbolId> by_name_;
};

/// Immutable first-order term: a variable or a symbol applied to arguments.
class FoTerm {
 public:
  FoTerm() = default;

  static FoTerm var(VarId v, SortId sort = 0);
  static FoTerm fun(SymbolId f, std::vector<FoTerm> args = {});

  bool is_var() const { return node_->is_var; }
  VarId var_id() const { return node_->id; }
  SymbolId symbol() const { return node_->id; }
  SortId sort() const { return node_->sort; }  // variables only
  const std::vector<FoTerm>& args() const { return node_->args; }
  const FoTerm& arg(std::size_t i) const { return node_->args[i]; }
  std::size_t arity() const { return node_->args.size(); }

  /// Number of symbol and variable occurrences.
  std::size_t size() const { return node_->size; }
  bool ground() const { return node_->ground; }

  explicit operator bool() const { return node_ != nullptr; }

  friend bool operator==(const FoTerm& a, const FoTerm& b);
  friend bool operator!=(const FoTerm& a, const FoTerm& b) { return !(a == b); }
  /// Total structural order, for deterministic containers.
  friend bool operator<(const FoTerm& a, const FoTerm& b);

 private:
  struct Node {
    bool is_var = false;
    std::size_t id = 0;
    SortId sort = 0;
    std::vector<FoTerm> args;
    std::size_t size = 1;
    bool ground = true;
  };
  explicit FoTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// 1-based child indices from the root; empty is the root.
using Position = std::vector<std::size_t>;

struct PositionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

bool valid_position(const FoTerm& t, const Position& p);
const FoTerm& subterm_at(const FoTerm& t, const Position& p);
FoTerm replace_at(const FoTerm& t, const Position& p, const FoTerm& s);

/// Positions of non-variable subterms in pre-order.
std::vector<Position> fun_positions(const FoTerm& t);

/// Variables in first-occurrence order (left to right).
std::vector<VarId> variables(const FoTerm& t);
void collect_variables(const FoTerm& t, std::vector<VarId>& out);
bool occurs(VarId v, const FoTerm& t);
std::size_t max_var_plus_one(const FoTerm& t);

/// Waldmeister-style rendering "f(x1,i(a))"; positions print as "e" or "2.2".
std::string to_string(const FoTerm& t, const Signature& sig);
std::string to_string(const Position& p);
/// Variable names used in printed output.
std::string var_name(VarId v);

/// Parses prefix notation "f(t1,...,tn)". Identifiers for which `is_var`
/// returns true become variables, numbered through `vars` (extended as
/// needed); everything else must be a signature symbol of matching arity.
FoTerm parse_term(const std::string& text, const Signature& sig,
                  const std::function<bool(const std::string&)>& is_var,
                  std::map<std::string, VarId>& vars);

/// Parses a position "e" or "2.1.3".
Position parse_position(const std::string& text);

}  // namespace mella::rewriting

#endif
