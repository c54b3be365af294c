#ifndef MELLA_KERNEL_CONTEXT_HPP
#define MELLA_KERNEL_CONTEXT_HPP

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mella/kernel/term.hpp"

namespace mella::kernel {

/// Global declaration: a type and, for definitions, a definiens.
struct Binding {
  std::optional<Term> definiens;
  Term type;
};

/// Insertion-ordered map of unique identifiers to bindings (Gamma).
///
/// Copies share storage until one of them is modified, so snapshots taken
/// by metavariable continuations and undo are cheap.
class NamedContext {
 public:
  struct Entry {
    std::string name;
    Binding binding;
  };

  bool contains(const std::string& name) const;
  const Binding* find(const std::string& name) const;

  /// Inserts a fresh binding; throws TypeError(InvalidContext) if the name is taken.
  void insert(std::string name, Binding binding);

  std::size_t size() const { return impl_ ? impl_->entries.size() : 0; }
  bool empty() const { return size() == 0; }

  /// Entries in insertion order.
  const std::vector<Entry>& entries() const;

  friend bool operator==(const NamedContext& a, const NamedContext& b);

 private:
  struct Impl {
    std::vector<Entry> entries;
    std::unordered_map<std::string, std::size_t> index;
  };
  std::shared_ptr<const Impl> impl_;
};

/// Unnamed binder types (Delta). Position 0 is the most recent binder; each
/// stored type is relative to the binders outside it.
class UnnamedContext {
 public:
  struct Entry {
    Tag tag;
    Term type;
  };

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  void push(Tag tag, Term type) { entries_.push_back({std::move(tag), std::move(type)}); }
  void pop() { entries_.pop_back(); }

  /// The raw stored entry at position n (Delta !! n), unshifted.
  const Entry& at(std::size_t n) const { return entries_[entries_.size() - 1 - n]; }

  /// Binder names, innermost first.
  std::vector<std::string> names() const;

  /// Index of the innermost binder with this tag name, if any.
  std::optional<std::size_t> find(const std::string& name) const;

  friend bool operator==(const UnnamedContext& a, const UnnamedContext& b);

 private:
  std::vector<Entry> entries_;  // outermost first
};

/// Delta ! n: the type at position n shifted by n + 1 so it is valid in all of Delta.
Term lookup_unnamed(const UnnamedContext& delta, std::size_t n);

}  // namespace mella::kernel

#endif
