#ifndef MELLA_KERNEL_CHECK_HPP
#define MELLA_KERNEL_CHECK_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mella/kernel/context.hpp"
#include "mella/kernel/error.hpp"
#include "mella/kernel/normalize.hpp"
#include "mella/kernel/term.hpp"

namespace mella::kernel {

/// PTS axioms: * : □0 and □i : □(i+1).
Sort axiom_sort(Sort s);

/// PTS product rule (s1, s2, setR(s1, s2)).
Sort set_r(Sort s1, Sort s2);

/// A pending check `? :v expected`, resumable once the hole is filled.
struct MetaContinuation {
  std::size_t meta_id = 0;
  NamedContext captured_named;
  UnnamedContext captured_unnamed;
  Term expected;
};

struct LogEntry {
  std::size_t depth = 0;
  std::string rule;
  std::string judgement;
};

struct CheckOptions {
  std::size_t fuel = kDefaultFuel;
  bool log = false;
};

struct CheckState {
  NamedContext named;
  UnnamedContext unnamed;
  std::vector<MetaContinuation> metas;
  std::size_t meta_counter = 0;
  std::vector<LogEntry> log;
  std::size_t depth = 0;
  CheckOptions options;

  std::size_t fresh_meta() { return meta_counter++; }
  const MetaContinuation* find_meta(std::size_t id) const;
};

/// Γ;Δ ⊢ t :↑ T by the first inference rule that applies.
Term infer(CheckState& state, const Term& t);

/// Γ;Δ ⊢ t :↓ T; returns the name of the accepting rule.
std::string_view check(CheckState& state, const Term& t, const Term& type);

/// Infers the type of `type` and requires it to be a sort.
Sort infer_sort(CheckState& state, const Term& type);

/// Resumes the pending check for `id` with `t` under the captured unnamed
/// context. The current named context is used; it extends the captured one.
/// New holes inside `t` become new continuations. Atomic: throws and leaves
/// `state` untouched on failure.
CheckState instantiate_meta(const CheckState& state, std::size_t id, const Term& t);

/// Normalizes until the head is a Pi (unfolding definitions if needed).
std::optional<Term> as_pi(const CheckState& state, const Term& type);
/// Same for Id.
std::optional<Term> as_id(const CheckState& state, const Term& type);

struct InferRule {
  std::string_view name;
  std::optional<Term> (*apply)(CheckState&, const Term&);
};

struct CheckRule {
  std::string_view name;
  bool (*apply)(CheckState&, const Term&, const Term&);
};

/// Rules in the order they are tried.
std::span<const InferRule> inference_rules();
std::span<const CheckRule> checking_rules();

/// RAII extension of the unnamed context.
class BinderScope {
 public:
  BinderScope(CheckState& state, Tag tag, Term type) : state_(state) {
    state_.unnamed.push(std::move(tag), std::move(type));
  }
  ~BinderScope() { state_.unnamed.pop(); }
  BinderScope(const BinderScope&) = delete;
  BinderScope& operator=(const BinderScope&) = delete;

 private:
  CheckState& state_;
};

}  // namespace mella::kernel

#endif
