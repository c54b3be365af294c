#ifndef MELLA_BRIDGE_TRANSLATE_HPP
#define MELLA_BRIDGE_TRANSLATE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mella/bridge/problem_file.hpp"
#include "mella/kernel/check.hpp"

namespace mella::bridge {

namespace k = mella::kernel;

/// A goal or axiom outside the first-order fragment, or an unknown name.
struct TranslationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Where a prover symbol lives on the kernel side.
struct KernelRef {
  enum class Kind { Global, Local, GoalVar };
  Kind kind = Kind::Global;
  std::string name;       // kernel identifier or binder name
  std::size_t level = 0;  // Local: de Bruijn level in the hole context; GoalVar: binder number

  friend bool operator==(const KernelRef&, const KernelRef&) = default;
};

/// Bijection between prover symbol names and kernel names.
class SymbolMap {
 public:
  struct Entry {
    std::string prover;
    KernelRef ref;
  };

  /// Throws std::invalid_argument if either side is already mapped.
  void add(std::string prover, KernelRef ref);
  const KernelRef* by_prover(const std::string& prover) const;
  std::optional<std::string> by_kernel(const std::string& kernel_name) const;
  const std::vector<Entry>& entries() const { return entries_; }
  std::string describe() const;

 private:
  std::vector<Entry> entries_;
};

enum class OrderingChoice { LPO, KBO };

struct AxiomInfo {
  std::string prover_label;  // "Axiom k"
  KernelRef ref;
  /// For each Pi binder of the axiom, the canonical variable it became (none
  /// when the binder does not occur in the equation).
  std::vector<std::optional<rw::VarId>> binder_vars;
};

/// Everything needed to map a prover proof back into the hole it came from.
struct Translation {
  ProblemFile file;
  SymbolMap symbols;
  std::vector<AxiomInfo> axioms;
  k::CheckState hole;  // Gamma and Delta at the hole
  k::Term goal;        // as given, valid in Delta
  k::Term base;        // the carrier type, valid in Delta
  std::vector<std::string> goal_binders;  // Pi-bound goal variables, now constants
  double timeout = 5;

  std::size_t hole_depth() const { return hole.unnamed.size(); }
};

/// Builds the prover problem for `goal` in the given contexts. `signature`
/// lists function symbols and constants in precedence order (greatest
/// first); when empty, the symbols are collected from the axioms and the goal
/// in order of appearance. Pi-bound goal variables become constants below
/// every other symbol.
Translation serialize_problem(const k::CheckState& hole, const k::Term& goal,
                              const std::vector<std::string>& signature,
                              const std::vector<std::string>& axioms, OrderingChoice ordering,
                              double timeout = 5, const std::string& name = "mella");

}  // namespace mella::bridge

#endif
