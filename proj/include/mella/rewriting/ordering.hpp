#ifndef MELLA_REWRITING_ORDERING_HPP
#define MELLA_REWRITING_ORDERING_HPP

#include <map>
#include <string>
#include <vector>

#include "mella/rewriting/term.hpp"

namespace mella::rewriting {

enum class Cmp { Greater, Less, Equal, Incomparable };

std::string_view to_string(Cmp c);

/// LPO or KBO over a total symbol precedence.
class Ordering {
 public:
  enum class Kind { LPO, KBO };

  /// `precedence` lists every symbol, greatest first.
  static Ordering lpo(const Signature& sig, const std::vector<SymbolId>& precedence);
  /// Weights default to 1. Throws std::invalid_argument when the weights are
  /// not admissible: variable weight must be positive, constants weigh at
  /// least the variable weight, and a weight-0 unary symbol must be greatest.
  static Ordering kbo(const Signature& sig, const std::vector<SymbolId>& precedence,
                      const std::map<SymbolId, unsigned>& weights = {}, unsigned var_weight = 1);

  Kind kind() const { return kind_; }
  /// Greatest first.
  const std::vector<SymbolId>& precedence() const { return precedence_; }
  std::size_t rank(SymbolId f) const { return rank_.at(f); }
  unsigned weight(SymbolId f) const { return weights_.at(f); }
  unsigned var_weight() const { return var_weight_; }
  const std::vector<unsigned>& weights() const { return weights_; }

  /// Appends a fresh symbol (e.g. a Skolem constant) below every other one.
  void add_lowest(SymbolId f, unsigned weight = 1);

  bool greater(const FoTerm& s, const FoTerm& t) const;
  Cmp compare(const FoTerm& s, const FoTerm& t) const;

 private:
  Ordering() = default;
  void set_precedence(const Signature& sig, const std::vector<SymbolId>& precedence);

  Kind kind_ = Kind::LPO;
  std::vector<SymbolId> precedence_;
  std::vector<std::size_t> rank_;  // by symbol id; larger is greater
  std::vector<unsigned> weights_;
  unsigned var_weight_ = 1;
};

bool lpo_greater(const Ordering& o, const FoTerm& s, const FoTerm& t);
bool kbo_greater(const Ordering& o, const FoTerm& s, const FoTerm& t);
Cmp lpo_compare(const Ordering& o, const FoTerm& s, const FoTerm& t);
Cmp kbo_compare(const Ordering& o, const FoTerm& s, const FoTerm& t);

/// Weight of a term under the ordering's KBO weights.
unsigned long kbo_weight(const Ordering& o, const FoTerm& t);

}  // namespace mella::rewriting

#endif
