#ifndef MELLA_BRIDGE_PROBLEM_FILE_HPP
#define MELLA_BRIDGE_PROBLEM_FILE_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mella/rewriting/completion.hpp"

namespace mella::bridge {

namespace rw = mella::rewriting;

struct ParseError : std::runtime_error {
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line;
  std::size_t column;
};

struct SymbolDecl {
  std::string name;
  std::vector<std::string> args;  // sort names
  std::string result;
  friend bool operator==(const SymbolDecl&, const SymbolDecl&) = default;
};

struct VariableDecl {
  std::vector<std::string> names;
  std::string sort;
  friend bool operator==(const VariableDecl&, const VariableDecl&) = default;
};

struct OrderingSpec {
  rw::Ordering::Kind kind = rw::Ordering::Kind::LPO;
  std::vector<std::string> precedence;                  // greatest first
  std::vector<std::pair<std::string, unsigned>> weights;  // KBO only
  friend bool operator==(const OrderingSpec&, const OrderingSpec&) = default;
};

/// A prover problem in the block format:
///
///   NAME group / MODE PROOF / SORTS / SIGNATURE / ORDERING / VARIABLES /
///   EQUATIONS / CONCLUSION
///
/// Equation terms number their variables by position in the flattened
/// VARIABLES declaration.
struct ProblemFile {
  std::string name;
  std::string mode = "PROOF";
  std::vector<std::string> sorts;
  std::vector<SymbolDecl> symbols;
  OrderingSpec ordering;
  std::vector<VariableDecl> variables;
  std::vector<std::pair<rw::FoTerm, rw::FoTerm>> equations;
  std::pair<rw::FoTerm, rw::FoTerm> conclusion;

  std::vector<std::string> variable_names() const;
  rw::Signature signature() const;
  rw::Ordering make_ordering(const rw::Signature& sig) const;
  /// Axiom k is the k-th equation, canonically renamed.
  rw::Problem problem() const;

  friend bool operator==(const ProblemFile&, const ProblemFile&) = default;
};

std::string serialize(const ProblemFile& p);
/// Throws ParseError with 1-based line and column.
ProblemFile parse_problem(const std::string& text);

/// Prints a term of the file with its declared variable names.
std::string term_text(const ProblemFile& p, const rw::Signature& sig, const rw::FoTerm& t);

}  // namespace mella::bridge

#endif
