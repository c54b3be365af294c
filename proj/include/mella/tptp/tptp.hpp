#ifndef MELLA_TPTP_TPTP_HPP
#define MELLA_TPTP_TPTP_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "mella/bridge/problem_file.hpp"

namespace mella::tptp {

/// A rejected clause or directive. `unit` is the clause name when known,
/// `file` the included file it came from.
struct TptpError : std::runtime_error {
  TptpError(std::string unit, std::size_t line, std::string message, std::string file = {});
  std::string unit;
  std::size_t line;
  std::string message;
  std::string file;
};

struct TptpTerm {
  std::string name;
  std::vector<TptpTerm> args;
  bool variable = false;  // uppercase initial
  friend bool operator==(const TptpTerm&, const TptpTerm&) = default;
};

enum class Role { Axiom, Hypothesis, NegatedConjecture };

struct TptpUnit {
  std::string name;
  Role role = Role::Axiom;
  TptpTerm lhs;
  TptpTerm rhs;
  bool positive = true;  // `=` rather than `!=`
  std::size_t line = 0;
};

/// Parses `cnf(name, role, s = t).` and `cnf(name, role, s != t).` clauses
/// with `%` comments. `include('file').` is resolved against `root`.
std::vector<TptpUnit> parse_tptp(const std::string& text, const std::filesystem::path& root = {});
std::vector<TptpUnit> parse_tptp_file(const std::filesystem::path& file, const std::filesystem::path& root);

/// A problem both as prover input and as a kernel theorem script.
struct Conversion {
  bridge::ProblemFile file;
  std::string theorem;                // theorem name in the script
  std::string statement;              // the theorem's type, surface syntax
  std::vector<std::string> binders;   // carrier, symbols, axioms: what `intro` names
  std::vector<std::string> signature; // precedence, greatest first
  std::vector<std::string> axioms;    // ax1, ax2, ...
  std::string script;                 // theorem, intro, waldmeister, qed

  /// The script without the waldmeister and qed lines.
  std::string opening() const;
};

/// Symbols are ordered unary first, then by decreasing arity, then
/// constants of the axioms, then constants of the goal only. The single
/// negated conjecture `s != t` becomes the conclusion `s = t`. Throws
/// TptpError on arity clashes or a missing or repeated conjecture.
Conversion to_problem(const std::vector<TptpUnit>& units, const std::string& name, double timeout = 5);

}  // namespace mella::tptp

#endif
