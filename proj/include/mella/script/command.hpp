#ifndef MELLA_SCRIPT_COMMAND_HPP
#define MELLA_SCRIPT_COMMAND_HPP

#include <optional>
#include <string>
#include <vector>

#include "mella/rewriting/equation.hpp"
#include "mella/script/syntax.hpp"

namespace mella::script {

/// "2,2RL": a 1-based path and a direction; "e" is the root.
struct PositionSpec {
  rewriting::Position path;
  rewriting::Direction direction = rewriting::Direction::LR;
  friend bool operator==(const PositionSpec&, const PositionSpec&) = default;
};

/// Throws std::invalid_argument.
PositionSpec parse_position_spec(const std::string& text);
std::string to_string(const PositionSpec& p);

/// A quoted inner term with the location of its first character.
struct Quoted {
  std::string text;
  k::SourceLoc loc;
};

struct Command {
  enum class Kind {
    Fun, Postulate, Theorem, Intro, EqStep, Refl, Exact, Qed, Abort, Waldmeister,
    Normalize, Describe, Type, Goals, Print, Undo, Commands, Help, Agda
  };
  Kind kind = Kind::Help;
  k::SourceLoc loc;
  std::string source;  // the command text, without the final period

  std::string name;               // fun, postulate, theorem; normalize/describe/print target; help topic
  std::optional<Quoted> type;     // fun, postulate, theorem
  std::optional<Quoted> term;     // fun body, eqStep right-hand side, exact, type
  std::optional<Quoted> by;       // eqStep justification
  std::optional<PositionSpec> at; // eqStep
  std::vector<std::string> names; // intro binders
  // waldmeister
  std::vector<std::string> signature;
  std::vector<std::string> axioms;
  bool kbo = false;
  double timeout = 5;
};

/// Splits a script at top-level periods and parses each command. Throws
/// SyntaxError with the position of the problem.
std::vector<Command> parse_outer(const std::string& text);

/// One line per command: name and usage.
struct CommandInfo {
  std::string name;
  std::string usage;
  std::string doc;
};
const std::vector<CommandInfo>& command_registry();

}  // namespace mella::script

#endif
