#ifndef MELLA_SCRIPT_SYNTAX_HPP
#define MELLA_SCRIPT_SYNTAX_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "mella/kernel/context.hpp"
#include "mella/kernel/term.hpp"

namespace mella::script {

namespace k = mella::kernel;

/// Malformed input; line and column are 1-based.
struct SyntaxError : std::runtime_error {
  SyntaxError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line;
  std::size_t column;
};

/// Named-variable term as written by the user.
struct SurfaceTerm {
  enum class Kind { Var, Sort, Pi, Lam, App, Ann, Hole, Refl };
  Kind kind = Kind::Var;
  std::string name;  // Var name, Pi/Lam binder ("_" when anonymous)
  k::Sort sort;
  std::vector<SurfaceTerm> kids;  // Pi(dom, cod), Lam(body), App(fn, arg), Ann(term, type)
  k::SourceLoc loc;
};

/// Inner syntax:
///
///   t ::= \x y -> t | (x y : A) (z : B) -> t | t -> t | t t | t :: t
///       | x | * | □n | ? | refl | Id A a b | J a b c d e f | (t)
///
/// `base` offsets reported positions (the quote's location in a script).
SurfaceTerm parse_inner(const std::string& text, k::SourceLoc base = {1, 1});

/// Resolves names innermost-first against `scope`, then against Gamma.
/// `Id` and `J` must be fully applied. Throws SyntaxError for unbound names.
/// Holes become metavariables numbered from *meta_counter (or 0), which is
/// advanced past them.
k::Term elaborate(const SurfaceTerm& t, const std::vector<std::string>& scope,
                  const k::NamedContext& gamma, std::size_t* meta_counter = nullptr);

/// parse_inner followed by elaborate.
k::Term read_term(const std::string& text, const std::vector<std::string>& scope,
                  const k::NamedContext& gamma, k::SourceLoc base = {1, 1},
                  std::size_t* meta_counter = nullptr);

}  // namespace mella::script

#endif
