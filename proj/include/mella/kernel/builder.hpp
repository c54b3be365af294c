#ifndef MELLA_KERNEL_BUILDER_HPP
#define MELLA_KERNEL_BUILDER_HPP

#include <string>
#include <utility>

#include "mella/kernel/term.hpp"

namespace mella::kernel {

/// Builds de Bruijn terms from named binders written as C++ lambdas.
///
///   Builder b;
///   Term id = b.pi("A", Term::star(), [&](auto A) {
///     return b.pi("x", b(A), [&](auto) { return b(A); });
///   });
///
/// A Var remembers the binder depth it was introduced at; b(v) converts it to
/// the index valid at the current depth.
class Builder {
 public:
  struct Var {
    std::size_t level;
    std::string name;
  };

  Term operator()(const Var& v) const { return Term::unnamed(depth_ - v.level - 1, v.name); }

  template <class Body>
  Term pi(std::string name, const Term& domain, Body&& body) {
    Var v{depth_, name};
    ++depth_;
    Term cod = body(v);
    --depth_;
    return Term::pi(Tag(std::move(name)), domain, std::move(cod));
  }

  template <class Body>
  Term lam(std::string name, Body&& body) {
    Var v{depth_, name};
    ++depth_;
    Term b = body(v);
    --depth_;
    return Term::lam(Tag(std::move(name)), std::move(b));
  }

  /// Non-dependent arrow; the codomain is built one binder deeper.
  template <class Cod>
  Term arrow(const Term& domain, Cod&& codomain) {
    return pi("_", domain, [&](const Var&) { return codomain(); });
  }

  std::size_t depth() const { return depth_; }

 private:
  std::size_t depth_ = 0;
};

}  // namespace mella::kernel

#endif
