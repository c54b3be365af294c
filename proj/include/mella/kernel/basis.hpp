#ifndef MELLA_KERNEL_BASIS_HPP
#define MELLA_KERNEL_BASIS_HPP

#include <string>
#include <vector>

#include "mella/kernel/context.hpp"
#include "mella/kernel/term.hpp"

namespace mella::kernel {

struct Definition {
  std::string name;
  Term type;
  Term body;
};

/// elimJ, sym, trans, cong and subst, in that order. Closed terms built from
/// J and refl.
const std::vector<Definition>& equational_basis();

/// Type checks every basis definition and inserts it into `gamma`.
void install_basis(NamedContext& gamma);

}  // namespace mella::kernel

#endif
