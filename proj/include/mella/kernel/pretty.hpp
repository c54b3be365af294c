#ifndef MELLA_KERNEL_PRETTY_HPP
#define MELLA_KERNEL_PRETTY_HPP

#include <string>
#include <vector>

#include "mella/kernel/context.hpp"
#include "mella/kernel/term.hpp"

namespace mella::kernel {

/// Renders a term in the inner surface syntax.
///
/// `scope` names the free de Bruijn indices, innermost first. Binder names come
/// from tags; a binder whose name would capture an outer variable or a global
/// in `globals` gets primes appended, so the output re-elaborates to the same
/// term.
std::string pretty(const Term& t, const std::vector<std::string>& scope = {},
                   const NamedContext* globals = nullptr);

}  // namespace mella::kernel

#endif
