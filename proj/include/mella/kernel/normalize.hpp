#ifndef MELLA_KERNEL_NORMALIZE_HPP
#define MELLA_KERNEL_NORMALIZE_HPP

#include <cstddef>

#include "mella/kernel/context.hpp"
#include "mella/kernel/term.hpp"

namespace mella::kernel {

inline constexpr std::size_t kDefaultFuel = 1'000'000;

struct NormalizeOptions {
  std::size_t fuel = kDefaultFuel;
  /// When set, Named constants with a definiens in this context are unfolded.
  const NamedContext* unfold = nullptr;
};

/// Full normal form under beta, J-on-refl and annotation erasure.
/// Throws TypeError(UniverseError) when the step budget runs out.
Term normalize(const Term& t, const NormalizeOptions& options = {});

/// Syntactic equality of normal forms. When `globals` is given and the plain
/// comparison fails, compares again with definitions unfolded.
bool beta_equal(const Term& a, const Term& b, const NamedContext* globals = nullptr,
                std::size_t fuel = kDefaultFuel);

}  // namespace mella::kernel

#endif
