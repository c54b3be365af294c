#ifndef MELLA_KERNEL_ERROR_HPP
#define MELLA_KERNEL_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mella/kernel/term.hpp"

namespace mella::kernel {

enum class ErrorKind { NoRuleApplies, Mismatch, UnboundName, InvalidContext, UniverseError };

std::string_view to_string(ErrorKind kind);

/// A failed judgement. The message is rendered with binder names, the
/// terms are kept for programmatic inspection.
class TypeError : public std::runtime_error {
 public:
  TypeError(ErrorKind kind, std::string message, std::vector<Term> terms = {},
            std::vector<std::string> context = {});

  ErrorKind kind() const { return kind_; }
  const std::vector<Term>& terms() const { return terms_; }
  /// Names of the unnamed context at the failure point, innermost first.
  const std::vector<std::string>& context() const { return context_; }

 private:
  ErrorKind kind_;
  std::vector<Term> terms_;
  std::vector<std::string> context_;
};

}  // namespace mella::kernel

#endif
