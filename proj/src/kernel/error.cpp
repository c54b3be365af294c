#include "mella/kernel/error.hpp"

namespace mella::kernel {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NoRuleApplies:
      return "no-rule-applies";
    case ErrorKind::Mismatch:
      return "mismatch";
    case ErrorKind::UnboundName:
      return "unbound-name";
    case ErrorKind::InvalidContext:
      return "invalid-context";
    case ErrorKind::UniverseError:
      return "universe-error";
  }
  return "unknown";
}

TypeError::TypeError(ErrorKind kind, std::string message, std::vector<Term> terms,
                     std::vector<std::string> context)
    : std::runtime_error(std::move(message)),
      kind_(kind),
      terms_(std::move(terms)),
      context_(std::move(context)) {}

}  // namespace mella::kernel
