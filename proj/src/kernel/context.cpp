#include "mella/kernel/context.hpp"

#include "mella/kernel/error.hpp"

namespace mella::kernel {

bool NamedContext::contains(const std::string& name) const { return find(name) != nullptr; }

const Binding* NamedContext::find(const std::string& name) const {
  if (!impl_) return nullptr;
  auto it = impl_->index.find(name);
  if (it == impl_->index.end()) return nullptr;
  return &impl_->entries[it->second].binding;
}

void NamedContext::insert(std::string name, Binding binding) {
  if (contains(name))
    throw TypeError(ErrorKind::InvalidContext, "name '" + name + "' is already defined");
  auto next = impl_ ? std::make_shared<Impl>(*impl_) : std::make_shared<Impl>();
  next->index.emplace(name, next->entries.size());
  next->entries.push_back({std::move(name), std::move(binding)});
  impl_ = std::move(next);
}

const std::vector<NamedContext::Entry>& NamedContext::entries() const {
  static const std::vector<Entry> none;
  return impl_ ? impl_->entries : none;
}

bool operator==(const NamedContext& a, const NamedContext& b) {
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  if (ea.size() != eb.size()) return false;
  for (std::size_t i = 0; i < ea.size(); ++i) {
    if (ea[i].name != eb[i].name) return false;
    if (ea[i].binding.type != eb[i].binding.type) return false;
    if (ea[i].binding.definiens.has_value() != eb[i].binding.definiens.has_value()) return false;
    if (ea[i].binding.definiens && *ea[i].binding.definiens != *eb[i].binding.definiens)
      return false;
  }
  return true;
}

std::vector<std::string> UnnamedContext::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) out.push_back(it->tag.name);
  return out;
}

std::optional<std::size_t> UnnamedContext::find(const std::string& name) const {
  for (std::size_t n = 0; n < entries_.size(); ++n)
    if (at(n).tag.name == name) return n;
  return std::nullopt;
}

bool operator==(const UnnamedContext& a, const UnnamedContext& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.at(i).type != b.at(i).type) return false;
  return true;
}

Term lookup_unnamed(const UnnamedContext& delta, std::size_t n) {
  if (n >= delta.size())
    throw TypeError(ErrorKind::UnboundName,
                    "de Bruijn index " + std::to_string(n) + " is out of range (context has " +
                        std::to_string(delta.size()) + " binders)",
                    {Term::unnamed(n)});
  return shift(static_cast<std::int64_t>(n + 1), 0, delta.at(n).type);
}

}  // namespace mella::kernel
