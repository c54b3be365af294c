#include "mella/rewriting/term.hpp"

#include <algorithm>
#include <cctype>

namespace mella::rewriting {

SortId Signature::add_sort(const std::string& name) {
  if (auto s = find_sort(name)) return *s;
  sorts_.push_back(name);
  return sorts_.size() - 1;
}

SymbolId Signature::add_symbol(const std::string& name, std::vector<SortId> args, SortId result) {
  if (by_name_.count(name)) throw std::invalid_argument("duplicate symbol '" + name + "'");
  if (sorts_.empty()) sorts_.push_back("ANY");
  symbols_.push_back({name, std::move(args), result});
  by_name_[name] = symbols_.size() - 1;
  return symbols_.size() - 1;
}

SymbolId Signature::add_symbol(const std::string& name, std::size_t arity) {
  return add_symbol(name, std::vector<SortId>(arity, 0), 0);
}

std::optional<SortId> Signature::find_sort(const std::string& name) const {
  auto it = std::find(sorts_.begin(), sorts_.end(), name);
  if (it == sorts_.end()) return std::nullopt;
  return static_cast<SortId>(it - sorts_.begin());
}

std::optional<SymbolId> Signature::find(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const Signature& a, const Signature& b) {
  if (a.sorts_ != b.sorts_ || a.symbols_.size() != b.symbols_.size()) return false;
  for (std::size_t i = 0; i < a.symbols_.size(); ++i) {
    const auto& x = a.symbols_[i];
    const auto& y = b.symbols_[i];
    if (x.name != y.name || x.args != y.args || x.result != y.result) return false;
  }
  return true;
}

FoTerm FoTerm::var(VarId v, SortId sort) {
  Node n;
  n.is_var = true;
  n.id = v;
  n.sort = sort;
  n.ground = false;
  return FoTerm(std::make_shared<const Node>(std::move(n)));
}

FoTerm FoTerm::fun(SymbolId f, std::vector<FoTerm> args) {
  Node n;
  n.id = f;
  for (const auto& a : args) {
    n.size += a.size();
    n.ground = n.ground && a.ground();
  }
  n.args = std::move(args);
  return FoTerm(std::make_shared<const Node>(std::move(n)));
}

bool operator==(const FoTerm& a, const FoTerm& b) {
  if (a.node_ == b.node_) return true;
  if (a.is_var() != b.is_var() || a.node_->id != b.node_->id) return false;
  if (a.is_var()) return true;
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!(a.arg(i) == b.arg(i))) return false;
  return true;
}

bool operator<(const FoTerm& a, const FoTerm& b) {
  if (a.node_ == b.node_) return false;
  if (a.is_var() != b.is_var()) return a.is_var();
  if (a.node_->id != b.node_->id) return a.node_->id < b.node_->id;
  if (a.is_var()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (a.arg(i) < b.arg(i)) return true;
    if (b.arg(i) < a.arg(i)) return false;
  }
  return false;
}

bool valid_position(const FoTerm& t, const Position& p) {
  const FoTerm* cur = &t;
  for (std::size_t i : p) {
    if (cur->is_var() || i == 0 || i > cur->arity()) return false;
    cur = &cur->arg(i - 1);
  }
  return true;
}

const FoTerm& subterm_at(const FoTerm& t, const Position& p) {
  const FoTerm* cur = &t;
  for (std::size_t i : p) {
    if (cur->is_var() || i == 0 || i > cur->arity())
      throw PositionError("position " + to_string(p) + " is not valid in the term");
    cur = &cur->arg(i - 1);
  }
  return *cur;
}

namespace {

FoTerm replace_from(const FoTerm& t, const Position& p, std::size_t k, const FoTerm& s) {
  if (k == p.size()) return s;
  std::size_t i = p[k];
  if (t.is_var() || i == 0 || i > t.arity())
    throw PositionError("position " + to_string(p) + " is not valid in the term");
  std::vector<FoTerm> args = t.args();
  args[i - 1] = replace_from(args[i - 1], p, k + 1, s);
  return FoTerm::fun(t.symbol(), std::move(args));
}

void fun_positions_rec(const FoTerm& t, Position& cur, std::vector<Position>& out) {
  if (t.is_var()) return;
  out.push_back(cur);
  for (std::size_t i = 0; i < t.arity(); ++i) {
    cur.push_back(i + 1);
    fun_positions_rec(t.arg(i), cur, out);
    cur.pop_back();
  }
}

}  // namespace

FoTerm replace_at(const FoTerm& t, const Position& p, const FoTerm& s) {
  return replace_from(t, p, 0, s);
}

std::vector<Position> fun_positions(const FoTerm& t) {
  std::vector<Position> out;
  Position cur;
  fun_positions_rec(t, cur, out);
  return out;
}

void collect_variables(const FoTerm& t, std::vector<VarId>& out) {
  if (t.ground()) return;
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.var_id()) == out.end()) out.push_back(t.var_id());
    return;
  }
  for (const auto& a : t.args()) collect_variables(a, out);
}

std::vector<VarId> variables(const FoTerm& t) {
  std::vector<VarId> out;
  collect_variables(t, out);
  return out;
}

bool occurs(VarId v, const FoTerm& t) {
  if (t.ground()) return false;
  if (t.is_var()) return t.var_id() == v;
  return std::any_of(t.args().begin(), t.args().end(), [v](const FoTerm& a) { return occurs(v, a); });
}

std::size_t max_var_plus_one(const FoTerm& t) {
  if (t.ground()) return 0;
  if (t.is_var()) return t.var_id() + 1;
  std::size_t m = 0;
  for (const auto& a : t.args()) m = std::max(m, max_var_plus_one(a));
  return m;
}

std::string var_name(VarId v) { return "x" + std::to_string(v + 1); }

namespace {

void render(const FoTerm& t, const Signature& sig, std::string& out) {
  if (t.is_var()) {
    out += var_name(t.var_id());
    return;
  }
  out += sig.symbol(t.symbol()).name;
  if (t.arity() == 0) return;
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ',';
    render(t.arg(i), sig, out);
  }
  out += ')';
}

}  // namespace

std::string to_string(const FoTerm& t, const Signature& sig) {
  std::string out;
  render(t, sig, out);
  return out;
}

std::string to_string(const Position& p) {
  if (p.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(p[i]);
  }
  return out;
}

namespace {

class TermParser {
 public:
  TermParser(const std::string& text, const Signature& sig,
             const std::function<bool(const std::string&)>& is_var, std::map<std::string, VarId>& vars)
      : s_(text), sig_(sig), is_var_(is_var), vars_(vars) {}

  FoTerm parse() {
    FoTerm t = term();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return t;
  }

 private:
  FoTerm term() {
    skip();
    std::string name = ident();
    skip();
    std::vector<FoTerm> args;
    bool parens = i_ < s_.size() && s_[i_] == '(';
    if (parens) {
      ++i_;
      for (;;) {
        args.push_back(term());
        skip();
        if (i_ < s_.size() && s_[i_] == ',') {
          ++i_;
          continue;
        }
        if (i_ < s_.size() && s_[i_] == ')') {
          ++i_;
          break;
        }
        fail("expected ',' or ')'");
      }
    }
    if (!parens && is_var_(name)) {
      auto it = vars_.find(name);
      if (it == vars_.end()) it = vars_.emplace(name, vars_.size()).first;
      return FoTerm::var(it->second);
    }
    auto f = sig_.find(name);
    if (!f) fail("unknown symbol '" + name + "'");
    if (sig_.symbol(*f).arity() != args.size())
      fail("symbol '" + name + "' expects " + std::to_string(sig_.symbol(*f).arity()) +
           " arguments, got " + std::to_string(args.size()));
    return FoTerm::fun(*f, std::move(args));
  }

  std::string ident() {
    std::size_t start = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' ||
                              s_[i_] == '\'' || s_[i_] == '$'))
      ++i_;
    if (start == i_) fail("expected identifier");
    return s_.substr(start, i_ - start);
  }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument(msg + " at column " + std::to_string(i_ + 1) + " in '" + s_ + "'");
  }

  const std::string& s_;
  const Signature& sig_;
  const std::function<bool(const std::string&)>& is_var_;
  std::map<std::string, VarId>& vars_;
  std::size_t i_ = 0;
};

}  // namespace

FoTerm parse_term(const std::string& text, const Signature& sig,
                  const std::function<bool(const std::string&)>& is_var,
                  std::map<std::string, VarId>& vars) {
  return TermParser(text, sig, is_var, vars).parse();
}

Position parse_position(const std::string& text) {
  if (text == "e") return {};
  Position p;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = i;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j == i) throw PositionError("malformed position '" + text + "'");
    std::size_t v = std::stoul(text.substr(i, j - i));
    if (v == 0) throw PositionError("positions are 1-based: '" + text + "'");
    p.push_back(v);
    if (j < text.size() && text[j] != '.') throw PositionError("malformed position '" + text + "'");
    i = j + 1;
    if (j + 1 == text.size() && text[j] == '.') throw PositionError("malformed position '" + text + "'");
  }
  if (p.empty()) throw PositionError("malformed position '" + text + "'");
  return p;
}

}  // namespace mella::rewriting
