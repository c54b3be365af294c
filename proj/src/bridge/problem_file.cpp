#include "mella/bridge/problem_file.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace mella::bridge {

using namespace mella::rewriting;

ParseError::ParseError(std::size_t l, std::size_t c, const std::string& message)
    : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + message),
      line(l),
      column(c) {}

std::vector<std::string> ProblemFile::variable_names() const {
  std::vector<std::string> out;
  for (const auto& d : variables)
    for (const auto& n : d.names) out.push_back(n);
  return out;
}

Signature ProblemFile::signature() const {
  Signature sig;
  for (const auto& s : sorts) sig.add_sort(s);
  auto sort_id = [&](const std::string& s) {
    auto id = sig.find_sort(s);
    if (!id) throw std::invalid_argument("undeclared sort '" + s + "'");
    return *id;
  };
  for (const auto& d : symbols) {
    std::vector<SortId> args;
    for (const auto& a : d.args) args.push_back(sort_id(a));
    sig.add_symbol(d.name, std::move(args), sort_id(d.result));
  }
  return sig;
}

Ordering ProblemFile::make_ordering(const Signature& sig) const {
  std::vector<SymbolId> prec;
  for (const auto& n : ordering.precedence) {
    auto f = sig.find(n);
    if (!f) throw std::invalid_argument("precedence names unknown symbol '" + n + "'");
    prec.push_back(*f);
  }
  if (ordering.kind == Ordering::Kind::LPO) return Ordering::lpo(sig, prec);
  std::map<SymbolId, unsigned> weights;
  for (const auto& [n, w] : ordering.weights) {
    auto f = sig.find(n);
    if (!f) throw std::invalid_argument("weight for unknown symbol '" + n + "'");
    weights[*f] = w;
  }
  return Ordering::kbo(sig, prec, weights);
}

Problem ProblemFile::problem() const {
  Signature sig = signature();
  Ordering ord = make_ordering(sig);
  std::vector<Equation> axioms;
  for (std::size_t k = 0; k < equations.size(); ++k)
    axioms.push_back(canonical({Label::axiom(k + 1), equations[k].first, equations[k].second}));
  return Problem{sig, ord, axioms, {Label::theorem(), conclusion.first, conclusion.second}};
}

namespace {

void print_term(std::ostringstream& out, const Signature& sig, const std::vector<std::string>& vars,
                const FoTerm& t) {
  if (t.is_var()) {
    out << (t.var_id() < vars.size() ? vars[t.var_id()] : var_name(t.var_id()));
    return;
  }
  out << sig.symbol(t.symbol()).name;
  if (t.arity() == 0) return;
  out << '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out << ',';
    print_term(out, sig, vars, t.arg(i));
  }
  out << ')';
}

}  // namespace

std::string term_text(const ProblemFile& p, const Signature& sig, const FoTerm& t) {
  std::ostringstream out;
  print_term(out, sig, p.variable_names(), t);
  return out.str();
}

std::string serialize(const ProblemFile& p) {
  Signature sig = p.signature();
  std::ostringstream out;
  out << "NAME " << p.name << "\n";
  out << "MODE " << p.mode << "\n";
  out << "SORTS\n";
  for (const auto& s : p.sorts) out << "  " << s << "\n";
  out << "SIGNATURE\n";
  for (const auto& d : p.symbols) {
    out << "  " << d.name << ":";
    for (const auto& a : d.args) out << ' ' << a;
    out << " -> " << d.result << "\n";
  }
  out << "ORDERING\n";
  if (p.ordering.kind == Ordering::Kind::LPO) {
    out << "LPO\n";
  } else {
    out << "KBO\n";
    for (const auto& [n, w] : p.ordering.weights) out << "  w(" << n << ") = " << w << "\n";
  }
  out << " ";
  for (std::size_t i = 0; i < p.ordering.precedence.size(); ++i)
    out << (i ? " > " : " ") << p.ordering.precedence[i];
  out << "\n";
  out << "VARIABLES\n";
  for (const auto& d : p.variables) {
    out << "  ";
    for (std::size_t i = 0; i < d.names.size(); ++i) out << (i ? "," : "") << d.names[i];
    out << " : " << d.sort << "\n";
  }
  auto vars = p.variable_names();
  auto equation = [&](const std::pair<FoTerm, FoTerm>& e) {
    out << "  ";
    print_term(out, sig, vars, e.first);
    out << " = ";
    print_term(out, sig, vars, e.second);
    out << "\n";
  };
  out << "EQUATIONS\n";
  for (const auto& e : p.equations) equation(e);
  out << "CONCLUSION\n";
  equation(p.conclusion);
  return out.str();
}

namespace {

const std::vector<std::string> kBlocks = {"NAME",      "MODE",      "SORTS",     "SIGNATURE",
                                          "ORDERING",  "VARIABLES", "EQUATIONS", "CONCLUSION"};

struct Line {
  std::size_t number;
  std::size_t indent;
  std::string text;  // trimmed
};

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '$';
  });
}

class ProblemParser {
 public:
  explicit ProblemParser(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t n = 0;
    while (std::getline(in, raw)) {
      ++n;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      std::string t = trim(raw);
      if (t.empty() || t[0] == '%') continue;
      lines_.push_back({n, raw.find_first_not_of(" \t"), t});
    }
  }

  ProblemFile parse() {
    std::size_t next_block = 0;
    std::map<std::string, std::vector<Line>> blocks;
    std::string current;
    for (const auto& l : lines_) {
      std::string head = words(l.text)[0];
      bool keyword = std::find(kBlocks.begin(), kBlocks.end(), head) != kBlocks.end();
      if (keyword && l.indent == 0) {
        auto pos = std::find(kBlocks.begin(), kBlocks.end(), head) - kBlocks.begin();
        if (static_cast<std::size_t>(pos) < next_block)
          fail(l, 1, "block " + head + " is out of order or repeated");
        for (std::size_t k = next_block; k < static_cast<std::size_t>(pos); ++k)
          fail(l, 1, "missing block " + kBlocks[k] + " before " + head);
        next_block = pos + 1;
        current = head;
        blocks[current].push_back(l);
        continue;
      }
      bool ordering_kind = current == "ORDERING" && (l.text == "LPO" || l.text == "KBO");
      if (l.indent == 0 && !ordering_kind) {
        bool upper = std::all_of(head.begin(), head.end(), [](char c) {
          return std::isupper(static_cast<unsigned char>(c));
        });
        if (upper) fail(l, 1, "unknown block keyword '" + head + "'");
      }
      if (current.empty()) fail(l, l.indent + 1, "expected NAME");
      blocks[current].push_back(l);
    }
    if (next_block != kBlocks.size()) {
      std::size_t n = lines_.empty() ? 1 : lines_.back().number;
      throw ParseError(n, 1, "missing block " + kBlocks[next_block]);
    }

    ProblemFile p;
    p.name = header_value(blocks["NAME"], "NAME");
    p.mode = header_value(blocks["MODE"], "MODE");
    if (p.mode != "PROOF") fail(blocks["MODE"][0], 6, "only MODE PROOF is supported");
    parse_sorts(p, blocks["SORTS"]);
    parse_signature(p, blocks["SIGNATURE"]);
    parse_ordering(p, blocks["ORDERING"]);
    parse_variables(p, blocks["VARIABLES"]);
    Signature sig = p.signature();
    auto eqs = blocks["EQUATIONS"];
    if (eqs.size() < 2) fail(eqs[0], 1, "EQUATIONS block is empty");
    for (std::size_t i = 1; i < eqs.size(); ++i) p.equations.push_back(equation(p, sig, eqs[i]));
    auto concl = blocks["CONCLUSION"];
    if (concl.size() != 2) fail(concl[0], 1, "CONCLUSION must contain exactly one equation");
    p.conclusion = equation(p, sig, concl[1]);
    return p;
  }

 private:
  [[noreturn]] static void fail(const Line& l, std::size_t col, const std::string& msg) {
    throw ParseError(l.number, col, msg);
  }

  static std::string header_value(const std::vector<Line>& block, const std::string& kw) {
    auto w = words(block[0].text);
    if (w.size() != 2 || block.size() != 1) fail(block[0], kw.size() + 2, kw + " expects one value");
    return w[1];
  }

  static void parse_sorts(ProblemFile& p, const std::vector<Line>& block) {
    if (block.size() < 2) fail(block[0], 1, "SORTS block is empty");
    for (std::size_t i = 1; i < block.size(); ++i) {
      for (const auto& w : words(block[i].text)) {
        if (!is_identifier(w)) fail(block[i], block[i].indent + 1, "malformed sort name '" + w + "'");
        p.sorts.push_back(w);
      }
    }
  }

  static void parse_signature(ProblemFile& p, const std::vector<Line>& block) {
    std::set<std::string> sorts(p.sorts.begin(), p.sorts.end());
    std::set<std::string> names;
    for (std::size_t i = 1; i < block.size(); ++i) {
      const Line& l = block[i];
      auto colon = l.text.find(':');
      auto arrow = l.text.find("->");
      if (colon == std::string::npos || arrow == std::string::npos || arrow < colon)
        fail(l, l.indent + 1, "expected 'name: sorts -> sort'");
      SymbolDecl d;
      d.name = trim(l.text.substr(0, colon));
      if (!is_identifier(d.name)) fail(l, l.indent + 1, "malformed symbol name '" + d.name + "'");
      if (!names.insert(d.name).second) fail(l, l.indent + 1, "duplicate symbol '" + d.name + "'");
      d.args = words(l.text.substr(colon + 1, arrow - colon - 1));
      auto res = words(l.text.substr(arrow + 2));
      if (res.size() != 1) fail(l, l.indent + arrow + 3, "expected one result sort");
      d.result = res[0];
      for (const auto& s : d.args)
        if (!sorts.count(s)) fail(l, l.indent + colon + 2, "undeclared sort '" + s + "'");
      if (!sorts.count(d.result)) fail(l, l.indent + arrow + 3, "undeclared sort '" + d.result + "'");
      p.symbols.push_back(std::move(d));
    }
  }

  static void parse_ordering(ProblemFile& p, const std::vector<Line>& block) {
    if (block.size() < 2) fail(block[0], 1, "ORDERING block is empty");
    const Line& kind = block[1];
    if (kind.text == "LPO")
      p.ordering.kind = Ordering::Kind::LPO;
    else if (kind.text == "KBO")
      p.ordering.kind = Ordering::Kind::KBO;
    else
      fail(kind, kind.indent + 1, "expected LPO or KBO");
    std::set<std::string> names;
    for (const auto& d : p.symbols) names.insert(d.name);
    std::size_t i = 2;
    for (; i < block.size() && block[i].text.rfind("w(", 0) == 0; ++i) {
      const Line& l = block[i];
      if (p.ordering.kind != Ordering::Kind::KBO) fail(l, l.indent + 1, "weights are only allowed for KBO");
      auto close = l.text.find(')');
      auto eq = l.text.find('=');
      if (close == std::string::npos || eq == std::string::npos || eq < close)
        fail(l, l.indent + 1, "expected 'w(symbol) = n'");
      std::string name = trim(l.text.substr(2, close - 2));
      if (!names.count(name)) fail(l, l.indent + 3, "weight for unknown symbol '" + name + "'");
      std::string num = trim(l.text.substr(eq + 1));
      if (num.empty() || !std::all_of(num.begin(), num.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        fail(l, l.indent + eq + 2, "malformed weight '" + num + "'");
      p.ordering.weights.push_back({name, static_cast<unsigned>(std::stoul(num))});
    }
    if (i + 1 != block.size()) fail(block.back(), 1, "expected one precedence line 'f > g > ...'");
    const Line& l = block[i];
    std::string text = l.text;
    std::size_t start = 0;
    for (;;) {
      auto gt = text.find('>', start);
      std::string name = trim(text.substr(start, gt == std::string::npos ? std::string::npos : gt - start));
      if (!names.count(name)) fail(l, l.indent + start + 1, "precedence names unknown symbol '" + name + "'");
      if (std::find(p.ordering.precedence.begin(), p.ordering.precedence.end(), name) !=
          p.ordering.precedence.end())
        fail(l, l.indent + start + 1, "symbol '" + name + "' repeated in precedence");
      p.ordering.precedence.push_back(name);
      if (gt == std::string::npos) break;
      start = gt + 1;
    }
    if (p.ordering.precedence.size() != p.symbols.size())
      fail(l, l.indent + 1, "precedence must list every signature symbol");
  }

  static void parse_variables(ProblemFile& p, const std::vector<Line>& block) {
    std::set<std::string> sorts(p.sorts.begin(), p.sorts.end());
    std::set<std::string> taken;
    for (const auto& d : p.symbols) taken.insert(d.name);
    for (std::size_t i = 1; i < block.size(); ++i) {
      const Line& l = block[i];
      auto colon = l.text.find(':');
      if (colon == std::string::npos) fail(l, l.indent + 1, "expected 'x,y : SORT'");
      VariableDecl d;
      std::string names = l.text.substr(0, colon);
      std::size_t start = 0;
      for (;;) {
        auto comma = names.find(',', start);
        std::string n = trim(names.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (!is_identifier(n)) fail(l, l.indent + start + 1, "malformed variable name '" + n + "'");
        if (!taken.insert(n).second) fail(l, l.indent + start + 1, "name '" + n + "' declared twice");
        d.names.push_back(n);
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      d.sort = trim(l.text.substr(colon + 1));
      if (!sorts.count(d.sort)) fail(l, l.indent + colon + 2, "undeclared sort '" + d.sort + "'");
      p.variables.push_back(std::move(d));
    }
  }

  static std::pair<FoTerm, FoTerm> equation(const ProblemFile& p, const Signature& sig, const Line& l) {
    auto eq = l.text.find('=');
    if (eq == std::string::npos || l.text.find('=', eq + 1) != std::string::npos)
      fail(l, l.indent + 1, "expected 'lhs = rhs'");
    auto names = p.variable_names();
    std::map<std::string, VarId> vars;
    for (std::size_t i = 0; i < names.size(); ++i) vars[names[i]] = i;
    std::vector<SortId> var_sorts;
    for (const auto& d : p.variables)
      for (std::size_t k = 0; k < d.names.size(); ++k) var_sorts.push_back(*sig.find_sort(d.sort));
    auto is_var = [&](const std::string& s) { return vars.count(s) > 0; };
    auto side = [&](const std::string& text, std::size_t col) {
      try {
        auto before = vars.size();
        FoTerm t = parse_term(text, sig, is_var, vars);
        if (vars.size() != before) fail(l, col, "undeclared variable");
        return t;
      } catch (const std::invalid_argument& e) {
        fail(l, col, e.what());
      }
    };
    std::string lt = l.text.substr(0, eq), rt = l.text.substr(eq + 1);
    FoTerm a = side(lt, l.indent + 1), b = side(rt, l.indent + eq + 2);
    std::function<SortId(const FoTerm&)> sort_of = [&](const FoTerm& t) -> SortId {
      if (t.is_var()) return var_sorts[t.var_id()];
      const auto& sym = sig.symbol(t.symbol());
      for (std::size_t i = 0; i < t.arity(); ++i)
        if (sort_of(t.arg(i)) != sym.args[i])
          fail(l, l.indent + 1, "argument " + std::to_string(i + 1) + " of '" + sym.name + "' has the wrong sort");
      return sym.result;
    };
    if (sort_of(a) != sort_of(b)) fail(l, l.indent + eq + 1, "the two sides have different sorts");
    return {a, b};
  }

  std::vector<Line> lines_;
};

}  // namespace

ProblemFile parse_problem(const std::string& text) { return ProblemParser(text).parse(); }

}  // namespace mella::bridge
