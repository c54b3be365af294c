#include "mella/bridge/trace_format.hpp"

#include <cctype>
#include <optional>
#include <regex>
#include <sstream>

namespace mella::bridge {

using namespace mella::rewriting;

namespace {

struct RawTerm {
  std::string name;
  std::vector<RawTerm> args;
};

struct Cursor {
  const std::string& s;
  std::size_t line;
  std::size_t i = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line, i + 1, msg); }
  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  bool eat_word(const std::string& w) {
    skip();
    if (s.compare(i, w.size(), w) == 0) {
      i += w.size();
      return true;
    }
    return false;
  }
  std::string ident() {
    skip();
    std::size_t b = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' ||
                            s[i] == '\'' || s[i] == '$'))
      ++i;
    if (b == i) fail("expected identifier");
    return s.substr(b, i - b);
  }
  std::string token() {
    skip();
    std::size_t b = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    return s.substr(b, i - b);
  }
  bool done() {
    skip();
    return i == s.size();
  }

  RawTerm term() {
    RawTerm t;
    t.name = ident();
    if (eat('(')) {
      do t.args.push_back(term());
      while (eat(','));
      expect(')');
    }
    return t;
  }
};

const std::regex kVar("x([1-9][0-9]*)");
const std::regex kRenamed("s([0-9]+)");
const std::regex kSkolem("sk[0-9]*");

struct RawStep {
  std::size_t line;
  Label label;
  Direction dir;
  Position pos;
  std::vector<std::pair<VarId, RawTerm>> subst;
};

struct RawEntry {
  std::size_t line;
  Label label;
  bool elided = false;
  RawTerm lhs, rhs;
  std::vector<std::pair<std::size_t, RawTerm>> terms;  // (line, term)
  std::vector<RawStep> steps;
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<RawEntry> header(const std::string& text, std::size_t line) {
  static const std::regex re("(Lemma|Theorem) ([1-9][0-9]*): (.*)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) return std::nullopt;
  RawEntry e;
  e.line = line;
  std::size_t n = std::stoul(m[2]);
  e.label = m[1] == "Lemma" ? Label::lemma(n) : Label::theorem(n);
  std::string body = trim(m[3]);
  if (body == "...") {
    if (e.label.kind == Label::Kind::Theorem) throw ParseError(line, 1, "the theorem cannot be elided");
    e.elided = true;
    return e;
  }
  auto eq = body.find('=');
  if (eq == std::string::npos) throw ParseError(line, 1, "expected 'lhs = rhs' after the header");
  std::string l = body.substr(0, eq), r = body.substr(eq + 1);
  Cursor cl{l, line};
  e.lhs = cl.term();
  if (!cl.done()) cl.fail("unexpected text after term");
  Cursor cr{r, line};
  e.rhs = cr.term();
  if (!cr.done()) cr.fail("unexpected text after term");
  return e;
}

RawStep step_line(const std::string& text, std::size_t line) {
  Cursor c{text, line};
  c.expect('=');
  if (!c.eat_word("by")) c.fail("expected 'by'");
  RawStep st;
  st.line = line;
  std::string kind = c.ident();
  std::string num = c.token();
  if ((kind != "Axiom" && kind != "Lemma") || num.empty() ||
      !std::all_of(num.begin(), num.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }) ||
      num == "0")
    c.fail("expected 'Axiom N' or 'Lemma N'");
  std::size_t n = std::stoul(num);
  st.label = kind == "Axiom" ? Label::axiom(n) : Label::lemma(n);
  std::string dir = c.token();
  if (dir == "LR")
    st.dir = Direction::LR;
  else if (dir == "RL")
    st.dir = Direction::RL;
  else
    c.fail("expected LR or RL");
  if (c.done()) c.fail("step lacks 'at <position> with {...}'; detailed output is required");
  if (!c.eat_word("at")) c.fail("expected 'at'");
  std::string pos = c.token();
  try {
    st.pos = parse_position(pos);
  } catch (const PositionError& e) {
    c.fail(e.what());
  }
  if (!c.eat_word("with")) c.fail("expected 'with'");
  c.expect('{');
  if (!c.eat('}')) {
    do {
      std::string v = c.ident();
      std::smatch m;
      if (!std::regex_match(v, m, kVar)) c.fail("substitution keys must be x1, x2, ...: '" + v + "'");
      if (!c.eat_word("<-")) c.fail("expected '<-'");
      VarId id = std::stoul(m[1]) - 1;
      for (const auto& [k, _] : st.subst)
        if (k == id) c.fail("variable '" + v + "' bound twice");
      st.subst.push_back({id, c.term()});
    } while (c.eat(','));
    c.expect('}');
  }
  if (!c.done()) c.fail("unexpected text after substitution");
  return st;
}

class Resolver {
 public:
  Resolver(const ProblemFile& p, ParsedTrace& out) : problem_(p), out_(out) {}

  void anchor(const RawEntry* theorem) {
    Signature sig = problem_.signature();
    if (theorem) {
      for (bool swap : {false, true}) {
        std::map<std::string, SymbolId> m;
        const auto& [cl, cr] = problem_.conclusion;
        if (anchor_term(swap ? theorem->rhs : theorem->lhs, cl, sig, m) &&
            anchor_term(swap ? theorem->lhs : theorem->rhs, cr, sig, m)) {
          out_.renamed = m;
          break;
        }
      }
    }
    sig_size_ = sig.size();
    renamed_output_ = !out_.renamed.empty();
  }

  FoTerm resolve(const RawTerm& t, std::size_t line) {
    std::smatch m;
    if (t.args.empty() && std::regex_match(t.name, m, kVar)) return FoTerm::var(std::stoul(m[1]) - 1);
    // Output with renamed symbols leaves only variables under plain names.
    bool plain_symbol = !(renamed_output_ && t.args.empty());
    if (auto f = out_.trace.signature.find(t.name); f && plain_symbol && !out_.renamed.count(t.name)) {
      if (out_.trace.signature.symbol(*f).arity() != t.args.size())
        throw ParseError(line, 1, "symbol '" + t.name + "' used with the wrong number of arguments");
      return fun(*f, t, line);
    }
    if (std::regex_match(t.name, m, kRenamed)) {
      if (auto f = renamed(t.name, std::stoul(m[1]))) {
        if (out_.trace.signature.symbol(*f).arity() != t.args.size())
          throw ParseError(line, 1, "renamed symbol '" + t.name + "' resolves to '" +
                                        out_.trace.signature.symbol(*f).name + "' of a different arity");
        return fun(*f, t, line);
      }
    }
    if (std::regex_match(t.name, m, kRenamed) || std::regex_match(t.name, kSkolem)) {
      if (!t.args.empty()) throw ParseError(line, 1, "unknown function symbol '" + t.name + "'");
      for (SymbolId c : out_.prover_constants)
        if (out_.trace.signature.symbol(c).name == t.name) return FoTerm::fun(c);
      SymbolId f = out_.trace.signature.add_symbol(t.name, 0);
      out_.prover_constants.push_back(f);
      return FoTerm::fun(f);
    }
    if (!t.args.empty()) throw ParseError(line, 1, "unknown function symbol '" + t.name + "'");
    for (const auto& [v, name] : out_.foreign_variables)
      if (name == t.name) return FoTerm::var(v);
    VarId v = kForeignVarBase + out_.foreign_variables.size();
    out_.foreign_variables[v] = t.name;
    return FoTerm::var(v);
  }

 private:
  FoTerm fun(SymbolId f, const RawTerm& t, std::size_t line) {
    std::vector<FoTerm> args;
    for (const auto& a : t.args) args.push_back(resolve(a, line));
    return FoTerm::fun(f, std::move(args));
  }

  bool renamed_output_ = false;

  std::optional<SymbolId> renamed(const std::string& name, std::size_t k) {
    if (auto it = out_.renamed.find(name); it != out_.renamed.end()) return it->second;
    if (k >= sig_size_) return std::nullopt;
    for (const auto& [n, f] : out_.renamed)
      if (f == k) return std::nullopt;
    out_.renamed[name] = k;
    return k;
  }

  static bool anchor_term(const RawTerm& raw, const FoTerm& t, const Signature& sig,
                          std::map<std::string, SymbolId>& m) {
    if (t.is_var()) return raw.args.empty();
    if (raw.args.size() != t.arity()) return false;
    std::smatch sm;
    if (std::regex_match(raw.name, sm, kRenamed) && !sig.find(raw.name)) {
      auto it = m.find(raw.name);
      if (it != m.end() && it->second != t.symbol()) return false;
      for (const auto& [n, f] : m)
        if (f == t.symbol() && n != raw.name) return false;
      m[raw.name] = t.symbol();
    } else if (raw.name != sig.symbol(t.symbol()).name) {
      return false;
    }
    for (std::size_t i = 0; i < t.arity(); ++i)
      if (!anchor_term(raw.args[i], t.arg(i), sig, m)) return false;
    return true;
  }

  const ProblemFile& problem_;
  ParsedTrace& out_;
  std::size_t sig_size_ = 0;
};

}  // namespace

ParsedTrace parse_proof_trace(const std::string& text, const ProblemFile& problem) {
  std::vector<RawEntry> entries;
  std::istringstream in(text);
  std::string raw;
  std::size_t n = 0;
  bool in_chain = false;
  bool expect_term = false;
  bool theorem_done = false;
  while (std::getline(in, raw)) {
    ++n;
    std::string t = trim(raw);
    if (t.empty() || theorem_done) continue;
    if (auto h = header(t, n)) {
      if (!entries.empty() && !entries.back().elided && expect_term && !entries.back().terms.empty())
        throw ParseError(n, 1, "chain of " + to_string(entries.back().label) + " ends with a step");
      entries.push_back(std::move(*h));
      in_chain = !entries.back().elided;
      expect_term = true;
      continue;
    }
    if (!in_chain) continue;
    RawEntry& e = entries.back();
    if (t[0] == '=') {
      if (expect_term) throw ParseError(n, 1, "expected a term line before this step");
      e.steps.push_back(step_line(t, n));
      expect_term = true;
      continue;
    }
    if (!expect_term) {
      // the chain is over; anything else up to the next header is ignored
      in_chain = false;
      if (e.label.kind == Label::Kind::Theorem) theorem_done = true;
      continue;
    }
    Cursor c{t, n};
    e.terms.push_back({n, c.term()});
    if (!c.done()) c.fail("unexpected text after term");
    expect_term = false;
  }
  if (!entries.empty() && !entries.back().elided && expect_term && !entries.back().terms.empty())
    throw ParseError(n, 1, "chain of " + to_string(entries.back().label) + " ends with a step");

  const RawEntry* theorem = nullptr;
  for (const auto& e : entries)
    if (e.label.kind == Label::Kind::Theorem) {
      if (theorem) throw ParseError(e.line, 1, "more than one theorem");
      theorem = &e;
    }
  if (!theorem) throw ParseError(n == 0 ? 1 : n, 1, "no 'Theorem' block found");

  ParsedTrace out;
  Problem prob = problem.problem();
  out.trace.signature = prob.signature;
  out.trace.axioms = prob.axioms;
  Resolver res(problem, out);
  res.anchor(theorem);

  auto build = [&](const RawEntry& e) {
    ProofTrace::Entry entry;
    entry.elided = e.elided;
    if (e.elided) {
      entry.statement.label = e.label;
      return entry;
    }
    entry.statement = {e.label, res.resolve(e.lhs, e.line), res.resolve(e.rhs, e.line)};
    if (e.terms.empty()) throw ParseError(e.line, 1, to_string(e.label) + " has no chain");
    std::vector<FoTerm> terms;
    for (const auto& [line, t] : e.terms) terms.push_back(res.resolve(t, line));
    if (!(terms.front() == entry.statement.lhs))
      throw ParseError(e.terms.front().first, 1, "chain does not start at the statement's left-hand side");
    if (!(terms.back() == entry.statement.rhs))
      throw ParseError(e.terms.back().first, 1, "chain does not end at the statement's right-hand side");
    for (std::size_t i = 0; i < e.steps.size(); ++i) {
      const RawStep& s = e.steps[i];
      Substitution sub;
      for (const auto& [v, t] : s.subst) sub.bind(v, res.resolve(t, s.line));
      entry.chain.push_back({s.label, s.dir, s.pos, sub, terms[i], terms[i + 1]});
    }
    return entry;
  };

  std::size_t expected_lemma = 1;
  for (const auto& e : entries) {
    if (e.label.kind == Label::Kind::Theorem) continue;
    if (e.label.number != expected_lemma)
      throw ParseError(e.line, 1, "expected Lemma " + std::to_string(expected_lemma));
    ++expected_lemma;
    out.trace.lemmas.push_back(build(e));
  }
  out.trace.theorem = build(*theorem);

  if (auto d = check_trace(out.trace)) {
    std::size_t line = theorem->line;
    // map "Lemma k, step i" back to a source line
    std::smatch m;
    static const std::regex where_re("(Lemma|Theorem) ([0-9]+), step ([0-9]+)");
    if (std::regex_match(d->where, m, where_re)) {
      std::size_t k = std::stoul(m[2]), i = std::stoul(m[3]);
      const RawEntry* e = nullptr;
      for (const auto& x : entries)
        if ((x.label.kind == Label::Kind::Theorem) == (m[1] == "Theorem") &&
            (m[1] == "Theorem" || x.label.number == k))
          e = &x;
      if (e && i >= 1 && i <= e->steps.size()) line = e->steps[i - 1].line;
    }
    throw ParseError(line, 1, d->where + ": " + d->message);
  }
  return out;
}

std::string describe_symbol_map(const ParsedTrace& parsed) {
  std::ostringstream out;
  for (const auto& [n, f] : parsed.renamed) out << n << " = " << parsed.trace.signature.symbol(f).name << "\n";
  for (auto f : parsed.prover_constants)
    out << parsed.trace.signature.symbol(f).name << " = (introduced by the prover)\n";
  return out.str();
}

}  // namespace mella::bridge
