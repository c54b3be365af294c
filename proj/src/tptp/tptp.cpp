#include "mella/tptp/tptp.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace mella::tptp {

namespace fs = std::filesystem;

TptpError::TptpError(std::string u, std::size_t l, std::string m, std::string f)
    : std::runtime_error((f.empty() ? "" : f + ", ") + (u.empty() ? "" : "unit '" + u + "', ") + "line " +
                         std::to_string(l) + ": " + m),
      unit(std::move(u)),
      line(l),
      message(std::move(m)),
      file(std::move(f)) {}

namespace {

class Parser {
 public:
  Parser(const std::string& text, fs::path root, std::set<fs::path>& seen)
      : s_(text), root_(std::move(root)), seen_(seen) {}

  std::vector<TptpUnit> run() {
    std::vector<TptpUnit> out;
    for (;;) {
      skip();
      if (i_ >= s_.size()) break;
      std::size_t line = line_;
      std::string word = lower_word();
      if (word == "include") {
        expect('(');
        std::string file = quoted();
        skip();
        if (peek() == ',') fail("", "selective includes are not supported");
        expect(')');
        expect('.');
        auto more = load(file, line);
        out.insert(out.end(), more.begin(), more.end());
      } else if (word == "cnf") {
        out.push_back(clause(line));
      } else if (word == "fof" || word == "tff" || word == "thf" || word == "tcf") {
        expect('(');
        std::string name = unit_name();
        fail(name, word + " formula outside the unit equality cnf subset", line);
      } else {
        fail("", word.empty() ? "expected cnf(...) or include(...)" : "unknown directive '" + word + "'", line);
      }
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& unit, const std::string& msg, std::size_t line = 0) const {
    throw TptpError(unit, line ? line : line_, msg);
  }

  char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }

  void advance() {
    if (s_[i_] == '\n') ++line_;
    ++i_;
  }

  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        advance();
      } else if (s_[i_] == '%') {
        while (i_ < s_.size() && s_[i_] != '\n') advance();
      } else if (s_.compare(i_, 2, "/*") == 0) {
        std::size_t end = s_.find("*/", i_ + 2);
        if (end == std::string::npos) fail(unit_, "unterminated comment");
        while (i_ < end + 2) advance();
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    skip();
    if (peek() != c) fail(unit_, std::string("expected '") + c + "'");
    advance();
  }

  bool eat(const std::string& tok) {
    skip();
    if (s_.compare(i_, tok.size(), tok) != 0) return false;
    for (std::size_t k = 0; k < tok.size(); ++k) advance();
    return true;
  }

  std::string word() {
    skip();
    std::size_t b = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) advance();
    return s_.substr(b, i_ - b);
  }

  std::string lower_word() {
    std::string w = word();
    if (!w.empty() && !std::islower(static_cast<unsigned char>(w[0]))) fail(unit_, "unexpected '" + w + "'");
    return w;
  }

  std::string quoted() {
    skip();
    if (peek() != '\'') fail(unit_, "expected a quoted file name");
    advance();
    std::size_t b = i_;
    while (i_ < s_.size() && s_[i_] != '\'' && s_[i_] != '\n') advance();
    if (peek() != '\'') fail(unit_, "unterminated quoted name");
    std::string out = s_.substr(b, i_ - b);
    advance();
    return out;
  }

  std::string unit_name() {
    skip();
    if (peek() == '\'') return quoted();
    std::string w = word();
    if (w.empty()) fail("", "expected a unit name");
    return w;
  }

  TptpUnit clause(std::size_t line) {
    expect('(');
    TptpUnit u;
    u.line = line;
    u.name = unit_name();
    unit_ = u.name;
    expect(',');
    std::string role = lower_word();
    if (role == "axiom") u.role = Role::Axiom;
    else if (role == "hypothesis") u.role = Role::Hypothesis;
    else if (role == "negated_conjecture") u.role = Role::NegatedConjecture;
    else fail(u.name, "unsupported role '" + role + "'");
    expect(',');
    std::size_t parens = 0;
    while (eat("(")) ++parens;
    skip();
    if (peek() == '~') fail(u.name, "non-equational literal");
    u.lhs = term();
    if (eat("!=")) {
      u.positive = false;
    } else if (eat("=")) {
      u.positive = true;
    } else {
      skip();
      if (peek() == '|' || peek() == ')' || peek() == ',') fail(u.name, "non-equational literal");
      fail(u.name, "expected '=' or '!='");
    }
    u.rhs = term();
    skip();
    if (peek() == '|') fail(u.name, "non-unit clause");
    while (parens--) expect(')');
    skip();
    if (peek() == '|') fail(u.name, "non-unit clause");
    if (peek() == ',') fail(u.name, "annotations are not supported");
    expect(')');
    expect('.');
    unit_.clear();
    return u;
  }

  TptpTerm term() {
    skip();
    TptpTerm t;
    t.name = word();
    if (t.name.empty()) fail(unit_, std::string("expected a term, found '") + peek() + "'");
    if (std::isupper(static_cast<unsigned char>(t.name[0]))) {
      t.variable = true;
      return t;
    }
    if (!std::islower(static_cast<unsigned char>(t.name[0]))) fail(unit_, "bad symbol '" + t.name + "'");
    if (eat("(")) {
      do t.args.push_back(term());
      while (eat(","));
      expect(')');
    }
    return t;
  }

  std::vector<TptpUnit> load(const std::string& file, std::size_t line) {
    fs::path p = root_ / file;
    std::ifstream in(p);
    if (!in) fail("", "unresolved include '" + file + "'", line);
    fs::path canon = fs::weakly_canonical(p);
    if (!seen_.insert(canon).second) fail("", "include cycle through '" + file + "'", line);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      auto out = Parser(ss.str(), root_, seen_).run();
      seen_.erase(canon);
      return out;
    } catch (const TptpError& e) {
      if (!e.file.empty()) throw;
      throw TptpError(e.unit, e.line, e.message, file);
    }
  }

  const std::string& s_;
  fs::path root_;
  std::set<fs::path>& seen_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::string unit_;
};

}  // namespace

std::vector<TptpUnit> parse_tptp(const std::string& text, const fs::path& root) {
  std::set<fs::path> seen;
  return Parser(text, root, seen).run();
}

std::vector<TptpUnit> parse_tptp_file(const fs::path& file, const fs::path& root) {
  std::ifstream in(file);
  if (!in) throw TptpError("", 0, "cannot read '" + file.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  std::set<fs::path> seen{fs::weakly_canonical(file)};
  return Parser(ss.str(), root, seen).run();
}

std::string Conversion::opening() const {
  std::string out = "theorem " + theorem + " : \"" + statement + "\".\n  intro";
  for (const auto& b : binders) out += " " + b;
  return out + ".\n";
}

namespace {

struct SymbolInfo {
  std::string tptp;
  std::string name;  // kernel binder and prover symbol
  std::size_t arity = 0;
  bool in_axioms = false;
};

class Converter {
 public:
  Conversion run(const std::vector<TptpUnit>& units, const std::string& name, double timeout) {
    const TptpUnit* goal = nullptr;
    std::vector<const TptpUnit*> axioms;
    for (const auto& u : units) {
      if (u.role == Role::NegatedConjecture) {
        if (goal) throw TptpError(u.name, u.line, "more than one negated conjecture");
        if (u.positive) throw TptpError(u.name, u.line, "the negated conjecture must be a disequation");
        goal = &u;
      } else {
        if (!u.positive) throw TptpError(u.name, u.line, "disequations are only allowed as the negated conjecture");
        axioms.push_back(&u);
      }
    }
    if (!goal) throw TptpError("", 0, "no negated conjecture");
    if (axioms.empty()) throw TptpError(goal->name, goal->line, "no axioms");

    for (const auto* u : axioms) {
      collect(u->lhs, *u, true);
      collect(u->rhs, *u, true);
    }
    collect(goal->lhs, *goal, false);
    collect(goal->rhs, *goal, false);
    if (has_var(goal->lhs) || has_var(goal->rhs))
      throw TptpError(goal->name, goal->line, "the negated conjecture has variables");
    assign_names();

    Conversion c;
    c.theorem = identifier(name);
    std::vector<const SymbolInfo*> decl;
    for (const auto& s : symbols_) decl.push_back(&s);
    std::stable_sort(decl.begin(), decl.end(), [](const SymbolInfo* a, const SymbolInfo* b) {
      if (a->in_axioms != b->in_axioms) return a->in_axioms;
      return a->in_axioms && a->arity < b->arity;
    });
    for (std::size_t i = 0; i < decl.size(); ++i) decl_index_[decl[i]->tptp] = i;
    std::vector<const SymbolInfo*> prec;
    for (const auto& s : symbols_) prec.push_back(&s);
    auto rank = [](const SymbolInfo* s) {
      if (s->arity == 1) return std::make_pair(0, 0);
      if (s->arity > 1) return std::make_pair(1, -static_cast<int>(s->arity));
      return std::make_pair(s->in_axioms ? 2 : 3, 0);
    };
    std::stable_sort(prec.begin(), prec.end(), [&](const SymbolInfo* a, const SymbolInfo* b) { return rank(a) < rank(b); });

    bridge::ProblemFile& f = c.file;
    f.name = name;
    f.sorts = {"ANY"};
    for (const auto* s : decl) f.symbols.push_back({s->name, std::vector<std::string>(s->arity, "ANY"), "ANY"});
    for (const auto* s : prec) {
      f.ordering.precedence.push_back(s->name);
      c.signature.push_back(s->name);
    }
    std::size_t max_vars = 0;
    std::vector<std::map<std::string, rewriting::VarId>> vars(axioms.size());
    for (std::size_t k = 0; k < axioms.size(); ++k) {
      f.equations.push_back({fo(axioms[k]->lhs, vars[k]), fo(axioms[k]->rhs, vars[k])});
      max_vars = std::max(max_vars, vars[k].size());
    }
    std::map<std::string, rewriting::VarId> none;
    f.conclusion = {fo(goal->lhs, none), fo(goal->rhs, none)};
    if (max_vars > 0) {
      bridge::VariableDecl d;
      d.sort = "ANY";
      std::set<std::string> taken;
      for (const auto& s : symbols_) taken.insert(s.name);
      const std::vector<std::string> preferred = {"x", "y", "z", "u", "v", "w"};
      for (std::size_t i = 0, n = 1; d.names.size() < max_vars; ++i) {
        std::string v = i < preferred.size() ? preferred[i] : "v" + std::to_string(n++);
        if (!taken.count(v)) d.names.push_back(v);
      }
      f.variables.push_back(d);
    }

    std::set<std::string> var_names;
    for (const auto* u : axioms) {
      collect_vars(u->lhs, var_names);
      collect_vars(u->rhs, var_names);
    }
    std::string carrier = "A";
    for (int i = 0; var_names.count(carrier); ++i) carrier = "A" + std::to_string(i);

    std::ostringstream st;
    st << "(" << carrier << " : *)";
    for (const auto* s : decl) {
      st << " (" << s->name << " : ";
      for (std::size_t i = 0; i < s->arity; ++i) st << carrier << " -> ";
      st << carrier << ")";
    }
    c.binders.push_back(carrier);
    for (const auto* s : decl) c.binders.push_back(s->name);
    for (std::size_t k = 0; k < axioms.size(); ++k) {
      std::string ax = "ax" + std::to_string(k + 1);
      c.axioms.push_back(ax);
      c.binders.push_back(ax);
      st << "\n  -> (" << ax << " : ";
      std::vector<std::string> order(vars[k].size());
      for (const auto& [v, id] : vars[k]) order[id] = v;
      if (!order.empty()) {
        st << "(";
        for (std::size_t i = 0; i < order.size(); ++i) st << (i ? " " : "") << order[i];
        st << " : " << carrier << ") -> ";
      }
      st << "Id " << carrier << " " << kernel(axioms[k]->lhs) << " " << kernel(axioms[k]->rhs) << ")";
    }
    st << "\n  -> Id " << carrier << " " << kernel(goal->lhs) << " " << kernel(goal->rhs);
    c.statement = st.str();

    std::ostringstream sc;
    sc << "-- " << name << "\n" << c.opening() << "  waldmeister :signature";
    for (const auto& n : c.signature) sc << " " << n;
    sc << " :axioms";
    for (const auto& a : c.axioms) sc << " " << a;
    sc << " :lpo :timeout " << timeout << ".\n  qed.\n";
    c.script = sc.str();
    return c;
  }

 private:
  static bool has_var(const TptpTerm& t) {
    if (t.variable) return true;
    for (const auto& a : t.args)
      if (has_var(a)) return true;
    return false;
  }

  static void collect_vars(const TptpTerm& t, std::set<std::string>& out) {
    if (t.variable) out.insert(t.name);
    for (const auto& a : t.args) collect_vars(a, out);
  }

  void collect(const TptpTerm& t, const TptpUnit& u, bool axiom) {
    if (t.variable) return;
    auto it = index_.find(t.name);
    if (it == index_.end()) {
      index_[t.name] = symbols_.size();
      symbols_.push_back({t.name, "", t.args.size(), axiom});
    } else {
      SymbolInfo& s = symbols_[it->second];
      if (s.arity != t.args.size())
        throw TptpError(u.name, u.line, "symbol '" + t.name + "' used with arities " + std::to_string(s.arity) +
                                            " and " + std::to_string(t.args.size()));
      s.in_axioms = s.in_axioms || axiom;
    }
    for (const auto& a : t.args) collect(a, u, axiom);
  }

  void assign_names() {
    static const std::regex reserved("x[0-9]+|s[0-9]+|sk[0-9]*|v[0-9]+|ax[0-9]+|refl");
    std::set<std::string> plain;
    for (const auto& s : symbols_) plain.insert(s.tptp);
    std::set<std::string> used;
    for (auto& s : symbols_) {
      std::string n = s.tptp;
      if (std::regex_match(n, reserved)) {
        n = "k_" + n;
        for (int i = 1; plain.count(n) || used.count(n); ++i) n = "k_" + s.tptp + "_" + std::to_string(i);
      }
      used.insert(n);
      s.name = n;
    }
  }

  rewriting::FoTerm fo(const TptpTerm& t, std::map<std::string, rewriting::VarId>& vars) const {
    if (t.variable) {
      auto [it, fresh] = vars.try_emplace(t.name, vars.size());
      return rewriting::FoTerm::var(it->second);
    }
    std::vector<rewriting::FoTerm> args;
    for (const auto& a : t.args) args.push_back(fo(a, vars));
    return rewriting::FoTerm::fun(decl_id(t.name), std::move(args));
  }

  rewriting::SymbolId decl_id(const std::string& tptp) const { return decl_index_.at(tptp); }

  std::string kernel(const TptpTerm& t) const {
    std::string out = t.variable ? t.name : symbols_[index_.at(t.name)].name;
    if (t.args.empty()) return out;
    for (const auto& a : t.args) out += " " + kernel(a);
    return "(" + out + ")";
  }

  static std::string identifier(const std::string& name) {
    std::string out;
    for (char c : name) out += std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::tolower(c)) : '_';
    if (out.empty() || !std::isalpha(static_cast<unsigned char>(out[0]))) out = "p_" + out;
    return out;
  }

  std::vector<SymbolInfo> symbols_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, rewriting::SymbolId> decl_index_;
};

}  // namespace

Conversion to_problem(const std::vector<TptpUnit>& units, const std::string& name, double timeout) {
  return Converter().run(units, name, timeout);
}

}  // namespace mella::tptp
