#include "mella/script/command.hpp"

#include <cctype>
#include <map>
#include <regex>
#include <stdexcept>

namespace mella::script {

using rewriting::Direction;

PositionSpec parse_position_spec(const std::string& text) {
  static const std::regex re(R"(\s*(e|\d+(?:\s*[,.]\s*\d+)*)\s*(LR|RL)?\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw std::invalid_argument("malformed position '" + text + "'");
  PositionSpec p;
  if (m[2].matched && m[2] == "RL") p.direction = Direction::RL;
  std::string path = m[1];
  if (path != "e") {
    std::size_t i = 0;
    while (i < path.size()) {
      if (!std::isdigit(static_cast<unsigned char>(path[i]))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < path.size() && std::isdigit(static_cast<unsigned char>(path[j]))) ++j;
      std::size_t n = std::stoul(path.substr(i, j - i));
      if (n == 0) throw std::invalid_argument("positions are 1-based: '" + text + "'");
      p.path.push_back(n);
      i = j;
    }
  }
  return p;
}

std::string to_string(const PositionSpec& p) {
  std::string out;
  for (std::size_t i = 0; i < p.path.size(); ++i) out += (i ? "," : "") + std::to_string(p.path[i]);
  if (out.empty()) out = "e";
  return out + std::string(rewriting::to_string(p.direction));
}

const std::vector<CommandInfo>& command_registry() {
  static const std::vector<CommandInfo> r = {
      {"fun", "fun NAME : \"TYPE\" \"BODY\".", "Defines a top-level function or value."},
      {"postulate", "postulate NAME : \"TYPE\".", "Declares a constant without a definition."},
      {"theorem", "theorem NAME : \"TYPE\".", "States a theorem and opens its proof."},
      {"intro", "intro X1 ... XN.", "Refines the current hole with \\X1 ... XN -> ?."},
      {"=", "= \"TERM\" by \"PROOF\" [at 'POS'].",
       "Rewrites the left-hand side of the goal to TERM using PROOF at POS (default e, LR)."},
      {"refl", "refl.", "Closes an equation whose sides are equal."},
      {"exact", "exact \"TERM\".", "Fills the current hole with TERM; holes in TERM stay open."},
      {"qed", "qed.", "Checks the finished proof and adds the theorem to the context."},
      {"abort", "abort.", "Drops the open theorem."},
      {"waldmeister", "waldmeister :signature F ... :axioms AX ... [:kbo|:lpo] [:timeout S].",
       "Proves the current equational hole automatically and reconstructs the proof."},
      {"normalize", "normalize [proof|NAME].", "Prints the normal form of the current proof or a definition."},
      {"describe", "describe [proof|NAME].", "Prints the current proof term or a definition."},
      {"type", "type \"TERM\".", "Infers the type of TERM."},
      {"goals", "goals.", "Lists the open holes with their contexts."},
      {"print", "print NAME.", "Prints the type and definition of NAME."},
      {"undo", "undo.", "Reverts the previous command."},
      {"commands", "commands.", "Lists all commands."},
      {"help", "help [COMMAND].", "Describes a command."},
      {"agda", "agda [FILE].", "Export to Agda; not available here."},
  };
  return r;
}

namespace {

struct Tok {
  enum class Kind { Word, Keyword, String, Spec, Number, Colon, Period };
  Kind kind;
  std::string text;
  k::SourceLoc loc;  // for strings: first character inside the quotes
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  std::vector<Tok> run() {
    std::vector<Tok> out;
    while (true) {
      skip();
      if (i_ >= s_.size()) return out;
      k::SourceLoc at{line_, col_};
      std::size_t before = out.size(), off = i_;
      char c = s_[i_];
      if (c == '"' || c == '\'') {
        advance(1);
        k::SourceLoc inner{line_, col_};
        std::size_t j = s_.find(c, i_);
        if (j == std::string::npos)
          throw SyntaxError(at.line, at.column, std::string("unterminated ") + (c == '"' ? "term" : "position"));
        std::string body = s_.substr(i_, j - i_);
        advance(j - i_ + 1);
        out.push_back({c == '"' ? Tok::Kind::String : Tok::Kind::Spec, body, c == '"' ? inner : at});
      } else if (c == '.') {
        advance(1);
        out.push_back({Tok::Kind::Period, ".", at});
      } else if (c == ':' && i_ + 1 < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_ + 1]))) {
        advance(1);
        out.push_back({Tok::Kind::Keyword, word(), at});
      } else if (c == ':') {
        advance(1);
        out.push_back({Tok::Kind::Colon, ":", at});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i_;
        while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
        if (j + 1 < s_.size() && s_[j] == '.' && std::isdigit(static_cast<unsigned char>(s_[j + 1]))) {
          ++j;
          while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
        }
        std::string t = s_.substr(i_, j - i_);
        advance(j - i_);
        out.push_back({Tok::Kind::Number, t, at});
      } else if (c == '=') {
        advance(1);
        out.push_back({Tok::Kind::Word, "=", at});
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        out.push_back({Tok::Kind::Word, word(), at});
      } else {
        throw SyntaxError(at.line, at.column, std::string("unexpected character '") + c + "'");
      }
      if (out.size() > before) out.back().offset = off;
    }
  }

 private:
  std::string word() {
    std::size_t j = i_;
    while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_' || s_[j] == '\'' ||
                             (s_[j] == '-' && j + 1 < s_.size() && std::isalnum(static_cast<unsigned char>(s_[j + 1])))))
      ++j;
    std::string w = s_.substr(i_, j - i_);
    advance(j - i_);
    return w;
  }

  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && i_ < s_.size(); ++k, ++i_) {
      if (s_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(s_[i_]) & 0xC0) != 0x80) {
        ++col_;
      }
    }
  }

  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        advance(1);
      } else if (s_.compare(i_, 2, "--") == 0) {
        while (i_ < s_.size() && s_[i_] != '\n') advance(1);
      } else {
        break;
      }
    }
  }

  const std::string& s_;
  std::size_t i_ = 0, line_ = 1, col_ = 1;
};

class CommandParser {
 public:
  CommandParser(const std::vector<Tok>& toks, std::size_t begin, std::size_t end)
      : toks_(toks), i_(begin), end_(end) {}

  Command parse() {
    const Tok& head = toks_[i_];
    if (head.kind != Tok::Kind::Word) fail(head, "expected a command name");
    ++i_;
    Command c;
    c.loc = head.loc;
    const std::string& n = head.text;
    using K = Command::Kind;
    if (n == "fun" || n == "postulate" || n == "theorem") {
      c.kind = n == "fun" ? K::Fun : n == "postulate" ? K::Postulate : K::Theorem;
      c.name = word("a name");
      expect(Tok::Kind::Colon, "':'");
      c.type = quoted("the type");
      if (c.kind == K::Fun) c.term = quoted("the body");
    } else if (n == "intro") {
      c.kind = K::Intro;
      while (more() && peek().kind == Tok::Kind::Word) c.names.push_back(toks_[i_++].text);
      if (c.names.empty()) fail(at_end(), "intro needs at least one name");
    } else if (n == "=") {
      c.kind = K::EqStep;
      c.term = quoted("the new left-hand side");
      if (word("'by'") != "by") fail(toks_[i_ - 1], "expected 'by'");
      c.by = quoted("the justification");
      if (more() && peek().kind == Tok::Kind::Word && peek().text == "at") {
        ++i_;
        const Tok& s = next(Tok::Kind::Spec, "a position in single quotes");
        try {
          c.at = parse_position_spec(s.text);
        } catch (const std::invalid_argument& e) {
          fail(s, e.what());
        }
      }
    } else if (n == "refl" || n == "qed" || n == "abort" || n == "goals" || n == "undo" || n == "commands") {
      c.kind = n == "refl" ? K::Refl : n == "qed" ? K::Qed : n == "abort" ? K::Abort
             : n == "goals" ? K::Goals : n == "undo" ? K::Undo : K::Commands;
    } else if (n == "exact" || n == "type") {
      c.kind = n == "exact" ? K::Exact : K::Type;
      c.term = quoted("a term");
    } else if (n == "normalize" || n == "describe") {
      c.kind = n == "normalize" ? K::Normalize : K::Describe;
      c.name = more() ? word("a name") : "proof";
    } else if (n == "print") {
      c.kind = K::Print;
      c.name = word("a name");
    } else if (n == "help" || n == "agda") {
      c.kind = n == "help" ? K::Help : K::Agda;
      if (more()) c.name = word("a name");
    } else if (n == "waldmeister") {
      c.kind = K::Waldmeister;
      waldmeister(c);
    } else {
      fail(head, "unknown command '" + n + "'");
    }
    if (more()) fail(peek(), "unexpected '" + peek().text + "'");
    return c;
  }

 private:
  bool more() const { return i_ < end_; }
  const Tok& peek() const { return toks_[i_]; }
  const Tok& at_end() const { return toks_[end_]; }
  [[noreturn]] static void fail(const Tok& t, const std::string& msg) {
    throw SyntaxError(t.loc.line, t.loc.column, msg);
  }
  const Tok& next(Tok::Kind kind, const std::string& what) {
    if (!more()) fail(at_end(), "expected " + what);
    if (peek().kind != kind) fail(peek(), "expected " + what);
    return toks_[i_++];
  }
  std::string word(const std::string& what) { return next(Tok::Kind::Word, what).text; }
  void expect(Tok::Kind kind, const std::string& what) { next(kind, what); }
  Quoted quoted(const std::string& what) {
    const Tok& t = next(Tok::Kind::String, what + " in double quotes");
    return {t.text, t.loc};
  }

  void waldmeister(Command& c) {
    bool axioms_given = false;
    while (more()) {
      const Tok& kw = next(Tok::Kind::Keyword, "a keyword such as :axioms");
      if (kw.text == "signature") {
        while (more() && peek().kind == Tok::Kind::Word) c.signature.push_back(toks_[i_++].text);
      } else if (kw.text == "axioms") {
        while (more() && peek().kind == Tok::Kind::Word) c.axioms.push_back(toks_[i_++].text);
        axioms_given = true;
      } else if (kw.text == "kbo" || kw.text == "lpo") {
        c.kbo = kw.text == "kbo";
      } else if (kw.text == "timeout") {
        const Tok& t = next(Tok::Kind::Number, "a number of seconds");
        c.timeout = std::stod(t.text);
        if (c.timeout <= 0) fail(t, "the timeout must be positive");
      } else {
        fail(kw, "unknown keyword ':" + kw.text + "' for waldmeister");
      }
    }
    if (!axioms_given || c.axioms.empty()) fail(at_end(), "waldmeister needs :axioms");
  }

  const std::vector<Tok>& toks_;
  std::size_t i_, end_;
};

}  // namespace

std::vector<Command> parse_outer(const std::string& text) {
  std::vector<Tok> toks = Lexer(text).run();
  std::vector<Command> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].kind != Tok::Kind::Period) continue;
    if (i == start) throw SyntaxError(toks[i].loc.line, toks[i].loc.column, "empty command");
    Command c = CommandParser(toks, start, i).parse();
    c.source = text.substr(toks[start].offset, toks[i].offset - toks[start].offset);
    while (!c.source.empty() && std::isspace(static_cast<unsigned char>(c.source.back()))) c.source.pop_back();
    out.push_back(std::move(c));
    start = i + 1;
  }
  if (start < toks.size())
    throw SyntaxError(toks.back().loc.line, toks.back().loc.column, "missing '.' at the end of the command");
  return out;
}

}  // namespace mella::script
