#include "mella/script/syntax.hpp"

#include <cctype>

namespace mella::script {

SyntaxError::SyntaxError(std::size_t l, std::size_t c, const std::string& message)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + message), line(l), column(c) {}

namespace {

struct Token {
  enum class Kind { Ident, Star, Box, LParen, RParen, Colon, DColon, Arrow, Lambda, Hole, End };
  Kind kind;
  std::string text;
  std::uint64_t level = 0;
  k::SourceLoc loc;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

class Lexer {
 public:
  Lexer(const std::string& s, k::SourceLoc base) : s_(s), base_(base) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      k::SourceLoc at = loc();
      if (i_ >= s_.size()) {
        out.push_back({Token::Kind::End, "", 0, at});
        return out;
      }
      char c = s_[i_];
      auto simple = [&](Token::Kind kind, std::size_t len) {
        out.push_back({kind, s_.substr(i_, len), 0, at});
        advance(len);
      };
      if (c == '(') simple(Token::Kind::LParen, 1);
      else if (c == ')') simple(Token::Kind::RParen, 1);
      else if (c == '*') simple(Token::Kind::Star, 1);
      else if (c == '?') simple(Token::Kind::Hole, 1);
      else if (c == '\\') simple(Token::Kind::Lambda, 1);
      else if (s_.compare(i_, 2, "::") == 0) simple(Token::Kind::DColon, 2);
      else if (c == ':') simple(Token::Kind::Colon, 1);
      else if (s_.compare(i_, 2, "->") == 0) simple(Token::Kind::Arrow, 2);
      else if (s_.compare(i_, 3, "\xE2\x86\x92") == 0) simple(Token::Kind::Arrow, 3);
      else if (s_.compare(i_, 2, "\xCE\xBB") == 0) simple(Token::Kind::Lambda, 2);
      else if (s_.compare(i_, 3, "\xE2\x8B\x86") == 0) simple(Token::Kind::Star, 3);
      else if (s_.compare(i_, 3, "\xE2\x96\xA1") == 0) {
        advance(3);
        std::string digits;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
          digits += s_[i_];
          advance(1);
        }
        out.push_back({Token::Kind::Box, "□" + digits, digits.empty() ? 0 : std::stoull(digits), at});
      } else if (ident_start(c)) {
        std::size_t j = i_;
        while (j < s_.size() &&
               (ident_char(s_[j]) || (s_[j] == '-' && j + 1 < s_.size() && ident_char(s_[j + 1]) &&
                                      s_[j + 1] != '\'')))
          ++j;
        simple(Token::Kind::Ident, j - i_);
      } else {
        throw SyntaxError(at.line, at.column, std::string("unexpected character '") + c + "'");
      }
    }
  }

 private:
  k::SourceLoc loc() const { return {line_ + base_.line - 1, line_ == 1 ? col_ + base_.column - 1 : col_}; }

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

  void skip_space() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) advance(1);
  }

  const std::string& s_;
  k::SourceLoc base_;
  std::size_t i_ = 0, line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  SurfaceTerm parse() {
    SurfaceTerm t = term();
    if (peek().kind != Token::Kind::End) fail(peek(), "unexpected '" + peek().text + "'");
    return t;
  }

 private:
  using TK = Token::Kind;

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] static void fail(const Token& t, const std::string& msg) {
    throw SyntaxError(t.loc.line, t.loc.column, msg);
  }
  const Token& expect(TK kind, const std::string& what) {
    if (peek().kind != kind) fail(peek(), "expected " + what);
    return next();
  }

  static SurfaceTerm node(SurfaceTerm::Kind kind, k::SourceLoc loc, std::vector<SurfaceTerm> kids = {},
                          std::string name = {}) {
    SurfaceTerm t;
    t.kind = kind;
    t.loc = loc;
    t.kids = std::move(kids);
    t.name = std::move(name);
    return t;
  }

  SurfaceTerm term() {
    if (peek().kind == TK::Lambda) return lambda();
    SurfaceTerm t = arrow();
    if (peek().kind == TK::DColon) {
      k::SourceLoc at = next().loc;
      SurfaceTerm ty = arrow();
      return node(SurfaceTerm::Kind::Ann, at, {std::move(t), std::move(ty)});
    }
    return t;
  }

  SurfaceTerm lambda() {
    k::SourceLoc at = next().loc;
    std::vector<std::string> names;
    while (peek().kind == TK::Ident) names.push_back(next().text);
    if (names.empty()) fail(peek(), "expected a binder name after '\\'");
    expect(TK::Arrow, "'->' after lambda binders");
    SurfaceTerm body = term();
    for (std::size_t i = names.size(); i-- > 0;) body = node(SurfaceTerm::Kind::Lam, at, {std::move(body)}, names[i]);
    return body;
  }

  bool at_telescope() const {
    if (peek().kind != TK::LParen || peek(1).kind != TK::Ident) return false;
    std::size_t i = 1;
    while (peek(i).kind == TK::Ident) ++i;
    return peek(i).kind == TK::Colon;
  }

  SurfaceTerm arrow() {
    if (at_telescope()) {
      struct Group {
        std::vector<std::string> names;
        SurfaceTerm type;
        k::SourceLoc loc;
      };
      std::vector<Group> groups;
      while (at_telescope()) {
        Group g;
        g.loc = next().loc;
        while (peek().kind == TK::Ident) g.names.push_back(next().text);
        expect(TK::Colon, "':'");
        g.type = term();
        expect(TK::RParen, "')'");
        groups.push_back(std::move(g));
      }
      expect(TK::Arrow, "'->' after a telescope");
      SurfaceTerm body = arrow_rhs();
      for (std::size_t i = groups.size(); i-- > 0;)
        for (std::size_t j = groups[i].names.size(); j-- > 0;)
          body = node(SurfaceTerm::Kind::Pi, groups[i].loc, {groups[i].type, std::move(body)}, groups[i].names[j]);
      return body;
    }
    SurfaceTerm lhs = application();
    if (peek().kind == TK::Arrow) {
      k::SourceLoc at = next().loc;
      SurfaceTerm rhs = arrow_rhs();
      return node(SurfaceTerm::Kind::Pi, at, {std::move(lhs), std::move(rhs)}, "_");
    }
    return lhs;
  }

  SurfaceTerm arrow_rhs() { return peek().kind == TK::Lambda ? lambda() : arrow(); }

  bool at_atom() const {
    switch (peek().kind) {
      case TK::Ident:
      case TK::Star:
      case TK::Box:
      case TK::Hole:
      case TK::LParen: return true;
      default: return false;
    }
  }

  SurfaceTerm application() {
    SurfaceTerm t = atom();
    while (at_atom() || peek().kind == TK::Lambda) {
      k::SourceLoc at = peek().loc;
      SurfaceTerm a = peek().kind == TK::Lambda ? lambda() : atom();
      t = node(SurfaceTerm::Kind::App, at, {std::move(t), std::move(a)});
    }
    return t;
  }

  SurfaceTerm atom() {
    const Token& t = peek();
    switch (t.kind) {
      case TK::Ident: {
        next();
        if (t.text == "refl") return node(SurfaceTerm::Kind::Refl, t.loc);
        return node(SurfaceTerm::Kind::Var, t.loc, {}, t.text);
      }
      case TK::Star: {
        next();
        SurfaceTerm s = node(SurfaceTerm::Kind::Sort, t.loc);
        s.sort = k::Sort::star();
        return s;
      }
      case TK::Box: {
        next();
        SurfaceTerm s = node(SurfaceTerm::Kind::Sort, t.loc);
        s.sort = k::Sort::box(t.level);
        return s;
      }
      case TK::Hole: next(); return node(SurfaceTerm::Kind::Hole, t.loc);
      case TK::LParen: {
        next();
        SurfaceTerm inner = term();
        expect(TK::RParen, "')'");
        return inner;
      }
      case TK::End: fail(t, "unexpected end of term");
      default: fail(t, "unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

struct Elaborator {
  const k::NamedContext& gamma;
  std::size_t* metas;

  [[noreturn]] static void fail(const SurfaceTerm& t, const std::string& msg) {
    throw SyntaxError(t.loc.line, t.loc.column, msg);
  }

  k::Term run(const SurfaceTerm& t, std::vector<std::string>& scope) {
    using K = SurfaceTerm::Kind;
    switch (t.kind) {
      case K::Var: {
        for (std::size_t i = 0; i < scope.size(); ++i)
          if (scope[i] == t.name && t.name != "_") return k::Term::unnamed(i, t.name);
        if (gamma.contains(t.name)) return k::Term::named(t.name);
        if (t.name == "Id" || t.name == "J") fail(t, "'" + t.name + "' must be applied to all its arguments");
        fail(t, "unbound name '" + t.name + "'");
      }
      case K::Sort: return k::Term::sort(t.sort);
      case K::Hole: return k::Term::meta((*metas)++);
      case K::Refl: return k::Term::refl();
      case K::Pi: {
        k::Term dom = run(t.kids[0], scope);
        scope.insert(scope.begin(), t.name);
        k::Term cod = run(t.kids[1], scope);
        scope.erase(scope.begin());
        return k::Term::pi(k::Tag(t.name), dom, cod);
      }
      case K::Lam: {
        scope.insert(scope.begin(), t.name);
        k::Term body = run(t.kids[0], scope);
        scope.erase(scope.begin());
        return k::Term::lam(k::Tag(t.name), body);
      }
      case K::Ann: return k::Term::ann(run(t.kids[0], scope), run(t.kids[1], scope));
      case K::App: {
        std::vector<const SurfaceTerm*> args;
        const SurfaceTerm* head = &t;
        while (head->kind == K::App) {
          args.insert(args.begin(), &head->kids[1]);
          head = &head->kids[0];
        }
        bool bound = false;
        for (const auto& s : scope) bound = bound || s == head->name;
        if (head->kind == K::Var && !bound && !gamma.contains(head->name) &&
            (head->name == "Id" || head->name == "J")) {
          std::size_t want = head->name == "Id" ? 3 : 6;
          if (args.size() < want)
            fail(*head, "'" + head->name + "' needs " + std::to_string(want) + " arguments");
          std::vector<k::Term> first;
          for (std::size_t i = 0; i < want; ++i) first.push_back(run(*args[i], scope));
          k::Term r = want == 3 ? k::Term::id(first[0], first[1], first[2])
                                : k::Term::j({first[0], first[1], first[2], first[3], first[4], first[5]});
          for (std::size_t i = want; i < args.size(); ++i) r = k::Term::app(r, run(*args[i], scope));
          return r;
        }
        k::Term r = run(*head, scope);
        for (const auto* a : args) r = k::Term::app(r, run(*a, scope));
        return r;
      }
    }
    fail(t, "unknown term");
  }
};

}  // namespace

SurfaceTerm parse_inner(const std::string& text, k::SourceLoc base) {
  return Parser(Lexer(text, base).run()).parse();
}

k::Term elaborate(const SurfaceTerm& t, const std::vector<std::string>& scope, const k::NamedContext& gamma,
                  std::size_t* meta_counter) {
  std::vector<std::string> s = scope;
  std::size_t local = 0;
  Elaborator e{gamma, meta_counter ? meta_counter : &local};
  return e.run(t, s);
}

k::Term read_term(const std::string& text, const std::vector<std::string>& scope, const k::NamedContext& gamma,
                  k::SourceLoc base, std::size_t* meta_counter) {
  return elaborate(parse_inner(text, base), scope, gamma, meta_counter);
}

}  // namespace mella::script
