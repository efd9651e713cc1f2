#pragma once

// Tokenizer shared by the term grammar and the workbench file grammar, plus
// the canonical prefix printer for terms.
//
//   term := 'x' DIGITS | IDENT '(' (term (',' term)*)? ')'
//
// Whitespace is insignificant; '#' starts a comment running to end of line.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "halg/error.hpp"
#include "halg/signature.hpp"
#include "halg/term.hpp"

namespace halg {

enum class TokenKind { kIdent, kNumber, kPunct, kEnd };

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : tokens_(tokenize(src)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == TokenKind::kEnd; }

  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::kPunct && peek(ahead).text == p;
  }
  bool is_keyword(std::string_view k, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::kIdent && peek(ahead).text == k;
  }

  bool accept(std::string_view p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }

  void expect(std::string_view p) {
    if (!accept(p)) fail("expected '" + std::string(p) + "', found " + describe(peek()));
  }

  void expect_keyword(std::string_view k) {
    if (!is_keyword(k)) fail("expected '" + std::string(k) + "', found " + describe(peek()));
    next();
  }

  std::string expect_ident() {
    if (peek().kind != TokenKind::kIdent) fail("expected identifier, found " + describe(peek()));
    return next().text;
  }

  std::size_t expect_number() {
    if (peek().kind != TokenKind::kNumber) fail("expected number, found " + describe(peek()));
    const auto& t = next();
    try {
      return static_cast<std::size_t>(std::stoull(t.text));
    } catch (const std::exception&) {
      throw ParseError(t.line, t.column, "number out of range '" + t.text + "'");
    }
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(peek().line, peek().column, what); }

  static std::string describe(const Token& t) {
    if (t.kind == TokenKind::kEnd) return "end of input";
    return "'" + t.text + "'";
  }

 private:
  static std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto advance = [&](std::size_t count) {
      for (std::size_t c = 0; c < count; ++c, ++i) {
        if (src[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
    };
    while (i < src.size()) {
      const char c = src[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
        continue;
      }
      if (c == '#') {
        while (i < src.size() && src[i] != '\n') advance(1);
        continue;
      }
      Token tok;
      tok.line = line;
      tok.column = col;
      std::size_t len = 1;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        tok.kind = TokenKind::kIdent;
        while (i + len < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[i + len])) || src[i + len] == '_'))
          ++len;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        tok.kind = TokenKind::kNumber;
        while (i + len < src.size() && std::isdigit(static_cast<unsigned char>(src[i + len]))) ++len;
      } else {
        tok.kind = TokenKind::kPunct;
        const auto two = src.substr(i, 2);
        if (two == "->" || two == "=>" || two == "<=") {
          len = 2;
        } else if (std::string_view("(){}[],:;=/-<").find(c) == std::string_view::npos) {
          throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        }
      }
      tok.text = std::string(src.substr(i, len));
      out.push_back(std::move(tok));
      advance(len);
    }
    Token end;
    end.line = line;
    end.column = col;
    out.push_back(end);
    return out;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

/// Parses one term from the lexer's current position.
inline Term parse_term(Lexer& lex, const Signature& sig) {
  const Token tok = lex.peek();
  if (tok.kind != TokenKind::kIdent) lex.fail("expected term, found " + Lexer::describe(tok));
  lex.next();
  if (detail::looks_like_variable(tok.text)) {
    try {
      return Term::var(static_cast<std::size_t>(std::stoull(tok.text.substr(1))));
    } catch (const std::exception&) {
      throw ParseError(tok.line, tok.column, "variable index out of range '" + tok.text + "'");
    }
  }
  const auto sym = sig.find(tok.text);
  if (!sym) throw ParseError(tok.line, tok.column, "unknown symbol '" + tok.text + "'");
  lex.expect("(");
  std::vector<Term> args;
  if (!lex.is_punct(")")) {
    do {
      args.push_back(parse_term(lex, sig));
    } while (lex.accept(","));
  }
  lex.expect(")");
  if (args.size() != sig.arity(*sym))
    throw ParseError(tok.line, tok.column,
                     "arity mismatch: '" + tok.text + "' expects " + std::to_string(sig.arity(*sym)) +
                         " arguments, got " + std::to_string(args.size()));
  return Term::apply(*sym, std::move(args));
}

/// Parses a complete term; trailing input is an error.
inline Term parse_term(std::string_view src, const Signature& sig) {
  Lexer lex(src);
  auto t = parse_term(lex, sig);
  if (!lex.at_end()) lex.fail("unexpected trailing input " + Lexer::describe(lex.peek()));
  return t;
}

inline Equation parse_equation(Lexer& lex, const Signature& sig) {
  auto lhs = parse_term(lex, sig);
  lex.expect("=");
  auto rhs = parse_term(lex, sig);
  return {std::move(lhs), std::move(rhs)};
}

inline Equation parse_equation(std::string_view src, const Signature& sig) {
  Lexer lex(src);
  auto eq = parse_equation(lex, sig);
  if (!lex.at_end()) lex.fail("unexpected trailing input " + Lexer::describe(lex.peek()));
  return eq;
}

inline void format_term(std::ostream& os, const Term& t, const Signature& sig) {
  if (t.is_var()) {
    os << 'x' << t.var_index();
    return;
  }
  os << sig.name(t.symbol()) << '(';
  bool first = true;
  for (const auto& a : t.args()) {
    if (!first) os << ", ";
    first = false;
    format_term(os, a, sig);
  }
  os << ')';
}

/// Canonical prefix form: "meet(x0, join(x1, x2))", nullary as "e()".
inline std::string format_term(const Term& t, const Signature& sig) {
  std::ostringstream os;
  format_term(os, t, sig);
  return os.str();
}

}  // namespace halg
