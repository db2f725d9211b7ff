/*
 * Copyright 2026 The TPA Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TPA_PARSER_HPP
#define TPA_PARSER_HPP

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "tpa/error.hpp"
#include "tpa/term.hpp"

namespace tpa {

enum class TokenKind {
  Ident,
  Number,
  Punct,  // single character or "->"
  End
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourceLocation where;
};

/// Tokenizer shared by the term grammar and the model-file declarations.
/// `#` starts a comment that runs to the end of the line.
inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.where = {line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      tok.kind = TokenKind::Ident;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      tok.kind = TokenKind::Number;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      tok.kind = TokenKind::Punct;
      tok.text = "->";
      advance(2);
    } else if (std::string_view(".+|\\{}[]/,()'=;-:&!").find(c) !=
               std::string_view::npos) {
      tok.kind = TokenKind::Punct;
      tok.text = std::string(1, c);
      advance(1);
    } else {
      throw SyntaxError(std::string("unexpected character '") + c + "'",
                        tok.where);
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.where = {line, col};
  out.push_back(end);
  return out;
}

/// Recursive-descent parser over a token stream. Precedence, loosest
/// first: choice `+`, parallel `|`, postfix restriction/relabeling,
/// prefix `.`; both infix operators associate to the right.
class TokenParser {
 public:
  explicit TokenParser(std::string_view src) : tokens_(tokenize(src)) {}

  Term parse_term() { return parse_choice(); }

  bool at_end() const { return peek().kind == TokenKind::End; }
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  bool peek_punct(std::string_view p, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::Punct && peek(ahead).text == p;
  }
  bool peek_ident(std::string_view word, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::Ident && peek(ahead).text == word;
  }
  Token next() {
    Token t = peek();
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool accept_punct(std::string_view p) {
    if (!peek_punct(p)) return false;
    next();
    return true;
  }
  bool accept_ident(std::string_view word) {
    if (!peek_ident(word)) return false;
    next();
    return true;
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("expected '" + std::string(p) + "'");
  }
  std::string expect_ident(std::string_view what = "identifier") {
    if (peek().kind != TokenKind::Ident) fail("expected " + std::string(what));
    return next().text;
  }
  std::size_t expect_number() {
    if (peek().kind != TokenKind::Number) fail("expected a number");
    return std::stoul(next().text);
  }
  /// Channel name (not reserved).
  std::string expect_channel() {
    auto where = peek().where;
    std::string n = expect_ident("channel name");
    if (is_reserved_name(n)) {
      throw SyntaxError("reserved name '" + n + "' used as an action", where);
    }
    return n;
  }
  /// "tau", "t", "tick", "a" or "'a".
  Label parse_label() {
    auto where = peek().where;
    bool co = accept_punct("'");
    std::string n = expect_ident("action label");
    if (!co) {
      if (n == "tau") return Label::tau();
      if (n == "t") return Label::time();
      if (n == "tick") return Label::tick();
    }
    if (is_reserved_name(n)) {
      throw SyntaxError("reserved name '" + n + "' used as an action", where);
    }
    return Label::visible(n, co);
  }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(what + ", found " + found, t.where);
  }

 private:
  Term parse_choice() {
    std::vector<Term> ops{parse_par()};
    while (accept_punct("+")) ops.push_back(parse_par());
    return Term::choice_of(ops);
  }

  Term parse_par() {
    std::vector<Term> ops{parse_postfix()};
    while (accept_punct("|")) ops.push_back(parse_postfix());
    return Term::par_of(ops);
  }

  Term parse_postfix() {
    Term t = parse_prefix();
    for (;;) {
      if (accept_punct("\\")) {
        expect_punct("{");
        NameSet names;
        if (!peek_punct("}")) {
          do {
            names.insert(expect_channel());
          } while (accept_punct(","));
        }
        expect_punct("}");
        t = Term::restrict(std::move(t), std::move(names));
      } else if (accept_punct("[")) {
        Relabeling f;
        do {
          std::string to = expect_channel();
          expect_punct("/");
          auto where = peek().where;
          std::string from = expect_channel();
          if (!f.emplace(from, to).second) {
            throw SyntaxError("'" + from + "' relabeled twice", where);
          }
        } while (accept_punct(","));
        expect_punct("]");
        t = Term::relabel(std::move(t), std::move(f));
      } else {
        return t;
      }
    }
  }

  bool label_ahead() const {
    if (peek_punct("'")) return true;
    return peek().kind == TokenKind::Ident && peek_punct(".", 1) &&
           peek().text != "rec";
  }

  Term parse_prefix() {
    if (label_ahead()) {
      Label l = parse_label();
      expect_punct(".");
      return Term::prefix(std::move(l), parse_prefix());
    }
    return parse_atom();
  }

  Term parse_atom() {
    const Token& t = peek();
    if (t.kind == TokenKind::Number) {
      if (t.text != "0") fail("expected a term");
      next();
      return Term::nil();
    }
    if (accept_punct("(")) {
      Term inner = parse_choice();
      expect_punct(")");
      return inner;
    }
    if (t.kind == TokenKind::Ident) {
      if (t.text == "Nil") {
        next();
        return Term::nil();
      }
      if (t.text == "rec") {
        next();
        auto where = peek().where;
        std::string x = expect_ident("recursion variable");
        if (is_reserved_name(x)) {
          throw SyntaxError("reserved name '" + x + "' used as a variable", where);
        }
        expect_punct(".");
        return Term::rec(std::move(x), parse_prefix());
      }
      if (is_reserved_name(t.text)) {
        throw SyntaxError("reserved name '" + t.text + "' used as a process",
                          t.where);
      }
      return Term::var(next().text);
    }
    fail("expected a term");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

/// Parses a single term; the whole input must be consumed.
inline Term parse_term(std::string_view text) {
  TokenParser p(text);
  Term t = p.parse_term();
  if (!p.at_end()) p.fail("unexpected trailing input");
  return t;
}

}  // namespace tpa

#endif  // TPA_PARSER_HPP
