#pragma once

// Surface syntax for processes (UTF-8 text):
//
//   P ::= "0" | P "|" P | "!" P | ("in"|"out"|"open") eta "." P
//       | eta "[" P "]" | "<" eta ">" ("." P in sync mode)
//       | "(" x ")" P | "(" P ")"
//
// "|" is lowest precedence and right-associated; "!", prefixes, messages and
// binders take a unary operand. Identifiers are [A-Za-z_][A-Za-z0-9_']*;
// "in", "out" and "open" are reserved. An identifier bound by an enclosing
// "(x)" is a variable, every other identifier denotes a name, so parsed terms
// are closed. With sugar enabled (the default), a capability without "." is
// read as prefixing 0, and in sync mode "<n>" as "<n>.0".

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "ambient/term.hpp"

namespace ambient {

struct ParseError : std::runtime_error {
  std::size_t pos;
  ParseError(std::string m, std::size_t p)
      : std::runtime_error(std::move(m)), pos(p) {}
};

struct ParseOptions {
  CalculusMode mode = CalculusMode::Async;
  bool sugar = true;  // "in n" for "in n.0", "<n>" for "<n>.0" in sync mode
};

namespace detail {

class ProcParser {
 public:
  ProcParser(std::string_view text, ParseOptions opts)
      : src_(text), opts_(opts) {}

  TermPtr parse() {
    TermPtr t = parse_par();
    skip_ws();
    if (pos_ != src_.size()) fail("trailing input");
    return t;
  }

 private:
  std::string_view src_;
  ParseOptions opts_;
  std::size_t pos_ = 0;
  std::vector<std::string> binders_;  // innermost last

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("syntax error at offset " + std::to_string(pos_) + ": " +
                         what,
                     pos_);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c, const char* what) {
    if (!eat(c)) fail(std::string("expected '") + c + "' (" + what + ")");
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  std::string lex_ident() {
    skip_ws();
    if (pos_ >= src_.size() || !ident_start(src_[pos_])) fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  // Peeks an identifier without consuming it.
  std::string peek_ident() {
    skip_ws();
    if (pos_ >= src_.size() || !ident_start(src_[pos_])) return {};
    std::size_t p = pos_;
    while (p < src_.size() && ident_char(src_[p])) ++p;
    return std::string(src_.substr(pos_, p - pos_));
  }

  NameOrVar resolve(const std::string& id) {
    for (std::size_t i = binders_.size(); i-- > 0;)
      if (binders_[i] == id)
        return Var{static_cast<std::uint32_t>(binders_.size() - 1 - i)};
    return name(id);
  }

  bool starts_process() {
    char c = peek();
    if (c == '0' || c == '!' || c == '<' || c == '(') return true;
    if (!ident_start(c)) return false;
    return true;  // capability keyword or ambient name
  }

  TermPtr parse_par() {
    TermPtr left = parse_unary();
    if (eat('|')) return par(left, parse_par());
    return left;
  }

  TermPtr continuation(const char* ctx) {
    if (eat('.')) return parse_unary();
    if (opts_.sugar) return nil();
    fail(std::string("missing continuation after ") + ctx);
  }

  TermPtr parse_unary() {
    char c = peek();
    if (c == '0') {
      ++pos_;
      return nil();
    }
    if (c == '!') {
      ++pos_;
      return repl(parse_unary());
    }
    if (c == '<') {
      ++pos_;
      NameOrVar payload = resolve(lex_ident());
      expect('>', "message");
      skip_ws();
      bool has_cont = pos_ < src_.size() && src_[pos_] == '.';
      if (opts_.mode == CalculusMode::Async) {
        if (has_cont) fail("message continuation in asynchronous mode");
        return msg(payload);
      }
      if (has_cont) {
        ++pos_;
        return msg(payload, parse_unary());
      }
      if (opts_.sugar) return msg(payload, nil());
      fail("synchronous message needs a continuation");
    }
    if (c == '(') {
      ++pos_;
      // "(x)" followed by a process is an abstraction; a bare identifier is
      // not a process, so the forms cannot collide.
      std::size_t save = pos_;
      std::string id = peek_ident();
      if (!id.empty()) {
        std::size_t p = pos_;
        while (p < src_.size() && ident_char(src_[p])) ++p;
        while (p < src_.size() && std::isspace(static_cast<unsigned char>(src_[p]))) ++p;
        if (p < src_.size() && src_[p] == ')') {
          lex_ident();
          expect(')', "binder");
          binders_.push_back(id);
          TermPtr body = parse_unary();
          binders_.pop_back();
          return abs(body);
        }
      }
      pos_ = save;
      TermPtr inner = parse_par();
      expect(')', "parenthesized process");
      return inner;
    }
    if (ident_start(c)) {
      std::string id = lex_ident();
      if (id == "in" || id == "out" || id == "open") {
        CapKind k = id == "in" ? CapKind::In
                               : id == "out" ? CapKind::Out : CapKind::Open;
        NameOrVar target = resolve(lex_ident());
        return prefix(k, target, continuation(id.c_str()));
      }
      NameOrVar n = resolve(id);
      expect('[', "ambient");
      TermPtr body = peek() == ']' ? nil() : parse_par();
      expect(']', "ambient");
      return amb(n, body);
    }
    fail("expected process");
  }
};

}  // namespace detail

inline TermPtr parse_process(std::string_view text, ParseOptions opts = {}) {
  return detail::ProcParser(text, opts).parse();
}

inline TermPtr parse_process(std::string_view text, CalculusMode mode) {
  ParseOptions o;
  o.mode = mode;
  return detail::ProcParser(text, o).parse();
}

}  // namespace ambient
