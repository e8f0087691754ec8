#pragma once

// Formula surface syntax:
//
//   A ::= "T" | "~" A | A "\/" A | A "/\" A | "forall" x "." A
//       | "exists" x "." A | "<>" A | "0" | eta "[" A "]" | A "|" A
//       | A "@" eta | A "|>" B
//       | "<in eta>." A | "<out eta>." A | "<open eta>." A       (possibility)
//       | "[in eta]." A | "[out eta]." A | "[open eta]." A       (necessity)
//       | "<eta>" | "<?eta>." A | "[?eta]." A
//       | "!<in eta>." A | "!<out eta>." A | "!<open eta>." A
//       | "!<eta>" | "!<?>." A | "!eta[A]" | "@free" eta | "(" A ")"
//
// Precedence, loosest first: \/ then /\ then |> (right) then | then @ then
// the unary forms; quantifiers extend as far right as possible. /\ and
// "exists" are the standard duals and parse into negations.

#include <string_view>

#include "ambient/logic.hpp"

namespace ambient {

namespace detail {

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : src_(text) {}

  FormulaPtr parse() {
    FormulaPtr f = parse_or();
    skip_ws();
    if (pos_ != src_.size()) fail("trailing input");
    return f;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<std::string> binders_;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("formula syntax error at offset " + std::to_string(pos_) +
                         ": " + what,
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
  bool lit(std::string_view s) {
    skip_ws();
    if (src_.substr(pos_, s.size()) == s) {
      pos_ += s.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view s, const char* what) {
    if (!lit(s)) fail(std::string("expected '") + std::string(s) + "' (" + what + ")");
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
    std::size_t s = pos_;
    while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
    return std::string(src_.substr(s, pos_ - s));
  }
  std::string peek_word() {
    skip_ws();
    std::size_t p = pos_;
    if (p >= src_.size() || !ident_start(src_[p])) return {};
    std::size_t s = p;
    while (p < src_.size() && ident_char(src_[p])) ++p;
    return std::string(src_.substr(s, p - s));
  }

  FEta resolve(const std::string& id) {
    for (std::size_t i = binders_.size(); i-- > 0;)
      if (binders_[i] == id) return FVar{name(id)};
    return name(id);
  }
  FEta lex_eta() { return resolve(lex_ident()); }

  static std::optional<CapKind> cap_of(const std::string& w) {
    if (w == "in") return CapKind::In;
    if (w == "out") return CapKind::Out;
    if (w == "open") return CapKind::Open;
    return std::nullopt;
  }

  FormulaPtr parse_or() {
    FormulaPtr l = parse_and();
    if (lit("\\/")) return f_or(l, parse_or());
    return l;
  }
  FormulaPtr parse_and() {
    FormulaPtr l = parse_guar();
    if (lit("/\\")) return f_and(l, parse_and());
    return l;
  }
  FormulaPtr parse_guar() {
    FormulaPtr l = parse_par();
    if (lit("|>")) return f_guarantee(l, parse_guar());
    return l;
  }
  FormulaPtr parse_par() {
    FormulaPtr l = parse_at();
    skip_ws();
    // '|' but not '|>'
    if (pos_ < src_.size() && src_[pos_] == '|' &&
        (pos_ + 1 >= src_.size() || src_[pos_ + 1] != '>')) {
      ++pos_;
      return f_par(l, parse_par());
    }
    return l;
  }
  FormulaPtr parse_at() {
    FormulaPtr l = parse_unary();
    for (;;) {
      skip_ws();
      if (pos_ < src_.size() && src_[pos_] == '@' &&
          peek_word_at(pos_ + 1) != "free") {
        ++pos_;
        l = f_at(l, lex_eta());
        continue;
      }
      return l;
    }
  }
  std::string peek_word_at(std::size_t p) {
    if (p >= src_.size() || !ident_start(src_[p])) return {};
    std::size_t s = p;
    while (p < src_.size() && ident_char(src_[p])) ++p;
    return std::string(src_.substr(s, p - s));
  }

  FormulaPtr quantified(bool universal) {
    std::string x = lex_ident();
    expect(".", "quantifier");
    binders_.push_back(x);
    FormulaPtr body = parse_or();
    binders_.pop_back();
    return universal ? f_forall(name(x), body) : f_exists(name(x), body);
  }

  FormulaPtr parse_unary() {
    char c = peek();
    if (c == '~') {
      ++pos_;
      return f_not(parse_unary());
    }
    if (c == '0') {
      ++pos_;
      return f_void();
    }
    if (c == '(') {
      ++pos_;
      FormulaPtr f = parse_or();
      expect(")", "parenthesized formula");
      return f;
    }
    if (c == '<') return parse_angle(false);
    if (c == '[') return parse_box();
    if (c == '!') {
      ++pos_;
      if (peek() == '<') return parse_angle(true);
      FEta n = lex_eta();
      expect("[", "replicated ambient formula");
      FormulaPtr body = parse_or();
      expect("]", "replicated ambient formula");
      return f_repl_amb(n, body);
    }
    if (c == '@') {
      ++pos_;
      std::string w = lex_ident();
      if (w != "free") fail("expected 'free' after '@'");
      return f_free_name(lex_eta());
    }
    if (ident_start(c)) {
      std::string w = peek_word();
      if (w == "T") {
        lex_ident();
        return f_true();
      }
      if (w == "forall") {
        lex_ident();
        return quantified(true);
      }
      if (w == "exists") {
        lex_ident();
        return quantified(false);
      }
      FEta n = lex_eta();
      expect("[", "ambient formula");
      FormulaPtr body = peek() == ']' ? f_true() : parse_or();
      expect("]", "ambient formula");
      return f_amb(n, body);
    }
    fail("expected formula");
  }

  FormulaPtr parse_angle(bool replicated) {
    expect("<", "modal formula");
    if (peek() == '>') {
      if (replicated) fail("'!<>' is not a formula");
      ++pos_;
      return f_sometime(parse_unary());
    }
    if (peek() == '?') {
      ++pos_;
      if (replicated) {
        expect(">", "replicated input formula");
        expect(".", "replicated input formula");
        return f_repl_input(parse_unary());
      }
      FEta n = lex_eta();
      expect(">", "input possibility");
      expect(".", "input possibility");
      return f_in_dia(n, parse_unary());
    }
    std::string w = peek_word();
    if (auto k = cap_of(w)) {
      lex_ident();
      FEta n = lex_eta();
      expect(">", "capability modality");
      expect(".", "capability modality");
      FormulaPtr body = parse_unary();
      return replicated ? f_repl_cap(*k, n, body) : f_cap_dia(*k, n, body);
    }
    FEta n = lex_eta();
    expect(">", "message formula");
    return replicated ? f_repl_msg(n) : f_msg(n);
  }

  FormulaPtr parse_box() {
    expect("[", "necessity modality");
    if (peek() == '?') {
      ++pos_;
      FEta n = lex_eta();
      expect("]", "input necessity");
      expect(".", "input necessity");
      return f_in_box(n, parse_unary());
    }
    std::string w = peek_word();
    auto k = cap_of(w);
    if (!k) fail("expected capability in necessity modality");
    lex_ident();
    FEta n = lex_eta();
    expect("]", "capability necessity");
    expect(".", "capability necessity");
    return f_cap_box(*k, n, parse_unary());
  }
};

class FormulaPrinter {
 public:
  // levels, loosest first: Or=0, Guar=1, Par=2, At=3, Unary=4
  std::string print(const FormulaPtr& f, int min_level = 0) {
    auto wrap = [&](int level, std::string s) {
      return level < min_level ? "(" + std::move(s) + ")" : std::move(s);
    };
    switch (f->op) {
      case FOp::True_: return "T";
      case FOp::Void: return "0";
      case FOp::Not: return "~" + print(f->a, 4);
      case FOp::Or: return wrap(0, print(f->a, 1) + " \\/ " + print(f->b, 0));
      case FOp::Forall:
        return wrap(0, "forall " + name_str(f->var) + "." + print(f->a, 0));
      case FOp::Sometime: return "<>" + print(f->a, 4);
      case FOp::AmbF: return eta(f->eta) + "[" + print(f->a, 0) + "]";
      case FOp::ParF: return wrap(2, print(f->a, 3) + " | " + print(f->b, 2));
      case FOp::At: return wrap(3, print(f->a, 3) + "@" + eta(f->eta));
      case FOp::Guarantee:
        return wrap(1, print(f->a, 2) + " |> " + print(f->b, 1));
      case FOp::CapDia:
        return "<" + cap(f->cap) + " " + eta(f->eta) + ">." + print(f->a, 4);
      case FOp::CapBox:
        return "[" + cap(f->cap) + " " + eta(f->eta) + "]." + print(f->a, 4);
      case FOp::MsgF: return "<" + eta(f->eta) + ">";
      case FOp::InDia: return "<?" + eta(f->eta) + ">." + print(f->a, 4);
      case FOp::InBox: return "[?" + eta(f->eta) + "]." + print(f->a, 4);
      case FOp::ReplCap:
        return "!<" + cap(f->cap) + " " + eta(f->eta) + ">." + print(f->a, 4);
      case FOp::ReplMsg: return "!<" + eta(f->eta) + ">";
      case FOp::ReplInput: return "!<?>." + print(f->a, 4);
      case FOp::ReplAmb: return "!" + eta(f->eta) + "[" + print(f->a, 0) + "]";
      case FOp::FreeName: return "@free " + eta(f->eta);
    }
    return "?";
  }

 private:
  static std::string cap(CapKind k) {
    switch (k) {
      case CapKind::In: return "in";
      case CapKind::Out: return "out";
      case CapKind::Open: return "open";
    }
    return "?";
  }
  static std::string eta(const FEta& e) {
    if (const Name* n = std::get_if<Name>(&e)) return name_str(*n);
    return name_str(std::get<FVar>(e).id);
  }
};

}  // namespace detail

inline FormulaPtr parse_formula(std::string_view text) {
  return detail::FormulaParser(text).parse();
}

inline std::string print_formula(const FormulaPtr& f) {
  return detail::FormulaPrinter().print(f);
}

}  // namespace ambient
