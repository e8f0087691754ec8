#pragma once

// Pretty-printer, inverse of the parser: parse_process(print_process(p)) is
// alpha-identical to p for any parseable (free-variable-free) term. Binder
// spellings are regenerated deterministically, avoiding the term's free names
// and enclosing binders.

#include <string>
#include <vector>

#include "ambient/term.hpp"

namespace ambient {

namespace detail {

class Printer {
 public:
  explicit Printer(const TermPtr& t) {
    for (Name n : free_names(t)) used_.push_back(name_str(n));
    for (Name n : free_vars(t)) used_.push_back(name_str(n));
  }

  std::string par_level(const TermPtr& t) {
    if (t->op == Op::Par) return unary_level(t->a) + " | " + par_level(t->b);
    return unary_level(t);
  }

 private:
  std::vector<std::string> used_;     // free names: never usable as binders
  std::vector<std::string> binders_;  // innermost last

  static const char* cap_word(CapKind k) {
    switch (k) {
      case CapKind::In: return "in";
      case CapKind::Out: return "out";
      case CapKind::Open: return "open";
    }
    return "";
  }

  bool taken(const std::string& s) const {
    for (const auto& u : used_) if (u == s) return true;
    for (const auto& b : binders_) if (b == s) return true;
    return false;
  }

  std::string fresh_binder() {
    static const char* pool[] = {"x", "y", "z", "w", "u", "v"};
    for (const char* p : pool)
      if (!taken(p)) return p;
    for (std::size_t k = 1;; ++k) {
      std::string cand = "x" + std::to_string(k);
      if (!taken(cand)) return cand;
    }
  }

  std::string nov(const NameOrVar& h) const {
    if (const Name* n = std::get_if<Name>(&h)) return name_str(*n);
    if (const FreeVar* v = std::get_if<FreeVar>(&h)) return name_str(v->id);
    std::uint32_t i = std::get<Var>(h).index;
    if (i < binders_.size()) return binders_[binders_.size() - 1 - i];
    return "?" + std::to_string(i);  // dangling index; not reparseable
  }

  std::string parened(const TermPtr& t) {
    if (t->op == Op::Par) return "(" + par_level(t) + ")";
    return unary_level(t);
  }

  std::string unary_level(const TermPtr& t) {
    switch (t->op) {
      case Op::Nil: return "0";
      case Op::Par: return "(" + par_level(t) + ")";
      case Op::Repl: return "!" + parened(t->a);
      case Op::Prefix:
        return std::string(cap_word(t->cap)) + " " + nov(t->head) + "." +
               parened(t->a);
      case Op::Amb: return nov(t->head) + "[" + par_level(t->a) + "]";
      case Op::Msg: {
        std::string m = "<" + nov(t->head) + ">";
        if (t->a) m += "." + parened(t->a);
        return m;
      }
      case Op::Abs: {
        std::string x = fresh_binder();
        binders_.push_back(x);
        std::string body = parened(t->a);
        binders_.pop_back();
        return "(" + x + ")" + body;
      }
    }
    return "";
  }
};

}  // namespace detail

inline std::string print_process(const TermPtr& p) {
  return detail::Printer(p).par_level(p);
}

}  // namespace ambient
