#pragma once

// Process terms of the (public) Mobile Ambients calculus, in both the
// asynchronous and the synchronous communication mode.
//
// Binders use de Bruijn indices, so alpha-equivalence is structural equality.
// Free variables (only constructible through the API, never by the parser)
// carry a spelling; they exist so open terms can be built and inspected.

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

#include "ambient/names.hpp"

namespace ambient {

enum class CalculusMode : std::uint8_t { Async, Sync };

enum class CapKind : std::uint8_t { In, Out, Open };

struct Var {  // bound occurrence, de Bruijn index
  std::uint32_t index = 0;
  friend bool operator==(Var a, Var b) { return a.index == b.index; }
};

struct FreeVar {  // free occurrence, by spelling
  Name id;
  friend bool operator==(FreeVar a, FreeVar b) { return a.id == b.id; }
};

// The paper's eta: a name or a variable, in capability / ambient / message
// position.
using NameOrVar = std::variant<Name, Var, FreeVar>;

struct Capability {
  CapKind kind;
  NameOrVar target;
};

enum class Op : std::uint8_t { Nil, Par, Repl, Prefix, Amb, Msg, Abs };

class Term;
using TermPtr = std::shared_ptr<const Term>;

class Term {
 public:
  Op op;
  CapKind cap = CapKind::In;  // Prefix only
  NameOrVar head;             // Prefix target / Amb name / Msg payload
  TermPtr a, b;               // Par: a|b. Repl/Prefix/Amb/Abs: a = body.
                              // Msg: a = continuation (sync) or null (async).
  std::size_t hash = 0;
  bool canonical = false;  // set only by the canonicalizer

  static TermPtr make(Op op, CapKind cap, NameOrVar head, TermPtr a, TermPtr b,
                      bool canonical);
};

namespace detail {

inline std::size_t mix(std::size_t h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

inline std::size_t hash_nov(const NameOrVar& nv) {
  if (const Name* n = std::get_if<Name>(&nv))
    return mix(1, std::hash<std::string>()(name_str(*n)));
  if (const Var* v = std::get_if<Var>(&nv)) return mix(2, v->index);
  return mix(3, std::hash<std::string>()(name_str(std::get<FreeVar>(nv).id)));
}

}  // namespace detail

inline TermPtr Term::make(Op op, CapKind cap, NameOrVar head, TermPtr a,
                          TermPtr b, bool canonical) {
  auto t = std::make_shared<Term>();
  t->op = op;
  t->cap = cap;
  t->head = head;
  t->a = std::move(a);
  t->b = std::move(b);
  t->canonical = canonical;
  std::size_t h = detail::mix(0xabu, static_cast<std::size_t>(op));
  if (op == Op::Prefix) h = detail::mix(h, static_cast<std::size_t>(cap));
  if (op == Op::Prefix || op == Op::Amb || op == Op::Msg)
    h = detail::mix(h, detail::hash_nov(t->head));
  if (t->a) h = detail::mix(h, t->a->hash);
  if (t->b) h = detail::mix(h, t->b->hash);
  t->hash = h;
  return t;
}

// ---- constructors ----------------------------------------------------------

inline TermPtr nil() {
  static TermPtr n = Term::make(Op::Nil, CapKind::In, Name{}, nullptr, nullptr, true);
  return n;
}
inline TermPtr par(TermPtr l, TermPtr r) {
  return Term::make(Op::Par, CapKind::In, Name{}, std::move(l), std::move(r), false);
}
inline TermPtr repl(TermPtr body) {
  return Term::make(Op::Repl, CapKind::In, Name{}, std::move(body), nullptr, false);
}
inline TermPtr prefix(CapKind k, NameOrVar target, TermPtr body) {
  return Term::make(Op::Prefix, k, target, std::move(body), nullptr, false);
}
inline TermPtr prefix(Capability c, TermPtr body) {
  return prefix(c.kind, c.target, std::move(body));
}
inline TermPtr amb(NameOrVar n, TermPtr body) {
  return Term::make(Op::Amb, CapKind::In, n, std::move(body), nullptr, false);
}
inline TermPtr msg(NameOrVar payload) {  // asynchronous message
  return Term::make(Op::Msg, CapKind::In, payload, nullptr, nullptr, false);
}
inline TermPtr msg(NameOrVar payload, TermPtr cont) {  // synchronous message
  if (!cont) throw std::invalid_argument("sync message needs a continuation");
  return Term::make(Op::Msg, CapKind::In, payload, std::move(cont), nullptr, false);
}
inline TermPtr abs(TermPtr body) {
  return Term::make(Op::Abs, CapKind::In, Name{}, std::move(body), nullptr, false);
}

inline TermPtr par_all(const std::vector<TermPtr>& ps) {
  if (ps.empty()) return nil();
  TermPtr acc = ps.back();
  for (std::size_t i = ps.size() - 1; i-- > 0;) acc = par(ps[i], acc);
  return acc;
}

// ---- equality and ordering -------------------------------------------------

inline bool nov_equal(const NameOrVar& x, const NameOrVar& y) {
  if (x.index() != y.index()) return false;
  if (const Name* n = std::get_if<Name>(&x)) return *n == std::get<Name>(y);
  if (const Var* v = std::get_if<Var>(&x)) return *v == std::get<Var>(y);
  return std::get<FreeVar>(x) == std::get<FreeVar>(y);
}

inline bool term_equal(const TermPtr& x, const TermPtr& y) {
  if (x.get() == y.get()) return true;
  if (!x || !y) return false;
  if (x->hash != y->hash || x->op != y->op) return false;
  switch (x->op) {
    case Op::Nil: return true;
    case Op::Par: return term_equal(x->a, y->a) && term_equal(x->b, y->b);
    case Op::Repl:
    case Op::Abs: return term_equal(x->a, y->a);
    case Op::Prefix:
      return x->cap == y->cap && nov_equal(x->head, y->head) &&
             term_equal(x->a, y->a);
    case Op::Amb: return nov_equal(x->head, y->head) && term_equal(x->a, y->a);
    case Op::Msg:
      if (!nov_equal(x->head, y->head)) return false;
      if (!x->a && !y->a) return true;
      return x->a && y->a && term_equal(x->a, y->a);
  }
  return false;
}

// Total order, independent of name interning sequence: constructor rank, then
// heads by spelling, then subterms lexicographically.
inline int nov_cmp(const NameOrVar& x, const NameOrVar& y) {
  if (x.index() != y.index()) return x.index() < y.index() ? -1 : 1;
  if (const Name* n = std::get_if<Name>(&x)) return name_cmp(*n, std::get<Name>(y));
  if (const Var* v = std::get_if<Var>(&x)) {
    std::uint32_t j = std::get<Var>(y).index;
    return v->index == j ? 0 : (v->index < j ? -1 : 1);
  }
  return name_cmp(std::get<FreeVar>(x).id, std::get<FreeVar>(y).id);
}

inline int term_cmp(const TermPtr& x, const TermPtr& y) {
  if (x.get() == y.get()) return 0;
  if (!x || !y) return !x ? -1 : 1;
  if (x->op != y->op)
    return static_cast<int>(x->op) < static_cast<int>(y->op) ? -1 : 1;
  switch (x->op) {
    case Op::Nil: return 0;
    case Op::Par: {
      int c = term_cmp(x->a, y->a);
      return c ? c : term_cmp(x->b, y->b);
    }
    case Op::Repl:
    case Op::Abs: return term_cmp(x->a, y->a);
    case Op::Prefix: {
      if (x->cap != y->cap)
        return static_cast<int>(x->cap) < static_cast<int>(y->cap) ? -1 : 1;
      int c = nov_cmp(x->head, y->head);
      return c ? c : term_cmp(x->a, y->a);
    }
    case Op::Amb: {
      int c = nov_cmp(x->head, y->head);
      return c ? c : term_cmp(x->a, y->a);
    }
    case Op::Msg: {
      int c = nov_cmp(x->head, y->head);
      if (c) return c;
      if (!x->a && !y->a) return 0;
      if (!x->a || !y->a) return !x->a ? -1 : 1;
      return term_cmp(x->a, y->a);
    }
  }
  return 0;
}

struct TermHash {
  std::size_t operator()(const TermPtr& t) const { return t ? t->hash : 0; }
};
struct TermEq {
  bool operator()(const TermPtr& a, const TermPtr& b) const {
    return term_equal(a, b);
  }
};

// ---- free names / variables / substitution ---------------------------------

namespace detail {
inline void fn_walk(const TermPtr& t, NameSet& out) {
  if (!t) return;
  if (t->op == Op::Prefix || t->op == Op::Amb || t->op == Op::Msg)
    if (const Name* n = std::get_if<Name>(&t->head)) out.insert(*n);
  fn_walk(t->a, out);
  fn_walk(t->b, out);
}
inline void fv_walk(const TermPtr& t, std::uint32_t depth, NameSet& out,
                    bool& dangling) {
  if (!t) return;
  if (t->op == Op::Prefix || t->op == Op::Amb || t->op == Op::Msg) {
    if (const FreeVar* v = std::get_if<FreeVar>(&t->head)) out.insert(v->id);
    if (const Var* v = std::get_if<Var>(&t->head))
      if (v->index >= depth) dangling = true;
  }
  std::uint32_t d = depth + (t->op == Op::Abs ? 1 : 0);
  fv_walk(t->a, d, out, dangling);
  fv_walk(t->b, d, out, dangling);
}
}  // namespace detail

inline NameSet free_names(const TermPtr& t) {
  NameSet s;
  detail::fn_walk(t, s);
  return s;
}

// Spellings of free variables. Dangling de Bruijn indices (only constructible
// through the raw API) count as open but have no spelling.
inline NameSet free_vars(const TermPtr& t) {
  NameSet s;
  bool dangling = false;
  detail::fv_walk(t, 0, s, dangling);
  return s;
}

inline bool is_closed(const TermPtr& t) {
  NameSet s;
  bool dangling = false;
  detail::fv_walk(t, 0, s, dangling);
  return s.empty() && !dangling;
}

namespace detail {
template <typename F>
TermPtr map_heads(const TermPtr& t, std::uint32_t depth, F&& f) {
  if (!t) return t;
  std::uint32_t d = depth + (t->op == Op::Abs ? 1 : 0);
  TermPtr a = map_heads(t->a, d, f);
  TermPtr b = map_heads(t->b, d, f);
  NameOrVar h = t->head;
  if (t->op == Op::Prefix || t->op == Op::Amb || t->op == Op::Msg)
    h = f(t->head, depth);
  if (a.get() == t->a.get() && b.get() == t->b.get() && nov_equal(h, t->head))
    return t;
  return Term::make(t->op, t->cap, h, std::move(a), std::move(b), false);
}
}  // namespace detail

// P{n/x}: capture-avoiding substitution of a name for a free variable.
inline TermPtr substitute_name(const TermPtr& t, Name x, Name n) {
  return detail::map_heads(t, 0, [&](const NameOrVar& h, std::uint32_t) -> NameOrVar {
    if (const FreeVar* v = std::get_if<FreeVar>(&h))
      if (v->id == x) return n;
    return h;
  });
}

// P{n/m}: replace every occurrence of name m with n.
inline TermPtr replace_name(const TermPtr& t, Name m, Name n) {
  return detail::map_heads(t, 0, [&](const NameOrVar& h, std::uint32_t) -> NameOrVar {
    if (const Name* nm = std::get_if<Name>(&h))
      if (*nm == m) return n;
    return h;
  });
}

// Instantiates the body of an abstraction: occurrences of the eliminated
// binder become `n`, indices pointing past it shift down by one.
inline TermPtr instantiate(const TermPtr& body, Name n) {
  return detail::map_heads(body, 0, [&](const NameOrVar& h, std::uint32_t depth) -> NameOrVar {
    if (const Var* v = std::get_if<Var>(&h)) {
      if (v->index == depth) return n;
      if (v->index > depth) return Var{v->index - 1};
    }
    return h;
  });
}

inline std::size_t term_size(const TermPtr& t) {
  if (!t) return 0;
  return 1 + term_size(t->a) + term_size(t->b);
}

// Rejects terms whose message nodes do not match the mode (the mode is a
// document property; mixing is an error).
inline bool mode_consistent(const TermPtr& t, CalculusMode mode) {
  if (!t) return true;
  if (t->op == Op::Msg) {
    bool sync = t->a != nullptr;
    if (sync != (mode == CalculusMode::Sync)) return false;
  }
  return mode_consistent(t->a, mode) && mode_consistent(t->b, mode);
}

}  // namespace ambient
