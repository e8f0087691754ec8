#pragma once

// The eta rewrite system:  (x)((x)P | <x>) -> (x)P,  applied modulo ==.
// Terminating (each step removes one abstraction) and confluent up to ==, so
// normal forms are unique up to structural congruence.  ==_E is structural
// congruence extended with this law.

#include <unordered_set>
#include <vector>

#include "ambient/congruence.hpp"

namespace ambient {

using TermSet = std::unordered_set<TermPtr, TermHash, TermEq>;

namespace detail {

// Does `t` reference the binder `level` steps above its root?
inline bool uses_binder(const TermPtr& t, std::uint32_t level) {
  if (!t) return false;
  if (t->op == Op::Prefix || t->op == Op::Amb || t->op == Op::Msg)
    if (const Var* v = std::get_if<Var>(&t->head))
      if (v->index == level) return true;
  std::uint32_t l = level + (t->op == Op::Abs ? 1 : 0);
  return uses_binder(t->a, l) || uses_binder(t->b, l);
}

// Shifts indices >= cutoff down by one (a binder between cutoff-1 and the
// context was removed).
inline TermPtr shift_down(const TermPtr& t, std::uint32_t cutoff) {
  return map_heads(t, 0, [&](const NameOrVar& h, std::uint32_t depth) -> NameOrVar {
    if (const Var* v = std::get_if<Var>(&h))
      if (v->index >= cutoff + depth) return Var{v->index - 1};
    return h;
  });
}

// If `t` is an Abs whose body is, up to ==, (x)P | <x> with the outer binder
// not free in (x)P, returns the contracted abstraction.
inline TermPtr eta_contract(const TermPtr& t) {
  if (t->op != Op::Abs) return nullptr;
  CanonicalProcess body = canonicalize(t->a);
  if (body.comps.size() != 2) return nullptr;
  const Component* absc = nullptr;
  const Component* msgc = nullptr;
  for (const auto& c : body.comps) {
    if (c.replicated) return nullptr;
    if (c.body->op == Op::Abs) absc = &c;
    if (c.body->op == Op::Msg && !c.body->a) msgc = &c;
  }
  if (!absc || !msgc) return nullptr;
  const Var* v = std::get_if<Var>(&msgc->body->head);
  if (!v || v->index != 0) return nullptr;
  // the outer binder must not occur in (x)P: from the component's root that
  // binder is level 0 (level 1 seen from inside the inner abstraction)
  if (uses_binder(absc->body, 0)) return nullptr;
  return abs(shift_down(absc->body->a, 2));
}

template <typename F>
TermPtr rebuild(const TermPtr& t, F&& make_child) {
  TermPtr a = make_child(t->a);
  TermPtr b = t->b ? make_child(t->b) : nullptr;
  if (a.get() == t->a.get() && b.get() == t->b.get()) return t;
  return Term::make(t->op, t->cap, t->head, std::move(a), std::move(b), false);
}

// Enumerates single-position rewrites. Positions range over the canonical
// representative; a redex inside a replicated component is rewritten in place
// (the expansion variants !P | P' it stands for all share the same normal
// form). When `head_only`, positions under capabilities and input prefixes
// are skipped.
inline void eta_step_walk(const TermPtr& t, bool head_only, bool guarded,
                          const std::function<TermPtr(TermPtr)>& wrap,
                          TermSet& out) {
  if (!t) return;
  if (t->op == Op::Abs && !(head_only && guarded)) {
    if (TermPtr contracted = eta_contract(t))
      out.insert(canonical_term(wrap(contracted)));
  }
  bool g = guarded || t->op == Op::Prefix || t->op == Op::Abs ||
           (t->op == Op::Msg && t->a);
  if (t->a)
    eta_step_walk(t->a, head_only, g, [&](TermPtr r) {
      return wrap(Term::make(t->op, t->cap, t->head, std::move(r), t->b, false));
    }, out);
  if (t->b)
    eta_step_walk(t->b, head_only, g, [&](TermPtr r) {
      return wrap(Term::make(t->op, t->cap, t->head, t->a, std::move(r), false));
    }, out);
}

}  // namespace detail

// All one-step eta reducts, as canonical terms.
inline TermSet eta_step(const TermPtr& p, bool head_only = false) {
  TermSet out;
  TermPtr c = canonical_term(p);
  detail::eta_step_walk(c, head_only, false, [](TermPtr r) { return r; }, out);
  return out;
}

inline TermPtr eta_normal_form(const TermPtr& p, bool head_only = false) {
  TermPtr cur = canonical_term(p);
  for (;;) {
    TermSet next = eta_step(cur, head_only);
    if (next.empty()) return cur;
    // Deterministic choice; confluence makes it immaterial.
    TermPtr pick;
    for (const auto& t : next)
      if (!pick || term_cmp(t, pick) < 0) pick = t;
    cur = pick;
  }
}

inline bool eta_congruent(const TermPtr& p, const TermPtr& q) {
  return term_equal(eta_normal_form(p), eta_normal_form(q));
}

}  // namespace ambient
