#pragma once

// Structural congruence via canonical forms.
//
// A canonical process is a sorted multiset of single components (head Prefix,
// Amb, Msg or Abs, body canonical), each either plain or replicated:
//   - Par is flattened, Nil components dropped      (monoid laws)
//   - !0 -> 0, !(P|Q) -> !P|!Q, !!P -> !P           (replication laws)
//   - replicated components are deduplicated        (!P == !P|!P, derived)
//   - plain copies of a replicated body are dropped (!P == !P|P)
//   - components sorted by the total term order
// Two processes are structurally congruent iff their canonical forms are
// structurally equal.

#include <algorithm>
#include <vector>

#include "ambient/term.hpp"

namespace ambient {

struct Component {
  bool replicated = false;
  TermPtr body;  // single, canonical
};

struct CanonicalProcess {
  std::vector<Component> comps;  // sorted, invariants as above
  TermPtr term;                  // right-nested canonical representative
};

namespace detail {

inline TermPtr canon_rec(const TermPtr& t);

inline void canon_comps(const TermPtr& t, bool replicated,
                        std::vector<Component>& out) {
  switch (t->op) {
    case Op::Nil: return;
    case Op::Par:
      canon_comps(t->a, replicated, out);
      canon_comps(t->b, replicated, out);
      return;
    case Op::Repl:
      canon_comps(t->a, true, out);
      return;
    case Op::Prefix:
      out.push_back({replicated, Term::make(Op::Prefix, t->cap, t->head,
                                            canon_rec(t->a), nullptr, true)});
      return;
    case Op::Amb:
      out.push_back({replicated, Term::make(Op::Amb, t->cap, t->head,
                                            canon_rec(t->a), nullptr, true)});
      return;
    case Op::Msg:
      out.push_back({replicated,
                     Term::make(Op::Msg, t->cap, t->head,
                                t->a ? canon_rec(t->a) : nullptr, nullptr, true)});
      return;
    case Op::Abs:
      out.push_back({replicated, Term::make(Op::Abs, t->cap, t->head,
                                            canon_rec(t->a), nullptr, true)});
      return;
  }
}

inline bool comp_less(const Component& x, const Component& y) {
  int c = term_cmp(x.body, y.body);
  if (c) return c < 0;
  return x.replicated > y.replicated;  // replicated first among equal bodies
}

inline TermPtr assemble(std::vector<Component>& comps) {
  std::sort(comps.begin(), comps.end(), comp_less);
  // Replicated components form a set; plain components whose body coincides
  // with a replicated sibling are absorbed.
  std::vector<Component> out;
  out.reserve(comps.size());
  for (auto& c : comps) {
    if (!out.empty() && term_equal(out.back().body, c.body)) {
      if (out.back().replicated) continue;          // !P|!P and !P|P collapse
      if (c.replicated) { out.back().replicated = true; continue; }
    }
    out.push_back(c);
  }
  // A plain run can still follow a replicated entry only if bodies differ, so
  // the single pass above suffices (sort puts equal bodies adjacent,
  // replicated first).
  comps.swap(out);
  if (comps.empty()) return nil();
  TermPtr acc;
  for (std::size_t i = comps.size(); i-- > 0;) {
    TermPtr unit = comps[i].replicated
                       ? Term::make(Op::Repl, CapKind::In, Name{},
                                    comps[i].body, nullptr, true)
                       : comps[i].body;
    acc = acc ? Term::make(Op::Par, CapKind::In, Name{}, unit, std::move(acc), true)
              : unit;
  }
  return acc;
}

inline TermPtr canon_rec(const TermPtr& t) {
  if (t->canonical) return t;
  std::vector<Component> comps;
  canon_comps(t, false, comps);
  return assemble(comps);
}

inline void split_components(const TermPtr& canon, std::vector<Component>& out) {
  const Term* cur = canon.get();
  TermPtr hold = canon;
  while (true) {
    if (cur->op == Op::Nil) return;
    if (cur->op == Op::Par) {
      TermPtr u = cur->a;
      if (u->op == Op::Repl)
        out.push_back({true, u->a});
      else
        out.push_back({false, u});
      hold = cur->b;
      cur = hold.get();
      continue;
    }
    if (cur->op == Op::Repl)
      out.push_back({true, cur->a});
    else
      out.push_back({false, hold});
    return;
  }
}

}  // namespace detail

inline TermPtr canonical_term(const TermPtr& p) { return detail::canon_rec(p); }

inline CanonicalProcess canonicalize(const TermPtr& p) {
  CanonicalProcess c;
  c.term = detail::canon_rec(p);
  detail::split_components(c.term, c.comps);
  return c;
}

// Reassembles a component multiset into a canonical term (sorting and
// re-applying the absorption rules; bodies must already be canonical).
inline TermPtr assemble_components(std::vector<Component> comps) {
  return detail::assemble(comps);
}

inline TermPtr component_term(const Component& c) {
  return c.replicated
             ? Term::make(Op::Repl, CapKind::In, Name{}, c.body, nullptr, true)
             : c.body;
}

inline bool struct_congruent(const TermPtr& p, const TermPtr& q) {
  return term_equal(canonical_term(p), canonical_term(q));
}

}  // namespace ambient
