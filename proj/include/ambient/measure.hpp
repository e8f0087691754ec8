#pragma once

// Syntactic measures: sequentiality degree, depth degree, prefix and message
// counts, and the syntactic classifiers (finite, single, MA^s_IF).

#include <algorithm>

#include "ambient/eta.hpp"

namespace ambient {

// Sequentiality degree. Counts the parcels of interaction on a deepest path;
// abstractions are measured through their eta normal form. Synchronous
// message prefixes count like capabilities (there is no eta law in the
// synchronous calculus, so normalization is the identity there).
inline std::size_t seq_degree_any(const TermPtr& t) {
  switch (t->op) {
    case Op::Nil: return 0;
    case Op::Par: return std::max(seq_degree_any(t->a), seq_degree_any(t->b));
    case Op::Repl:
    case Op::Amb: return seq_degree_any(t->a);
    case Op::Prefix: return 1 + seq_degree_any(t->a);
    case Op::Msg: return t->a ? 1 + seq_degree_any(t->a) : 1;
    case Op::Abs: {
      TermPtr nf = eta_normal_form(t);
      return 1 + seq_degree_any(nf->a);
    }
  }
  return 0;
}

inline std::size_t seq_degree(const TermPtr& p) {
  if (!is_closed(p)) throw std::invalid_argument("seq_degree: open term");
  return seq_degree_any(p);
}

inline std::size_t depth_degree(const TermPtr& t) {
  switch (t->op) {
    case Op::Nil:
    case Op::Prefix:
    case Op::Msg:
    case Op::Abs: return 0;
    case Op::Par: return std::max(depth_degree(t->a), depth_degree(t->b));
    case Op::Repl: return depth_degree(t->a);
    case Op::Amb: return 1 + depth_degree(t->a);
  }
  return 0;
}

// OP: number of capabilities and abstractions.
inline std::size_t count_prefixes(const TermPtr& t) {
  if (!t) return 0;
  std::size_t self = (t->op == Op::Prefix || t->op == Op::Abs) ? 1 : 0;
  return self + count_prefixes(t->a) + count_prefixes(t->b);
}

// OPmess: number of messages.
inline std::size_t count_messages(const TermPtr& t) {
  if (!t) return 0;
  return (t->op == Op::Msg ? 1 : 0) + count_messages(t->a) + count_messages(t->b);
}

namespace detail {
inline bool has_repl(const TermPtr& t) {
  if (!t) return false;
  return t->op == Op::Repl || has_repl(t->a) || has_repl(t->b);
}
inline bool guard_bodies_finite(const TermPtr& t) {
  if (!t) return true;
  if (t->op == Op::Prefix || t->op == Op::Abs || (t->op == Op::Msg && t->a)) {
    TermPtr c = canonical_term(t->a);
    if (has_repl(c)) return false;
    return guard_bodies_finite(c);
  }
  return guard_bodies_finite(t->a) && guard_bodies_finite(t->b);
}
}  // namespace detail

struct Classification {
  bool is_closed = false;
  bool is_finite = false;  // == to a replication-free term
  bool is_single = false;  // == to cap.P' or n[P']
  bool is_maifs = false;   // every guarded body is finite
};

inline Classification classify(const TermPtr& p) {
  Classification c;
  c.is_closed = is_closed(p);
  TermPtr canon = canonical_term(p);
  c.is_finite = !detail::has_repl(canon);
  CanonicalProcess cp = canonicalize(canon);
  c.is_single = cp.comps.size() == 1 && !cp.comps[0].replicated &&
                (cp.comps[0].body->op == Op::Prefix ||
                 cp.comps[0].body->op == Op::Amb);
  c.is_maifs = detail::guard_bodies_finite(canon);
  return c;
}

}  // namespace ambient
