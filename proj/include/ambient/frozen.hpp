#pragma once

// Frozen subterms fr_N(P): the subterms sitting under guards, with abstraction
// bodies instantiated over the name set N. Finite up to == for finite N, and
// closed under reduction when fn(P) is contained in N.
//
// There is no clause for ambients in the source definition; we use
// fr_N(n[P]) = fr_N(P), which subject reduction under Red-Amb requires.
// Synchronous message continuations count as guarded bodies for the same
// reason (Red-Com releases them).

#include <map>
#include <mutex>
#include <vector>

#include "ambient/congruence.hpp"
#include "ambient/eta.hpp"

namespace ambient {

namespace detail {

struct FrozenKey {
  TermPtr term;
  std::vector<Name> names;
  bool operator==(const FrozenKey& o) const {
    if (names.size() != o.names.size()) return false;
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] != o.names[i]) return false;
    return term_equal(term, o.term);
  }
};
struct FrozenKeyHash {
  std::size_t operator()(const FrozenKey& k) const {
    std::size_t h = k.term ? k.term->hash : 0;
    for (Name n : k.names) h = mix(h, n.id);
    return h;
  }
};

inline void frozen_rec(const TermPtr& t, const std::vector<Name>& names,
                       TermSet& out);

inline void frozen_guard_body(const TermPtr& body,
                              const std::vector<Name>& names, TermSet& out) {
  out.insert(canonical_term(body));
  frozen_rec(body, names, out);
}

inline void frozen_rec(const TermPtr& t, const std::vector<Name>& names,
                       TermSet& out) {
  switch (t->op) {
    case Op::Nil: return;
    case Op::Par:
      frozen_rec(t->a, names, out);
      frozen_rec(t->b, names, out);
      return;
    case Op::Repl:
    case Op::Amb:
      frozen_rec(t->a, names, out);
      return;
    case Op::Prefix:
      frozen_guard_body(t->a, names, out);
      return;
    case Op::Msg:
      if (t->a) frozen_guard_body(t->a, names, out);
      return;
    case Op::Abs:
      for (Name n : names) frozen_guard_body(instantiate(t->a, n), names, out);
      return;
  }
}

}  // namespace detail

// Memoized per (canonical term, N); bisimilarity checking queries repeatedly.
inline const TermSet& frozen_subterms(const TermPtr& p, const NameSet& names) {
  static std::mutex mu;
  static std::unordered_map<detail::FrozenKey, std::unique_ptr<TermSet>,
                            detail::FrozenKeyHash>
      cache;
  detail::FrozenKey key{canonical_term(p), {names.begin(), names.end()}};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  auto set = std::make_unique<TermSet>();
  detail::frozen_rec(key.term, key.names, *set);
  return *cache.emplace(std::move(key), std::move(set)).first->second;
}

}  // namespace ambient
