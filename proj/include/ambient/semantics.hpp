#pragma once

// Operational semantics: the reduction relation, labelled transitions over
// the observation labels (capability, message output, message input, internal
// step), weak transitions, the stuttering closures, barbs, reachability and
// deterministic evolution.
//
// Everything operates on canonical forms; Red-Str is realized by working on
// the == representative rather than by rewriting search. Enumerations pick an
// active component out of the canonical multiset, with replicated components
// contributing expanded copies (!P == !P | P).

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "ambient/congruence.hpp"
#include "ambient/eta.hpp"

namespace ambient {

struct Fuel {
  std::size_t max_states = 100000;
  std::size_t max_depth = 64;
};

struct Verdict {
  enum Value : std::uint8_t { False, True, Unknown } v = Unknown;
  std::string reason;  // set for Unknown

  static Verdict yes() { return {True, {}}; }
  static Verdict no() { return {False, {}}; }
  static Verdict unknown(std::string why) { return {Unknown, std::move(why)}; }
  bool definite() const { return v != Unknown; }
  friend bool operator==(const Verdict& a, const Verdict& b) { return a.v == b.v; }
};

inline std::string to_string(const Verdict& v) {
  switch (v.v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    default: return "unknown:" + (v.reason.empty() ? std::string("?") : v.reason);
  }
}

enum class RedRule : std::uint8_t { Open, In, Out, Com };

inline const char* rule_name(RedRule r) {
  switch (r) {
    case RedRule::Open: return "Red-Open";
    case RedRule::In: return "Red-In";
    case RedRule::Out: return "Red-Out";
    case RedRule::Com: return "Red-Com";
  }
  return "?";
}

struct Reduct {
  RedRule rule;
  TermPtr state;  // canonical
};

struct TransitionLabel {
  enum Kind : std::uint8_t { Cap, MsgOut, MsgIn, Tau } kind = Tau;
  CapKind cap = CapKind::In;  // Kind::Cap
  Name name{};                // Cap target / message payload

  static TransitionLabel tau() { return {}; }
  static TransitionLabel capability(CapKind k, Name n) { return {Cap, k, n}; }
  static TransitionLabel msg_out(Name n) { return {MsgOut, CapKind::In, n}; }
  static TransitionLabel msg_in(Name n) { return {MsgIn, CapKind::In, n}; }
};

namespace detail {

inline bool head_is(const Component& c, Op op) { return c.body->op == op; }

inline bool name_head(const TermPtr& t, Name* out) {
  if (const Name* n = std::get_if<Name>(&t->head)) {
    *out = *n;
    return true;
  }
  return false;
}

// Component multiset minus the occurrences used as active participants.
// Replicated participants stay (an expansion was consumed, the source
// remains).
inline std::vector<Component> residue(const std::vector<Component>& comps,
                                      std::size_t i, std::size_t j) {
  std::vector<Component> out;
  out.reserve(comps.size());
  for (std::size_t k = 0; k < comps.size(); ++k) {
    if ((k == i || k == j) && !comps[k].replicated) continue;
    out.push_back(comps[k]);
  }
  return out;
}

inline void append_components(std::vector<Component>& out, const TermPtr& t) {
  if (!t) return;
  CanonicalProcess c = canonicalize(t);
  out.insert(out.end(), c.comps.begin(), c.comps.end());
}

inline void reduce_once_comps(const std::vector<Component>& comps,
                              CalculusMode mode, std::vector<Reduct>& out);

inline TermPtr with_replaced(const std::vector<Component>& comps,
                             std::size_t i, TermPtr replacement_body) {
  std::vector<Component> next = residue(comps, i, i);
  append_components(next, replacement_body);
  return assemble_components(std::move(next));
}

inline void reduce_once_comps(const std::vector<Component>& comps,
                              CalculusMode mode, std::vector<Reduct>& out) {
  const std::size_t n = comps.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Component& ci = comps[i];

    // Red-Open: open n.P | n[Q] -> P | Q
    if (head_is(ci, Op::Prefix) && ci.body->cap == CapKind::Open) {
      Name target;
      if (name_head(ci.body, &target)) {
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i && !ci.replicated) continue;
          const Component& cj = comps[j];
          Name an;
          if (!head_is(cj, Op::Amb) || !name_head(cj.body, &an) || an != target)
            continue;
          std::vector<Component> next = residue(comps, i, j);
          append_components(next, ci.body->a);
          append_components(next, cj.body->a);
          out.push_back({RedRule::Open, assemble_components(std::move(next))});
        }
      }
    }

    // Red-Com: <n> | (x)P -> P{n/x}   (sync: <n>.Q | (x)P -> Q | P{n/x})
    if (head_is(ci, Op::Msg)) {
      Name payload;
      if (name_head(ci.body, &payload)) {
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i && !ci.replicated) continue;
          const Component& cj = comps[j];
          if (!head_is(cj, Op::Abs)) continue;
          std::vector<Component> next = residue(comps, i, j);
          if (mode == CalculusMode::Sync && ci.body->a)
            append_components(next, ci.body->a);
          append_components(next, instantiate(cj.body->a, payload));
          out.push_back({RedRule::Com, assemble_components(std::move(next))});
        }
      }
    }

    if (!head_is(ci, Op::Amb)) continue;
    Name amb_name;
    if (!name_head(ci.body, &amb_name)) continue;
    CanonicalProcess inner = canonicalize(ci.body->a);

    // Red-In: n[in m.P1 | P2] | m[Q] -> m[ n[P1|P2] | Q ]
    for (std::size_t k = 0; k < inner.comps.size(); ++k) {
      const Component& ck = inner.comps[k];
      if (!head_is(ck, Op::Prefix) || ck.body->cap != CapKind::In) continue;
      Name target;
      if (!name_head(ck.body, &target)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i && !ci.replicated) continue;
        const Component& cj = comps[j];
        Name mj;
        if (!head_is(cj, Op::Amb) || !name_head(cj.body, &mj) || mj != target)
          continue;
        std::vector<Component> moved_body = residue(inner.comps, k, k);
        append_components(moved_body, ck.body->a);
        TermPtr moved = Term::make(Op::Amb, CapKind::In, ci.body->head,
                                   assemble_components(std::move(moved_body)),
                                   nullptr, true);
        std::vector<Component> host_body;
        append_components(host_body, cj.body->a);
        host_body.push_back({false, moved});
        TermPtr host = Term::make(Op::Amb, CapKind::In, cj.body->head,
                                  assemble_components(std::move(host_body)),
                                  nullptr, true);
        std::vector<Component> next = residue(comps, i, j);
        next.push_back({false, host});
        out.push_back({RedRule::In, assemble_components(std::move(next))});
      }
    }

    // Red-Out: m[ n[out m.P1 | P2] | Q ] -> n[P1|P2] | m[Q]
    for (std::size_t k = 0; k < inner.comps.size(); ++k) {
      const Component& ck = inner.comps[k];
      if (!head_is(ck, Op::Amb)) continue;
      CanonicalProcess nested = canonicalize(ck.body->a);
      for (std::size_t l = 0; l < nested.comps.size(); ++l) {
        const Component& cl = nested.comps[l];
        if (!head_is(cl, Op::Prefix) || cl.body->cap != CapKind::Out) continue;
        Name target;
        if (!name_head(cl.body, &target) || target != amb_name) continue;
        std::vector<Component> escaped_body = residue(nested.comps, l, l);
        append_components(escaped_body, cl.body->a);
        TermPtr escaped = Term::make(Op::Amb, CapKind::In, ck.body->head,
                                     assemble_components(std::move(escaped_body)),
                                     nullptr, true);
        std::vector<Component> host_body = residue(inner.comps, k, k);
        TermPtr host = Term::make(Op::Amb, CapKind::In, ci.body->head,
                                  assemble_components(std::move(host_body)),
                                  nullptr, true);
        std::vector<Component> next = residue(comps, i, i);
        next.push_back({false, escaped});
        next.push_back({false, host});
        out.push_back({RedRule::Out, assemble_components(std::move(next))});
      }
    }

    // Red-Amb: reduction inside the ambient body.
    std::vector<Reduct> sub;
    reduce_once_comps(inner.comps, mode, sub);
    for (auto& r : sub) {
      TermPtr rebuilt = Term::make(Op::Amb, CapKind::In, ci.body->head,
                                   r.state, nullptr, true);
      if (ci.replicated) {
        std::vector<Component> next(comps);
        next.push_back({false, rebuilt});
        out.push_back({r.rule, assemble_components(std::move(next))});
      } else {
        out.push_back({r.rule, with_replaced(comps, i, rebuilt)});
      }
    }
  }
}

}  // namespace detail

// All one-step reducts of a closed process, deduplicated by canonical form.
inline std::vector<Reduct> reduce_once(const TermPtr& p,
                                       CalculusMode mode = CalculusMode::Async) {
  if (!is_closed(p)) throw std::invalid_argument("reduce_once: open term");
  CanonicalProcess c = canonicalize(p);
  std::vector<Reduct> raw;
  detail::reduce_once_comps(c.comps, mode, raw);
  std::vector<Reduct> out;
  TermSet seen;
  for (auto& r : raw)
    if (seen.insert(r.state).second) out.push_back(std::move(r));
  return out;
}

inline std::vector<TermPtr> reduct_states(const TermPtr& p, CalculusMode mode) {
  std::vector<TermPtr> out;
  for (auto& r : reduce_once(p, mode)) out.push_back(r.state);
  return out;
}

struct ReachResult {
  TermSet states;  // includes the (canonical) start state
  bool complete = true;
};

// Breadth-first ==> closure over canonical forms. `complete` reports whether
// the frontier was exhausted within fuel.
inline ReachResult reduce_star(const TermPtr& p, Fuel fuel,
                               CalculusMode mode = CalculusMode::Async) {
  ReachResult res;
  TermPtr start = canonical_term(p);
  if (fuel.max_states == 0 || fuel.max_depth == 0) {
    res.complete = false;
    return res;
  }
  res.states.insert(start);
  std::deque<std::pair<TermPtr, std::size_t>> frontier{{start, 0}};
  while (!frontier.empty()) {
    auto [cur, depth] = frontier.front();
    frontier.pop_front();
    if (depth >= fuel.max_depth) {
      for (auto& r : reduce_once(cur, mode))
        if (!res.states.count(r.state)) {
          res.complete = false;
          break;
        }
      continue;
    }
    for (auto& r : reduce_once(cur, mode)) {
      if (res.states.count(r.state)) continue;
      if (res.states.size() >= fuel.max_states) {
        res.complete = false;
        return res;
      }
      res.states.insert(r.state);
      frontier.emplace_back(r.state, depth + 1);
    }
  }
  return res;
}

// Labelled transitions per the observation labels. MsgIn is probed over
// fn(p) plus one deterministic fresh name (sound by equivariance under
// bijective renaming).
inline std::vector<std::pair<TransitionLabel, TermPtr>> labelled_transitions(
    const TermPtr& p, CalculusMode mode = CalculusMode::Async,
    bool include_tau = true) {
  if (!is_closed(p)) throw std::invalid_argument("labelled_transitions: open term");
  std::vector<std::pair<TransitionLabel, TermPtr>> out;
  CanonicalProcess c = canonicalize(p);
  const auto& comps = c.comps;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const Component& ci = comps[i];
    if (ci.body->op == Op::Prefix) {
      Name t;
      if (detail::name_head(ci.body, &t)) {
        std::vector<Component> next = detail::residue(comps, i, i);
        detail::append_components(next, ci.body->a);
        out.emplace_back(TransitionLabel::capability(ci.body->cap, t),
                         assemble_components(std::move(next)));
      }
    } else if (ci.body->op == Op::Msg) {
      Name payload;
      if (detail::name_head(ci.body, &payload)) {
        std::vector<Component> next = detail::residue(comps, i, i);
        if (mode == CalculusMode::Sync && ci.body->a)
          detail::append_components(next, ci.body->a);
        out.emplace_back(TransitionLabel::msg_out(payload),
                         assemble_components(std::move(next)));
      }
    } else if (ci.body->op == Op::Abs) {
      NameSet probes = free_names(p);
      probes.insert(fresh_name(probes));
      for (Name n : probes) {
        std::vector<Component> next = detail::residue(comps, i, i);
        detail::append_components(next, instantiate(ci.body->a, n));
        out.emplace_back(TransitionLabel::msg_in(n),
                         assemble_components(std::move(next)));
      }
    }
  }
  if (include_tau)
    for (auto& r : reduce_once(c.term, mode))
      out.emplace_back(TransitionLabel::tau(), r.state);
  return out;
}

namespace detail {

inline bool label_matches(const TransitionLabel& want,
                          const TransitionLabel& got) {
  if (want.kind != got.kind) return false;
  switch (want.kind) {
    case TransitionLabel::Tau: return true;
    case TransitionLabel::Cap: return want.cap == got.cap && want.name == got.name;
    default: return want.name == got.name;
  }
}

// One strong step with the given label, from every state in `from`.
inline TermSet strong_step(const TermSet& from, const TransitionLabel& label,
                           CalculusMode mode) {
  TermSet out;
  for (const auto& s : from) {
    if (label.kind == TransitionLabel::MsgIn) {
      // Probe with the requested name directly.
      CanonicalProcess c = canonicalize(s);
      for (std::size_t i = 0; i < c.comps.size(); ++i) {
        if (c.comps[i].body->op != Op::Abs) continue;
        std::vector<Component> next = residue(c.comps, i, i);
        append_components(next, instantiate(c.comps[i].body->a, label.name));
        out.insert(assemble_components(std::move(next)));
      }
      continue;
    }
    for (auto& [l, t] : labelled_transitions(s, mode, label.kind == TransitionLabel::Tau))
      if (label_matches(label, l)) out.insert(t);
  }
  return out;
}

inline ReachResult star_of_set(const TermSet& from, Fuel fuel, CalculusMode mode) {
  ReachResult res;
  for (const auto& s : from) {
    ReachResult r = reduce_star(s, fuel, mode);
    res.complete = res.complete && r.complete;
    for (const auto& t : r.states) res.states.insert(t);
  }
  return res;
}

}  // namespace detail

// P ==mu==> P'  is  P ==> -mu-> ==> P'.
inline ReachResult weak_transition(const TermPtr& p, const TransitionLabel& label,
                                   Fuel fuel,
                                   CalculusMode mode = CalculusMode::Async) {
  ReachResult pre = reduce_star(p, fuel, mode);
  TermSet mid = detail::strong_step(pre.states, label, mode);
  ReachResult post = detail::star_of_set(mid, fuel, mode);
  post.complete = post.complete && pre.complete;
  return post;
}

// Stuttering closure for a capability: for `open n` it is plain ==>; for
// `in n` it is the chains alternating weak `out n` / weak `in n` (and
// symmetrically for `out n`). Always contains p itself (the one-state chain).
inline ReachResult stutter_closure(const TermPtr& p, Capability cap, Fuel fuel,
                                   CalculusMode mode = CalculusMode::Async) {
  const Name* n = std::get_if<Name>(&cap.target);
  if (!n) throw std::invalid_argument("stutter_closure: capability target must be a name");
  if (cap.kind == CapKind::Open) return reduce_star(p, fuel, mode);
  TransitionLabel first = TransitionLabel::capability(
      cap.kind == CapKind::In ? CapKind::Out : CapKind::In, *n);
  TransitionLabel second = TransitionLabel::capability(cap.kind, *n);

  ReachResult res;
  TermPtr start = canonical_term(p);
  res.states.insert(start);
  TermSet frontier{start};
  while (!frontier.empty()) {
    ReachResult pre = detail::star_of_set(frontier, fuel, mode);
    TermSet mid = detail::strong_step(pre.states, first, mode);
    ReachResult mid2 = detail::star_of_set(mid, fuel, mode);
    TermSet stepped = detail::strong_step(mid2.states, second, mode);
    ReachResult post = detail::star_of_set(stepped, fuel, mode);
    res.complete = res.complete && pre.complete && mid2.complete && post.complete;
    TermSet next;
    for (const auto& t : post.states) {
      if (res.states.count(t)) continue;
      if (res.states.size() >= fuel.max_states) {
        res.complete = false;
        return res;
      }
      res.states.insert(t);
      next.insert(t);
    }
    frontier.swap(next);
  }
  return res;
}

inline ReachResult stutter_closure_set(const TermSet& from, Capability cap,
                                       Fuel fuel, CalculusMode mode) {
  ReachResult res;
  for (const auto& s : from) {
    ReachResult r = stutter_closure(s, cap, fuel, mode);
    res.complete = res.complete && r.complete;
    for (const auto& t : r.states) res.states.insert(t);
  }
  return res;
}

struct BarbResult {
  NameSet names;
  bool complete = true;
};

// P barbs on n iff P ==> n[P'] | P''.
inline BarbResult barbs(const TermPtr& p, Fuel fuel,
                        CalculusMode mode = CalculusMode::Async) {
  BarbResult out;
  ReachResult r = reduce_star(p, fuel, mode);
  out.complete = r.complete;
  for (const auto& s : r.states)
    for (const auto& c : canonicalize(s).comps)
      if (c.body->op == Op::Amb)
        if (const Name* n = std::get_if<Name>(&c.body->head)) out.names.insert(*n);
  return out;
}

// Deterministic evolution: P ~> Q iff P -> Q and every other reduct is blocked
// or == Q. When every reduct is blocked the canonically least one is returned
// (the chain ends there).
inline std::optional<Reduct> det_step(const TermPtr& p,
                                      CalculusMode mode = CalculusMode::Async) {
  std::vector<Reduct> reducts = reduce_once(p, mode);
  if (reducts.empty()) return std::nullopt;
  if (reducts.size() == 1) return reducts[0];
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < reducts.size(); ++i)
    if (!reduce_once(reducts[i].state, mode).empty()) live.push_back(i);
  if (live.size() > 1) return std::nullopt;
  if (live.size() == 1) return reducts[live[0]];
  std::size_t best = 0;
  for (std::size_t i = 1; i < reducts.size(); ++i)
    if (term_cmp(reducts[i].state, reducts[best].state) < 0) best = i;
  return reducts[best];
}

}  // namespace ambient
