#pragma once

// Test support: deterministic random term generators, an axiom-rewrite oracle
// for structural congruence (applies the defining == laws at random positions,
// in both directions), an eta-rewrite constructor, small-term enumeration, and
// independent reference implementations used as oracles.

#include <functional>
#include <map>
#include <tuple>
#include <random>
#include <vector>

#include "ambient/ambient.hpp"

namespace ts {

using namespace ambient;

using Rng = std::mt19937_64;

inline Name pool_name(std::size_t i) {
  static const char* names[] = {"a", "b", "c", "n", "m", "h", "k", "d"};
  return name(names[i % 8]);
}

struct GenOpts {
  CalculusMode mode = CalculusMode::Async;
  std::size_t max_depth = 5;
  std::size_t num_names = 4;
  bool allow_repl = true;
  std::size_t max_abs_nesting = 2;
  bool maifs_only = false;  // replication never under a guard
};

inline TermPtr gen_term(Rng& rng, const GenOpts& o, std::size_t depth = 0,
                        std::uint32_t binders = 0, bool under_guard = false) {
  auto pick_nov = [&]() -> NameOrVar {
    if (binders > 0 && rng() % 3 == 0)
      return Var{static_cast<std::uint32_t>(rng() % binders)};
    return pool_name(rng() % o.num_names);
  };
  bool at_leaf = depth >= o.max_depth;
  for (;;) {
    int k = static_cast<int>(rng() % 16);
    if (at_leaf) k = k % 3;  // Nil or Msg
    switch (k) {
      case 0:
        return nil();
      case 1:
      case 2:
        return o.mode == CalculusMode::Sync
                   ? msg(pick_nov(), at_leaf ? nil()
                                             : gen_term(rng, o, depth + 1,
                                                        binders, true))
                   : msg(pick_nov());
      case 3:
      case 4:
      case 5:
        return par(gen_term(rng, o, depth + 1, binders, under_guard),
                   gen_term(rng, o, depth + 1, binders, under_guard));
      case 6:
      case 7:
        if (!o.allow_repl || (o.maifs_only && under_guard)) continue;
        return repl(gen_term(rng, o, depth + 1, binders, under_guard));
      case 8:
      case 9:
      case 10: {
        CapKind c = static_cast<CapKind>(rng() % 3);
        return prefix(c, pick_nov(), gen_term(rng, o, depth + 1, binders, true));
      }
      case 11:
      case 12:
      case 13:
        return amb(pick_nov(), gen_term(rng, o, depth + 1, binders, under_guard));
      default:
        if (binders >= o.max_abs_nesting) continue;
        return abs(gen_term(rng, o, depth + 1, binders + 1, true));
    }
  }
}

// Generates a term that very likely has redexes: plants one to three
// interaction gadgets (open/in/out/com pairs over small bodies) alongside
// generated bystanders, optionally nested into ambients.
inline TermPtr gen_reducible(Rng& rng, const GenOpts& opts) {
  GenOpts small = opts;
  small.max_depth = 3;
  auto body = [&]() { return gen_term(rng, small); };
  auto gadget = [&]() -> TermPtr {
    Name n = pool_name(rng() % opts.num_names);
    Name m = pool_name(rng() % opts.num_names);
    switch (rng() % 4) {
      case 0: return par(prefix(CapKind::Open, n, body()), amb(n, body()));
      case 1: return par(amb(n, prefix(CapKind::In, m, body())), amb(m, body()));
      case 2:
        return amb(m, par(amb(n, prefix(CapKind::Out, m, body())), body()));
      default:
        return opts.mode == CalculusMode::Sync
                   ? par(msg(n, body()), abs(body()))
                   : par(msg(n), abs(gen_term(rng, small, 0, 1, true)));
    }
  };
  TermPtr t = gadget();
  std::size_t extra = rng() % 3;
  for (std::size_t i = 0; i < extra; ++i)
    t = rng() % 2 ? par(t, gadget()) : par(t, body());
  if (rng() % 3 == 0) t = amb(pool_name(rng() % opts.num_names), t);
  return t;
}

// ---- axiom rewriting (oracle for ==) ---------------------------------------

namespace detail_ts {

// Collects every subterm position as a (node, rebuild) pair.
struct Position {
  TermPtr node;
  std::function<TermPtr(TermPtr)> rebuild;
};

inline void positions(const TermPtr& t,
                      const std::function<TermPtr(TermPtr)>& wrap,
                      std::vector<Position>& out) {
  out.push_back({t, wrap});
  if (t->a)
    positions(t->a, [t, wrap](TermPtr r) {
      return wrap(Term::make(t->op, t->cap, t->head, std::move(r), t->b, false));
    }, out);
  if (t->b)
    positions(t->b, [t, wrap](TermPtr r) {
      return wrap(Term::make(t->op, t->cap, t->head, t->a, std::move(r), false));
    }, out);
}

// All single-step rewrites of `t` at its root under the == axioms, both
// orientations.
inline std::vector<TermPtr> axiom_alternatives(const TermPtr& t) {
  std::vector<TermPtr> out;
  out.push_back(par(t, nil()));  // P -> P|0
  out.push_back(par(nil(), t));
  if (t->op == Op::Par) {
    if (t->b->op == Op::Nil) out.push_back(t->a);  // P|0 -> P
    if (t->a->op == Op::Nil) out.push_back(t->b);
    out.push_back(par(t->b, t->a));  // commutativity
    if (t->a->op == Op::Par)
      out.push_back(par(t->a->a, par(t->a->b, t->b)));  // (P|Q)|R -> P|(Q|R)
    if (t->b->op == Op::Par)
      out.push_back(par(par(t->a, t->b->a), t->b->b));  // P|(Q|R) -> (P|Q)|R
    if (t->a->op == Op::Repl && t->b->op == Op::Repl)
      out.push_back(repl(par(t->a->a, t->b->a)));  // !P|!Q -> !(P|Q)
    if (t->a->op == Op::Repl && term_equal(t->a->a, t->b))
      out.push_back(t->a);  // !P|P -> !P
  }
  if (t->op == Op::Repl) {
    out.push_back(par(t, t->a));  // !P -> !P|P
    out.push_back(repl(repl(t->a)));  // !P -> !!P
    if (t->a->op == Op::Nil) out.push_back(nil());      // !0 -> 0
    if (t->a->op == Op::Repl) out.push_back(t->a);      // !!P -> !P
    if (t->a->op == Op::Par)
      out.push_back(par(repl(t->a->a), repl(t->a->b)));  // !(P|Q) -> !P|!Q
  }
  if (t->op == Op::Nil) out.push_back(repl(nil()));  // 0 -> !0
  return out;
}

}  // namespace detail_ts

// Applies `steps` random == axiom rewrites at random positions.
inline TermPtr random_equiv_rewrite(Rng& rng, TermPtr t, std::size_t steps) {
  for (std::size_t s = 0; s < steps; ++s) {
    std::vector<detail_ts::Position> pos;
    detail_ts::positions(t, [](TermPtr r) { return r; }, pos);
    for (int attempt = 0; attempt < 16; ++attempt) {
      auto& p = pos[rng() % pos.size()];
      auto alts = detail_ts::axiom_alternatives(p.node);
      if (alts.empty()) continue;
      t = p.rebuild(alts[rng() % alts.size()]);
      break;
    }
  }
  return t;
}

// Shifts free indices >= cutoff up by one (a binder is being inserted).
inline TermPtr shift_up(const TermPtr& t, std::uint32_t cutoff) {
  return ambient::detail::map_heads(
      t, 0, [&](const NameOrVar& h, std::uint32_t depth) -> NameOrVar {
        if (const Var* v = std::get_if<Var>(&h))
          if (v->index >= cutoff + depth) return Var{v->index + 1};
        return h;
      });
}

// (x)P -> (x)((x)P | <x>): the eta law right-to-left, at the root.
inline TermPtr eta_expand(const TermPtr& absTerm) {
  TermPtr shifted = shift_up(absTerm, 0);
  return abs(par(shifted, msg(Var{0})));
}

// Applies random eta-law rewrites (either orientation) at random abstraction
// positions; result is ==_E-equal, hence intensionally bisimilar, to input.
inline TermPtr random_eta_rewrite(Rng& rng, TermPtr t, std::size_t steps) {
  for (std::size_t s = 0; s < steps; ++s) {
    std::vector<detail_ts::Position> pos;
    detail_ts::positions(t, [](TermPtr r) { return r; }, pos);
    for (int attempt = 0; attempt < 24; ++attempt) {
      auto& p = pos[rng() % pos.size()];
      if (p.node->op != Op::Abs) continue;
      if (rng() % 2 == 0) {
        t = p.rebuild(eta_expand(p.node));
        break;
      }
      TermSet contracted = eta_step(p.node);
      if (contracted.empty()) continue;
      t = p.rebuild(*contracted.begin());
      break;
    }
  }
  return t;
}

// Mutates one node, usually changing the == class.
inline TermPtr perturb(Rng& rng, const TermPtr& t) {
  std::vector<detail_ts::Position> pos;
  detail_ts::positions(t, [](TermPtr r) { return r; }, pos);
  for (int attempt = 0; attempt < 64; ++attempt) {
    auto& p = pos[rng() % pos.size()];
    const TermPtr& n = p.node;
    switch (n->op) {
      case Op::Nil:
        return p.rebuild(msg(pool_name(rng() % 3)));
      case Op::Msg:
        return p.rebuild(n->a ? msg(pool_name(rng() % 3), n->a) : nil());
      case Op::Prefix:
        return p.rebuild(prefix(static_cast<CapKind>((static_cast<int>(n->cap) + 1) % 3),
                                n->head, n->a));
      case Op::Amb:
        return p.rebuild(prefix(CapKind::In, n->head, n->a));
      case Op::Repl:
        return p.rebuild(n->a->op == Op::Nil ? msg(pool_name(0)) : n->a);
      default:
        continue;
    }
  }
  return msg(pool_name(0));
}

// Random closed formulas over the core connectives and the non-replicated
// derived modalities. Replicated modalities and guarantee are left out: the
// former need degree-selective arguments, the latter is three-valued by
// design; both are exercised by dedicated tests.
inline FormulaPtr gen_formula(Rng& rng, std::size_t num_names,
                              std::size_t depth = 0,
                              std::vector<Name>* bound = nullptr) {
  std::vector<Name> local;
  if (!bound) bound = &local;
  auto eta = [&]() -> FEta {
    if (!bound->empty() && rng() % 4 == 0)
      return FVar{(*bound)[rng() % bound->size()]};
    return pool_name(rng() % num_names);
  };
  bool leaf = depth >= 3;
  switch (rng() % (leaf ? 4 : 14)) {
    case 0: return f_true();
    case 1: return f_void();
    case 2: return f_msg(eta());
    case 3: return f_free_name(eta());
    case 4: return f_not(gen_formula(rng, num_names, depth + 1, bound));
    case 5:
      return f_or(gen_formula(rng, num_names, depth + 1, bound),
                  gen_formula(rng, num_names, depth + 1, bound));
    case 6: {
      Name x = name("fx" + std::to_string(rng() % 2));
      bound->push_back(x);
      FormulaPtr body = gen_formula(rng, num_names, depth + 1, bound);
      bound->pop_back();
      return f_forall(x, body);
    }
    case 7: return f_sometime(gen_formula(rng, num_names, depth + 1, bound));
    case 8: return f_amb(eta(), gen_formula(rng, num_names, depth + 1, bound));
    case 9:
      return f_par(gen_formula(rng, num_names, depth + 1, bound),
                   gen_formula(rng, num_names, depth + 1, bound));
    case 10: {
      CapKind k = static_cast<CapKind>(rng() % 3);
      FormulaPtr body = gen_formula(rng, num_names, depth + 1, bound);
      return rng() % 2 ? f_cap_dia(k, eta(), body) : f_cap_box(k, eta(), body);
    }
    case 11: {
      FormulaPtr body = gen_formula(rng, num_names, depth + 1, bound);
      return rng() % 2 ? f_in_dia(eta(), body) : f_in_box(eta(), body);
    }
    case 12: return f_at(gen_formula(rng, num_names, depth + 1, bound), eta());
    default: return f_amb(eta(), gen_formula(rng, num_names, depth + 1, bound));
  }
}

// Structural set equality (the container's operator== would compare the
// shared_ptr values, not the terms).
inline bool term_set_equal(const TermSet& a, const TermSet& b) {
  if (a.size() != b.size()) return false;
  for (const auto& t : a)
    if (!b.count(t)) return false;
  return true;
}

// ---- independent oracles ----------------------------------------------------

// Reference free-name computation by plain structural induction, kept separate
// from the library walk.
inline void oracle_fn(const TermPtr& t, NameSet& out) {
  if (!t) return;
  switch (t->op) {
    case Op::Nil: break;
    case Op::Par:
      oracle_fn(t->a, out);
      oracle_fn(t->b, out);
      break;
    case Op::Repl:
    case Op::Abs:
      oracle_fn(t->a, out);
      break;
    case Op::Prefix:
    case Op::Amb:
    case Op::Msg:
      if (const Name* n = std::get_if<Name>(&t->head)) out.insert(*n);
      if (t->a) oracle_fn(t->a, out);
      break;
  }
}

// Bounded search for an == proof by axiom rewriting; used to double-check
// perturbations that happen to stay in the same class.
inline bool equiv_provable(const TermPtr& from, const TermPtr& to,
                           std::size_t max_states, std::size_t max_size) {
  TermSet seen;
  std::vector<TermPtr> frontier{from};
  seen.insert(from);
  TermPtr target = canonical_term(to);
  while (!frontier.empty() && seen.size() < max_states) {
    std::vector<TermPtr> next;
    for (const auto& cur : frontier) {
      if (term_equal(canonical_term(cur), target)) return true;
      std::vector<detail_ts::Position> pos;
      detail_ts::positions(cur, [](TermPtr r) { return r; }, pos);
      for (auto& p : pos)
        for (auto& alt : detail_ts::axiom_alternatives(p.node)) {
          TermPtr r = p.rebuild(alt);
          if (term_size(r) > max_size) continue;
          if (seen.insert(r).second) next.push_back(r);
        }
    }
    frontier.swap(next);
  }
  return false;
}

// All (asynchronous-mode) terms with exactly `nodes` nodes over the first
// `num_names` pool names, under `binders` enclosing binders. Memoized.
inline const std::vector<TermPtr>& terms_of_size(std::size_t nodes,
                                                 std::size_t num_names,
                                                 std::uint32_t binders) {
  static std::map<std::tuple<std::size_t, std::size_t, std::uint32_t>,
                  std::vector<TermPtr>>
      memo;
  auto key = std::make_tuple(nodes, num_names, binders);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;

  std::vector<NameOrVar> heads;
  for (std::size_t i = 0; i < num_names; ++i) heads.push_back(pool_name(i));
  for (std::uint32_t v = 0; v < binders; ++v) heads.push_back(Var{v});

  std::vector<TermPtr> out;
  if (nodes == 1) {
    out.push_back(nil());
    for (const auto& h : heads) out.push_back(msg(h));
  } else if (nodes > 1) {
    for (const auto& sub : terms_of_size(nodes - 1, num_names, binders)) {
      out.push_back(repl(sub));
      for (const auto& h : heads) {
        out.push_back(amb(h, sub));
        out.push_back(prefix(CapKind::In, h, sub));
        out.push_back(prefix(CapKind::Out, h, sub));
        out.push_back(prefix(CapKind::Open, h, sub));
      }
    }
    for (const auto& sub : terms_of_size(nodes - 1, num_names, binders + 1))
      out.push_back(abs(sub));
    for (std::size_t left = 1; left + 1 < nodes; ++left)
      for (const auto& a : terms_of_size(left, num_names, binders))
        for (const auto& b : terms_of_size(nodes - 1 - left, num_names, binders))
          out.push_back(par(a, b));
  }
  return memo.emplace(key, std::move(out)).first->second;
}

}  // namespace ts
