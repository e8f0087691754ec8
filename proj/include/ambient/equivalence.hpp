#pragma once

// Intensional bisimilarity, decided through its inductive characterization:
// clause dispatch on the canonical form of the left process, with stuttering
// closures for capability prefixes and weak message probing for abstractions.
// Exact (total) on finite processes; fueled elsewhere, where incomplete
// closures yield Unknown, never False. Cycles in the co-inductive search are
// read as True-pending (greatest fixpoint), with results cached only once the
// strongly connected portion of the search that produced them has closed.
//
// Also here: the finite approximants of the syntax-based bisimilarity, barbed
// bisimilarity on joint reachability graphs, the measure prefilter report, and
// logical equivalence with its axiomatization fast path (eta-congruence on
// MA^s_IF, structural congruence on synchronous MA^ss_IF).

#include <limits>
#include <map>
#include <sstream>

#include "ambient/frozen.hpp"
#include "ambient/measure.hpp"
#include "ambient/print.hpp"
#include "ambient/semantics.hpp"

namespace ambient {

struct BisimConfig {
  Fuel fuel;
  CalculusMode mode = CalculusMode::Async;
  std::uint64_t fresh_seed = 0;
  bool explain = false;
};

namespace detail {

struct PairKey {
  TermPtr a, b;  // ordered: term_cmp(a, b) <= 0
};
struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const {
    return mix(k.a->hash, k.b->hash);
  }
};
struct PairKeyEq {
  bool operator()(const PairKey& x, const PairKey& y) const {
    return term_equal(x.a, y.a) && term_equal(x.b, y.b);
  }
};

inline PairKey make_key(TermPtr p, TermPtr q) {
  if (term_cmp(p, q) <= 0) return {std::move(p), std::move(q)};
  return {std::move(q), std::move(p)};
}

constexpr std::size_t kNoDep = std::numeric_limits<std::size_t>::max();

}  // namespace detail

class BisimChecker {
 public:
  explicit BisimChecker(BisimConfig cfg) : cfg_(cfg) {}

  Verdict check(const TermPtr& p, const TermPtr& q) {
    if (!is_closed(p) || !is_closed(q))
      throw std::invalid_argument("bisim: open term");
    if (!mode_consistent(p, cfg_.mode) || !mode_consistent(q, cfg_.mode))
      throw std::invalid_argument("bisim: term does not match mode");
    return rec(canonical_term(p), canonical_term(q)).v;
  }

  const std::vector<std::string>& explanation() const { return log_; }

 private:
  struct Res {
    Verdict v;
    std::size_t dep = detail::kNoDep;
  };

  BisimConfig cfg_;
  std::unordered_map<detail::PairKey, Verdict, detail::PairKeyHash,
                     detail::PairKeyEq>
      cache_;
  std::unordered_map<detail::PairKey, std::size_t, detail::PairKeyHash,
                     detail::PairKeyEq>
      on_stack_;
  std::size_t stack_depth_ = 0;
  std::size_t pairs_explored_ = 0;
  std::vector<std::string> log_;

  // per-checker closure memoization
  struct CapKey {
    TermPtr t;
    CapKind k;
    Name n;
  };
  struct CapKeyHash {
    std::size_t operator()(const CapKey& c) const {
      return detail::mix(detail::mix(c.t->hash, static_cast<std::size_t>(c.k)),
                         c.n.id);
    }
  };
  struct CapKeyEq {
    bool operator()(const CapKey& x, const CapKey& y) const {
      return x.k == y.k && x.n == y.n && term_equal(x.t, y.t);
    }
  };
  std::unordered_map<CapKey, ReachResult, CapKeyHash, CapKeyEq> stutter_memo_;
  std::unordered_map<TermPtr, ReachResult, TermHash, TermEq> star_memo_;

  const ReachResult& stars(const TermPtr& t) {
    auto it = star_memo_.find(t);
    if (it != star_memo_.end()) return it->second;
    return star_memo_.emplace(t, reduce_star(t, cfg_.fuel, cfg_.mode)).first->second;
  }
  const ReachResult& stutters(const TermPtr& t, CapKind k, Name n) {
    CapKey key{t, k, n};
    auto it = stutter_memo_.find(key);
    if (it != stutter_memo_.end()) return it->second;
    ReachResult r = stutter_closure(t, Capability{k, n}, cfg_.fuel, cfg_.mode);
    return stutter_memo_.emplace(key, std::move(r)).first->second;
  }

  void note(const TermPtr& p, const TermPtr& q, const char* clause,
            const Verdict& v) {
    if (!cfg_.explain) return;
    std::ostringstream os;
    for (std::size_t i = 0; i < stack_depth_; ++i) os << "  ";
    os << clause << ": (" << print_process(p) << " , " << print_process(q)
       << ") -> " << to_string(v);
    log_.push_back(os.str());
  }

  Res rec(const TermPtr& p, const TermPtr& q) {
    if (term_equal(p, q)) return {Verdict::yes()};
    detail::PairKey key = detail::make_key(p, q);
    if (auto it = cache_.find(key); it != cache_.end()) return {it->second};
    if (auto it = on_stack_.find(key); it != on_stack_.end())
      return {Verdict::yes(), it->second};  // co-inductive assumption
    if (++pairs_explored_ > cfg_.fuel.max_states)
      return {Verdict::unknown("bisim pair budget exhausted at " +
                               std::to_string(cfg_.fuel.max_states) + " states")};
    if (stack_depth_ > 2048)
      return {Verdict::unknown("bisim recursion depth exhausted")};
    std::size_t my = stack_depth_++;
    on_stack_.emplace(key, my);
    Res r = dispatch(p, q);
    on_stack_.erase(key);
    --stack_depth_;
    if (r.dep >= my) {  // no dependency on frames outside this subtree
      cache_.emplace(key, r.v);
      r.dep = detail::kNoDep;
    }
    return r;
  }

  static void merge_dep(Res& acc, std::size_t dep) {
    acc.dep = std::min(acc.dep, dep);
  }

  // exists over a set of candidate terms, each compared against `target`
  Res exists_bisim(const TermSet& candidates, bool complete, const TermPtr& target,
                   const char* what) {
    Res out{Verdict::no()};
    bool unknown = false;
    for (const auto& c : candidates) {
      Res r = rec(c, target);
      if (r.v.v == Verdict::True) {
        return {Verdict::yes(), r.dep};
      }
      merge_dep(out, r.dep);
      if (r.v.v == Verdict::Unknown) unknown = true;
    }
    if (unknown || !complete)
      return {Verdict::unknown(std::string(what) + " not settled within fuel (" +
                               std::to_string(cfg_.fuel.max_states) + " states, depth " +
                               std::to_string(cfg_.fuel.max_depth) + ")"),
              out.dep};
    return out;
  }

  Res dispatch(const TermPtr& p, const TermPtr& q) {
    CanonicalProcess cp = canonicalize(p);
    CanonicalProcess cq = canonicalize(q);

    if (cp.comps.empty()) {  // clause: 0 ~ Q iff Q == 0
      Verdict v = cq.comps.empty() ? Verdict::yes() : Verdict::no();
      note(p, q, "nil", v);
      return {v};
    }
    if (cp.comps.size() >= 2) return clause_par(p, cp, q, cq);
    const Component& c = cp.comps[0];
    if (c.replicated) return clause_repl(p, c.body, q, cq);
    switch (c.body->op) {
      case Op::Amb: return clause_amb(p, c.body, q, cq);
      case Op::Prefix: return clause_prefix(p, c.body, q, cq);
      case Op::Msg: return clause_msg(p, c.body, q, cq);
      case Op::Abs: return clause_abs(p, c.body, q, cq);
      default: break;
    }
    return {Verdict::unknown("unreachable shape")};
  }

  // clause 2: n[P'] ~ Q iff Q == n[Q'] with P' ~ Q'
  Res clause_amb(const TermPtr& p, const TermPtr& pa, const TermPtr& q,
                 const CanonicalProcess& cq) {
    if (cq.comps.size() != 1 || cq.comps[0].replicated ||
        cq.comps[0].body->op != Op::Amb ||
        !nov_equal(cq.comps[0].body->head, pa->head)) {
      note(p, q, "ambient (shape)", Verdict::no());
      return {Verdict::no()};
    }
    Res r = rec(pa->a, cq.comps[0].body->a);
    note(p, q, "ambient", r.v);
    return r;
  }

  // clause 6: <n> ~ Q iff Q == <n>; synchronous: mutual weak matching of the
  // continuations
  Res clause_msg(const TermPtr& p, const TermPtr& pm, const TermPtr& q,
                 const CanonicalProcess& cq) {
    bool shape = cq.comps.size() == 1 && !cq.comps[0].replicated &&
                 cq.comps[0].body->op == Op::Msg &&
                 nov_equal(cq.comps[0].body->head, pm->head);
    if (!shape) {
      note(p, q, "message (shape)", Verdict::no());
      return {Verdict::no()};
    }
    if (cfg_.mode == CalculusMode::Async) {
      note(p, q, "message", Verdict::yes());
      return {Verdict::yes()};
    }
    const TermPtr& pc = pm->a;
    const TermPtr& qc = cq.comps[0].body->a;
    const ReachResult& sq = stars(canonical_term(qc));
    Res fwd = exists_bisim(sq.states, sq.complete, canonical_term(pc), "message continuation");
    if (fwd.v.v == Verdict::False) {
      note(p, q, "message continuation", fwd.v);
      return fwd;
    }
    const ReachResult& sp = stars(canonical_term(pc));
    Res bwd = exists_bisim(sp.states, sp.complete, canonical_term(qc), "message continuation");
    Res out = and2(fwd, bwd);
    note(p, q, "message continuation", out.v);
    return out;
  }

  static Res and2(const Res& a, const Res& b) {
    Res out;
    out.dep = std::min(a.dep, b.dep);
    if (a.v.v == Verdict::False || b.v.v == Verdict::False)
      out.v = Verdict::no();
    else if (a.v.v == Verdict::True && b.v.v == Verdict::True)
      out.v = Verdict::yes();
    else
      out.v = a.v.v == Verdict::Unknown ? a.v : b.v;
    return out;
  }

  // clause 5: cap.P' ~ Q iff Q == cap.Q', P' Rcap~ Q' and Q' Rcap~ P'
  Res clause_prefix(const TermPtr& p, const TermPtr& pp, const TermPtr& q,
                    const CanonicalProcess& cq) {
    bool shape = cq.comps.size() == 1 && !cq.comps[0].replicated &&
                 cq.comps[0].body->op == Op::Prefix &&
                 cq.comps[0].body->cap == pp->cap &&
                 nov_equal(cq.comps[0].body->head, pp->head);
    if (!shape) {
      note(p, q, "prefix (shape)", Verdict::no());
      return {Verdict::no()};
    }
    Name n = std::get<Name>(pp->head);
    TermPtr pbody = canonical_term(pp->a);
    TermPtr qbody = canonical_term(cq.comps[0].body->a);
    const ReachResult& sp = stutters(pbody, pp->cap, n);
    Res fwd = exists_bisim(sp.states, sp.complete, qbody, "stutter match");
    if (fwd.v.v == Verdict::False) {
      note(p, q, "prefix", fwd.v);
      return fwd;
    }
    const ReachResult& sq = stutters(qbody, pp->cap, n);
    Res bwd = exists_bisim(sq.states, sq.complete, pbody, "stutter match");
    Res out = and2(fwd, bwd);
    note(p, q, "prefix", out.v);
    return out;
  }

  // clause 7 (asynchronous): (x)P' ~ Q iff Q == (x)Q' and, for a fresh m,
  // Q|<m> ==> ~ P'{m/x} and (x)P' | <m> ==> ~ Q'{m/x}.
  // Synchronous replacement: for every probe n, Q'{n/x} ==> ~ P'{n/x} and
  // P'{n/x} ==> ~ Q'{n/x}.
  Res clause_abs(const TermPtr& p, const TermPtr& pa, const TermPtr& q,
                 const CanonicalProcess& cq) {
    bool shape = cq.comps.size() == 1 && !cq.comps[0].replicated &&
                 cq.comps[0].body->op == Op::Abs;
    if (!shape) {
      note(p, q, "abstraction (shape)", Verdict::no());
      return {Verdict::no()};
    }
    const TermPtr& qa = cq.comps[0].body;
    NameSet avoid = free_names(p);
    for (Name n : free_names(q)) avoid.insert(n);
    if (cfg_.mode == CalculusMode::Async) {
      Name m = fresh_name(avoid, "m", cfg_.fresh_seed);
      TermPtr pm = canonical_term(instantiate(pa->a, m));
      TermPtr qm = canonical_term(instantiate(qa->a, m));
      const ReachResult& sq = stars(canonical_term(par(q, msg(m))));
      Res fwd = exists_bisim(sq.states, sq.complete, pm, "input match");
      if (fwd.v.v == Verdict::False) {
        note(p, q, "abstraction", fwd.v);
        return fwd;
      }
      const ReachResult& sp = stars(canonical_term(par(p, msg(m))));
      Res bwd = exists_bisim(sp.states, sp.complete, qm, "input match");
      Res out = and2(fwd, bwd);
      note(p, q, "abstraction", out.v);
      return out;
    }
    NameSet probes = avoid;
    probes.insert(fresh_name(avoid, "m", cfg_.fresh_seed));
    Res acc{Verdict::yes()};
    for (Name n : probes) {
      TermPtr pn = canonical_term(instantiate(pa->a, n));
      TermPtr qn = canonical_term(instantiate(qa->a, n));
      const ReachResult& sq = stars(qn);
      Res fwd = exists_bisim(sq.states, sq.complete, pn, "input match");
      acc = and2(acc, fwd);
      if (acc.v.v == Verdict::False) break;
      const ReachResult& sp = stars(pn);
      Res bwd = exists_bisim(sp.states, sp.complete, qn, "input match");
      acc = and2(acc, bwd);
      if (acc.v.v == Verdict::False) break;
    }
    note(p, q, "abstraction (sync)", acc.v);
    return acc;
  }

  // clause 4: !g ~ Q iff Q == Pi !Qi | Pi Qj with every Qi, Qj ~ g and at
  // least one replicated part (only single g reaches here; composite bodies
  // canonicalize into several components and go through the Par clause).
  Res clause_repl(const TermPtr& p, const TermPtr& g, const TermPtr& q,
                  const CanonicalProcess& cq) {
    if (cq.comps.empty()) {
      note(p, q, "replication (shape)", Verdict::no());
      return {Verdict::no()};
    }
    bool has_repl = false;
    for (const auto& c : cq.comps) has_repl = has_repl || c.replicated;
    if (!has_repl) {
      note(p, q, "replication (no replicated part)", Verdict::no());
      return {Verdict::no()};
    }
    Res acc{Verdict::yes()};
    for (const auto& c : cq.comps) {
      acc = and2(acc, rec(g, c.body));
      if (acc.v.v == Verdict::False) break;
    }
    note(p, q, "replication", acc.v);
    return acc;
  }


  // clause 3: P1|P2 ~ Q iff Q splits as Q1|Q2 with Pi ~ Qi. P1 is the first
  // canonical component; Q1 candidates follow the component structure, with
  // replicated components free to serve both sides and to emit plain copies.
  Res clause_par(const TermPtr& p, const CanonicalProcess& cp, const TermPtr& q,
                 const CanonicalProcess& cq) {
    const Component& head = cp.comps[0];
    std::vector<Component> rest(cp.comps.begin() + 1, cp.comps.end());
    TermPtr p2 = assemble_components(rest);

    Res out{Verdict::no()};
    bool unknown = false;

    if (!head.replicated) {
      // Q1 is a single plain component or one emitted copy of a replicated one.
      for (std::size_t j = 0; j < cq.comps.size(); ++j) {
        Res r1 = rec(head.body, cq.comps[j].body);
        merge_dep(out, r1.dep);
        if (r1.v.v == Verdict::Unknown) unknown = true;
        if (r1.v.v != Verdict::True) continue;
        std::vector<Component> qrest;
        for (std::size_t k = 0; k < cq.comps.size(); ++k)
          if (k != j || cq.comps[k].replicated) qrest.push_back(cq.comps[k]);
        Res r2 = rec(p2, assemble_components(std::move(qrest)));
        merge_dep(out, r2.dep);
        if (r2.v.v == Verdict::True) {
          Res ok{Verdict::yes(), std::min(r1.dep, r2.dep)};
          note(p, q, "parallel", ok.v);
          return ok;
        }
        if (r2.v.v == Verdict::Unknown) unknown = true;
      }
      if (unknown) out.v = Verdict::unknown("parallel split not settled");
      note(p, q, "parallel", out.v);
      return out;
    }

    // head is !g: Q1 collects every replicated component bisimilar to g plus a
    // subset of the bisimilar plain components; replicated ones may stay
    // available to Q2 as well.
    std::vector<std::size_t> repl_g, plain_g;
    for (std::size_t j = 0; j < cq.comps.size(); ++j) {
      Res r = rec(head.body, cq.comps[j].body);
      merge_dep(out, r.dep);
      if (r.v.v == Verdict::Unknown) unknown = true;
      if (r.v.v != Verdict::True) continue;
      (cq.comps[j].replicated ? repl_g : plain_g).push_back(j);
    }
    if (repl_g.empty()) {
      if (unknown) out.v = Verdict::unknown("parallel split not settled");
      note(p, q, "parallel (no replicated match)", out.v);
      return out;
    }
    // choose which bisimilar plain components Q1 absorbs, and which bisimilar
    // replicated components remain visible to Q2
    std::size_t pn = plain_g.size(), rn = repl_g.size();
    for (std::size_t pmask = 0; pmask < (std::size_t{1} << pn); ++pmask) {
      for (std::size_t rmask = 0; rmask < (std::size_t{1} << rn); ++rmask) {
        std::vector<Component> qrest;
        for (std::size_t k = 0; k < cq.comps.size(); ++k) {
          bool absorbed_plain = false;
          for (std::size_t b = 0; b < pn; ++b)
            if (plain_g[b] == k && (pmask >> b & 1)) absorbed_plain = true;
          bool hidden_repl = false;
          for (std::size_t b = 0; b < rn; ++b)
            if (repl_g[b] == k && !(rmask >> b & 1)) hidden_repl = true;
          if (absorbed_plain || hidden_repl) continue;
          qrest.push_back(cq.comps[k]);
        }
        Res r2 = rec(p2, assemble_components(std::move(qrest)));
        merge_dep(out, r2.dep);
        if (r2.v.v == Verdict::True) {
          Res ok{Verdict::yes(), std::min(out.dep, r2.dep)};
          note(p, q, "parallel (replicated head)", ok.v);
          return ok;
        }
        if (r2.v.v == Verdict::Unknown) unknown = true;
      }
    }
    if (unknown) out.v = Verdict::unknown("parallel split not settled");
    note(p, q, "parallel (replicated head)", out.v);
    return out;
  }

};

inline Verdict bisim(const TermPtr& p, const TermPtr& q, BisimConfig cfg = {}) {
  BisimChecker checker(cfg);
  return checker.check(p, q);
}

// ---- approximants -----------------------------------------------------------

// The i-th approximant of the syntax-based intensional bisimilarity, on finite
// processes, clauses applied in both directions.
class ApproxChecker {
 public:
  explicit ApproxChecker(CalculusMode mode = CalculusMode::Async) : mode_(mode) {
    if (mode_ != CalculusMode::Async)
      throw std::invalid_argument("approximants are defined on the asynchronous calculus");
  }

  bool approx(const TermPtr& p, const TermPtr& q, std::size_t i) {
    if (!classify(p).is_finite || !classify(q).is_finite)
      throw std::invalid_argument("approximant: non-finite input");
    return rec(canonical_term(p), canonical_term(q), i);
  }

  // stabilized value: constant from i = |p| + |q| + 2 on
  bool limit(const TermPtr& p, const TermPtr& q) {
    return approx(p, q, term_size(canonical_term(p)) +
                            term_size(canonical_term(q)) + 2);
  }

 private:
  CalculusMode mode_;
  struct Key {
    detail::PairKey pair;
    std::size_t i;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return detail::mix(detail::PairKeyHash()(k.pair), k.i);
    }
  };
  struct KeyEq {
    bool operator()(const Key& x, const Key& y) const {
      return x.i == y.i && detail::PairKeyEq()(x.pair, y.pair);
    }
  };
  std::unordered_map<Key, bool, KeyHash, KeyEq> memo_;

  static Fuel ample() { return Fuel{1u << 20, 1u << 20}; }

  bool rec(const TermPtr& p, const TermPtr& q, std::size_t i) {
    if (i == 0) return true;  // the universal relation
    if (term_equal(p, q)) return true;
    Key key{detail::make_key(p, q), i};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    memo_.emplace(key, true);  // cut off the (p,0)-style non-shrinking splits
    bool v = clauses(p, q, i) && clauses(q, p, i);
    memo_[key] = v;
    return v;
  }

  bool clauses(const TermPtr& p, const TermPtr& q, std::size_t i) {
    CanonicalProcess cp = canonicalize(p);
    CanonicalProcess cq = canonicalize(q);

    // clause 1: every split of p must be answered by a split of q
    if (cp.comps.size() >= 1) {
      std::size_t k = cp.comps.size();
      for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        std::vector<Component> left, right;
        for (std::size_t b = 0; b < k; ++b)
          (mask >> b & 1 ? left : right).push_back(cp.comps[b]);
        TermPtr p1 = assemble_components(std::move(left));
        TermPtr p2 = assemble_components(std::move(right));
        if (!exists_split(p1, p2, cq, i)) return false;
      }
    } else {
      // p == 0: q must also split into two void parts
      if (!exists_split(nil(), nil(), cq, i)) return false;
    }

    if (cp.comps.size() == 1 && !cp.comps[0].replicated) {
      const TermPtr& b = cp.comps[0].body;
      switch (b->op) {
        case Op::Prefix: {
          bool shape = cq.comps.size() == 1 && !cq.comps[0].replicated &&
                       cq.comps[0].body->op == Op::Prefix &&
                       cq.comps[0].body->cap == b->cap &&
                       nov_equal(cq.comps[0].body->head, b->head);
          if (!shape) return false;
          Name n = std::get<Name>(b->head);
          ReachResult clo = stutter_closure(cq.comps[0].body->a,
                                            Capability{b->cap, n}, ample(), mode_);
          for (const auto& t : clo.states)
            if (rec(canonical_term(b->a), t, i - 1)) return true;
          return false;
        }
        case Op::Msg:
          return cq.comps.size() == 1 && !cq.comps[0].replicated &&
                 cq.comps[0].body->op == Op::Msg &&
                 nov_equal(cq.comps[0].body->head, b->head);
        case Op::Abs: {
          bool shape = cq.comps.size() == 1 && !cq.comps[0].replicated &&
                       cq.comps[0].body->op == Op::Abs;
          if (!shape) return false;
          NameSet probes = free_names(p);
          for (Name n : free_names(q)) probes.insert(n);
          probes.insert(fresh_name(probes));
          for (Name n : probes) {
            ReachResult clo =
                reduce_star(par(canonical_term(q), msg(n)), ample(), mode_);
            TermPtr want = canonical_term(instantiate(b->a, n));
            bool matched = false;
            for (const auto& t : clo.states)
              if (rec(want, t, i - 1)) {
                matched = true;
                break;
              }
            if (!matched) return false;
          }
          return true;
        }
        case Op::Amb:
          return cq.comps.size() == 1 && !cq.comps[0].replicated &&
                 cq.comps[0].body->op == Op::Amb &&
                 nov_equal(cq.comps[0].body->head, b->head) &&
                 rec(canonical_term(b->a), canonical_term(cq.comps[0].body->a),
                     i - 1);
        default: break;
      }
    }
    return true;
  }

  bool exists_split(const TermPtr& p1, const TermPtr& p2,
                    const CanonicalProcess& cq, std::size_t i) {
    std::size_t k = cq.comps.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      std::vector<Component> left, right;
      for (std::size_t b = 0; b < k; ++b)
        (mask >> b & 1 ? left : right).push_back(cq.comps[b]);
      if (rec(p1, assemble_components(std::move(left)), i - 1) &&
          rec(p2, assemble_components(std::move(right)), i - 1))
        return true;
    }
    return false;
  }
};

inline bool approximant(const TermPtr& p, const TermPtr& q, std::size_t i) {
  ApproxChecker c;
  return c.approx(p, q, i);
}

inline bool approximant_limit(const TermPtr& p, const TermPtr& q) {
  ApproxChecker c;
  return c.limit(p, q);
}

// ---- barbed bisimilarity ----------------------------------------------------

// Greatest fixpoint on the joint weak-reachability graph: weak reduction
// matching plus equality of weak barb sets. Definite whenever both graphs are
// complete within fuel (always, for finite processes).
inline Verdict barbed_bisim(const TermPtr& p, const TermPtr& q, Fuel fuel,
                            CalculusMode mode = CalculusMode::Async) {
  if (!is_closed(p) || !is_closed(q))
    throw std::invalid_argument("barbed_bisim: open term");
  ReachResult rp = reduce_star(p, fuel, mode);
  ReachResult rq = reduce_star(q, fuel, mode);
  if (!rp.complete || !rq.complete)
    return Verdict::unknown("reachability incomplete within fuel");

  std::vector<TermPtr> states;
  std::unordered_map<TermPtr, std::size_t, TermHash, TermEq> index;
  auto add = [&](const TermPtr& t) {
    if (index.emplace(t, states.size()).second) states.push_back(t);
  };
  for (const auto& t : rp.states) add(t);
  for (const auto& t : rq.states) add(t);
  std::size_t n = states.size();
  if (n > 2000)
    return Verdict::unknown("joint reachability graph too large");

  // transitive weak reachability and weak barbs per state
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t i = 0; i < n; ++i)
    for (auto& r : reduce_once(states[i], mode)) succ[i].push_back(index.at(r.state));
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t s : succ[i])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[s][j] && !reach[i][j]) {
            reach[i][j] = true;
            changed = true;
          }
  }
  std::vector<NameSet> weak_barbs(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (reach[i][j])
        for (const auto& c : canonicalize(states[j]).comps)
          if (c.body->op == Op::Amb)
            if (const Name* nm = std::get_if<Name>(&c.body->head))
              weak_barbs[i].insert(*nm);

  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rel[i][j] = weak_barbs[i] == weak_barbs[j];
  changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (!rel[i][j]) continue;
        auto covered = [&](std::size_t a, std::size_t b) {
          for (std::size_t a2 = 0; a2 < n; ++a2) {
            if (!reach[a][a2]) continue;
            bool ok = false;
            for (std::size_t b2 = 0; b2 < n && !ok; ++b2)
              ok = reach[b][b2] && rel[a2][b2];
            if (!ok) return false;
          }
          return true;
        };
        if (!covered(i, j) || !covered(j, i)) {
          rel[i][j] = false;
          changed = true;
        }
      }
  }
  bool ans = rel[index.at(canonical_term(p))][index.at(canonical_term(q))];
  return ans ? Verdict::yes() : Verdict::no();
}

// ---- measures as a prefilter --------------------------------------------------

struct MeasurePair {
  std::size_t left = 0, right = 0;
  bool equal = false;
};

struct MeasureReport {
  MeasurePair sd, dd, op, opmess;
  bool counts_meaningful = false;  // OP/OPmess comparison needs finite inputs
  bool all_equal = false;          // over the meaningful rows
};

// Any inequality here certifies non-bisimilarity (degrees always; the counts
// on finite eta-normalized terms).
inline MeasureReport measure_report(const TermPtr& p, const TermPtr& q) {
  if (!is_closed(p) || !is_closed(q))
    throw std::invalid_argument("measure_report: open term");
  MeasureReport r;
  r.sd = {seq_degree(p), seq_degree(q), false};
  r.sd.equal = r.sd.left == r.sd.right;
  r.dd = {depth_degree(p), depth_degree(q), false};
  r.dd.equal = r.dd.left == r.dd.right;
  TermPtr pn = eta_normal_form(p);
  TermPtr qn = eta_normal_form(q);
  r.op = {count_prefixes(pn), count_prefixes(qn), false};
  r.op.equal = r.op.left == r.op.right;
  r.opmess = {count_messages(pn), count_messages(qn), false};
  r.opmess.equal = r.opmess.left == r.opmess.right;
  r.counts_meaningful = classify(p).is_finite && classify(q).is_finite;
  r.all_equal = r.sd.equal && r.dd.equal &&
                (!r.counts_meaningful || (r.op.equal && r.opmess.equal));
  return r;
}

// ---- logical equivalence ------------------------------------------------------

// On MA^s_IF the logic is axiomatized: eta-congruence decides it in the
// asynchronous calculus, structural congruence in the synchronous one. Both
// paths are definite; everything else falls back to the fueled bisimilarity.
inline Verdict logical_equiv(const TermPtr& p, const TermPtr& q,
                             BisimConfig cfg = {}) {
  if (!is_closed(p) || !is_closed(q))
    throw std::invalid_argument("logical_equiv: open term");
  Classification a = classify(p);
  Classification b = classify(q);
  if (a.is_maifs && b.is_maifs) {
    if (cfg.mode == CalculusMode::Async)
      return eta_congruent(p, q) ? Verdict::yes() : Verdict::no();
    return struct_congruent(p, q) ? Verdict::yes() : Verdict::no();
  }
  return bisim(p, q, cfg);
}

}  // namespace ambient
