#pragma once

// Distinguishing formulas for non-bisimilar finite processes, built by the
// inductive case analysis on the left process: spatial mismatches map to the
// corresponding spatial connective, prefix and input mismatches to the
// possibility modalities over conjunctions of sub-distinguishers, and a
// failure in the left-to-right direction swaps the pair and negates.
//
// Also here: the degree formulas. sd_formula(P) (resp. dd_formula(P)) is
// satisfied by P, and any process satisfying it has at least P's
// sequentiality (resp. depth) degree.

#include "ambient/logic.hpp"

namespace ambient {

namespace detail {

class Distinguisher {
 public:
  explicit Distinguisher(CalculusMode mode, std::uint64_t seed)
      : mode_(mode), seed_(seed) {
    if (mode_ != CalculusMode::Async)
      throw std::invalid_argument(
          "distinguishing formulas require the asynchronous calculus (the "
          "formula syntax has no synchronous message modality)");
  }

  std::optional<FormulaPtr> run(const TermPtr& p, const TermPtr& q) {
    if (!classify(p).is_finite || !classify(q).is_finite)
      throw std::invalid_argument("distinguish: non-finite input");
    if (!is_closed(p) || !is_closed(q))
      throw std::invalid_argument("distinguish: open term");
    BisimConfig cfg;
    cfg.mode = mode_;
    cfg.fresh_seed = seed_;
    if (checker_ == nullptr) checker_ = std::make_unique<BisimChecker>(cfg);
    TermPtr cp = canonical_term(p), cq = canonical_term(q);
    if (checker_->check(cp, cq).v == Verdict::True) return std::nullopt;
    return build(cp, cq, true);
  }

 private:
  CalculusMode mode_;
  std::uint64_t seed_;
  std::unique_ptr<BisimChecker> checker_;

  static Fuel ample() { return Fuel{1u << 20, 1u << 20}; }

  bool bis(const TermPtr& a, const TermPtr& b) {
    Verdict v = checker_->check(a, b);
    if (!v.definite())
      throw std::logic_error("bisimilarity must be definite on finite terms");
    return v.v == Verdict::True;
  }

  static FormulaPtr conj(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return f_true();
    FormulaPtr acc = fs.back();
    for (std::size_t i = fs.size() - 1; i-- > 0;) acc = f_and(fs[i], acc);
    return acc;
  }

  // p and q non-bisimilar, both canonical
  FormulaPtr build(const TermPtr& p, const TermPtr& q, bool allow_swap) {
    CanonicalProcess cp = canonicalize(p);
    CanonicalProcess cq = canonicalize(q);

    if (cp.comps.empty()) return f_void();
    if (cq.comps.empty()) return f_not(f_void());
    if (cp.comps.size() >= 2) return par_case(cp, cq);

    const TermPtr& b = cp.comps[0].body;  // finite, hence plain
    switch (b->op) {
      case Op::Amb: {
        Name n = std::get<Name>(b->head);
        bool shape = cq.comps.size() == 1 && !cq.comps[0].replicated &&
                     cq.comps[0].body->op == Op::Amb &&
                     nov_equal(cq.comps[0].body->head, b->head);
        if (!shape) return f_amb(n, f_true());
        return f_amb(n, build(canonical_term(b->a),
                              canonical_term(cq.comps[0].body->a), true));
      }
      case Op::Msg:
        return f_msg(std::get<Name>(b->head));
      case Op::Prefix: {
        Name n = std::get<Name>(b->head);
        bool shape = cq.comps.size() == 1 && !cq.comps[0].replicated &&
                     cq.comps[0].body->op == Op::Prefix &&
                     cq.comps[0].body->cap == b->cap &&
                     nov_equal(cq.comps[0].body->head, b->head);
        if (!shape) return f_cap_dia(b->cap, n, f_true());
        TermPtr pb = canonical_term(b->a);
        ReachResult clo = stutter_closure(cq.comps[0].body->a,
                                          Capability{b->cap, n}, ample(), mode_);
        std::vector<FormulaPtr> parts;
        bool all_fail = true;
        for (const auto& t : clo.states)
          if (bis(pb, t)) {
            all_fail = false;
            break;
          }
        if (all_fail) {
          for (const auto& t : clo.states) parts.push_back(build(pb, t, true));
          return f_cap_dia(b->cap, n, conj(parts));
        }
        // the failure is in the other direction
        if (!allow_swap)
          throw std::logic_error("no failing direction found for prefix clause");
        return f_not(build(q, p, false));
      }
      case Op::Abs: {
        bool shape = cq.comps.size() == 1 && !cq.comps[0].replicated &&
                     cq.comps[0].body->op == Op::Abs;
        NameSet avoid = free_names(p);
        for (Name nm : free_names(q)) avoid.insert(nm);
        Name m = fresh_name(avoid, "m", seed_);
        if (!shape) return f_in_dia(m, f_true());
        TermPtr pm = canonical_term(instantiate(b->a, m));
        ReachResult clo = reduce_star(par(q, msg(m)), ample(), mode_);
        bool all_fail = true;
        for (const auto& t : clo.states)
          if (bis(pm, t)) {
            all_fail = false;
            break;
          }
        if (all_fail) {
          std::vector<FormulaPtr> parts;
          for (const auto& t : clo.states) parts.push_back(build(pm, t, true));
          return f_in_dia(m, conj(parts));
        }
        if (!allow_swap)
          throw std::logic_error("no failing direction found for input clause");
        return f_not(build(q, p, false));
      }
      default:
        throw std::logic_error("unexpected canonical head");
    }
  }

  FormulaPtr par_case(const CanonicalProcess& cp, const CanonicalProcess& cq) {
    TermPtr p1 = cp.comps[0].body;  // finite: all components plain
    std::vector<Component> rest(cp.comps.begin() + 1, cp.comps.end());
    TermPtr p2 = assemble_components(rest);

    std::vector<FormulaPtr> b1, b2;
    std::size_t k = cq.comps.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      std::vector<Component> left, right;
      for (std::size_t i = 0; i < k; ++i)
        (mask >> i & 1 ? left : right).push_back(cq.comps[i]);
      TermPtr q1 = assemble_components(std::move(left));
      TermPtr q2 = assemble_components(std::move(right));
      if (!bis(p1, q1))
        b1.push_back(build(p1, q1, true));
      else if (!bis(p2, q2))
        b2.push_back(build(p2, q2, true));
      else
        throw std::logic_error("split matches although the pair is non-bisimilar");
    }
    return f_par(conj(b1), conj(b2));
  }
};

}  // namespace detail

// A formula separating two non-bisimilar finite processes: the first satisfies
// it, the second does not. Empty when the processes are bisimilar.
inline std::optional<FormulaPtr> distinguish(const TermPtr& p, const TermPtr& q,
                                             CalculusMode mode = CalculusMode::Async,
                                             std::uint64_t fresh_seed = 0) {
  detail::Distinguisher d(mode, fresh_seed);
  return d.run(p, q);
}

// ---- degree formulas ----------------------------------------------------------

namespace detail {

inline FormulaPtr sd_formula_rec(const TermPtr& t, std::vector<Name>& binders,
                                 NameSet& used);

inline FEta resolve_eta(const NameOrVar& h, const std::vector<Name>& binders) {
  if (const Name* n = std::get_if<Name>(&h)) return *n;
  if (const Var* v = std::get_if<Var>(&h)) {
    if (v->index < binders.size())
      return FVar{binders[binders.size() - 1 - v->index]};
    throw std::invalid_argument("dangling variable");
  }
  throw std::invalid_argument("degree formulas need closed terms");
}

inline FormulaPtr sd_formula_rec(const TermPtr& t, std::vector<Name>& binders,
                                 NameSet& used) {
  if (seq_degree_any(t) == 0) return f_true();
  switch (t->op) {
    case Op::Par: {
      const TermPtr& side =
          seq_degree_any(t->a) >= seq_degree_any(t->b) ? t->a : t->b;
      return f_par(sd_formula_rec(side, binders, used), f_true());
    }
    case Op::Repl:
      return f_par(sd_formula_rec(t->a, binders, used), f_true());
    case Op::Amb:
      return f_amb(resolve_eta(t->head, binders),
                   sd_formula_rec(t->a, binders, used));
    case Op::Prefix:
      return f_cap_dia(t->cap, resolve_eta(t->head, binders),
                       sd_formula_rec(t->a, binders, used));
    case Op::Msg:
      return f_msg(resolve_eta(t->head, binders));
    case Op::Abs: {
      Name x = fresh_name(used, "x");
      used.insert(x);
      binders.push_back(x);
      FormulaPtr body = sd_formula_rec(t->a, binders, used);
      binders.pop_back();
      return f_exists(x, f_in_dia(FVar{x}, body));
    }
    default: return f_true();
  }
}

inline FormulaPtr dd_formula_rec(const TermPtr& t) {
  if (depth_degree(t) == 0) return f_true();
  switch (t->op) {
    case Op::Par: {
      const TermPtr& side =
          depth_degree(t->a) >= depth_degree(t->b) ? t->a : t->b;
      return f_par(dd_formula_rec(side), f_true());
    }
    case Op::Repl: return f_par(dd_formula_rec(t->a), f_true());
    case Op::Amb:
      return f_amb(std::get<Name>(t->head), dd_formula_rec(t->a));
    default: return f_true();
  }
}

}  // namespace detail

// P satisfies the result, and satisfaction forces sd >= sd(P).
inline FormulaPtr sd_formula(const TermPtr& p) {
  if (!is_closed(p)) throw std::invalid_argument("sd_formula: open term");
  TermPtr nf = eta_normal_form(p);
  std::vector<Name> binders;
  NameSet used = free_names(nf);
  return detail::sd_formula_rec(nf, binders, used);
}

// P satisfies the result, and satisfaction forces dd >= dd(P).
inline FormulaPtr dd_formula(const TermPtr& p) {
  if (!is_closed(p)) throw std::invalid_argument("dd_formula: open term");
  return detail::dd_formula_rec(canonical_term(p));
}

}  // namespace ambient
