#pragma once

// The Ambient Logic, with the derived modalities as primitive connectives
// whose satisfaction clauses are their characterizing statements: capability
// and input possibility/necessity, message formulas, replicated modalities
// (with dynamic selectivity validation), and the free-name tester.
//
// Satisfaction is three-valued: Unknown only ever arises from fuel bounds or
// from the guarantee connective outside its enumerable fragment.

#include <optional>
#include <sstream>

#include "ambient/equivalence.hpp"

namespace ambient {

enum class FOp : std::uint8_t {
  True_, Not, Or, Forall, Sometime, Void, AmbF, ParF, At, Guarantee,
  CapDia, CapBox, MsgF, InDia, InBox, ReplCap, ReplMsg, ReplInput, ReplAmb,
  FreeName
};

struct FVar {
  Name id;
  friend bool operator==(FVar a, FVar b) { return a.id == b.id; }
};

// A name or a logical variable, in formula eta positions.
using FEta = std::variant<Name, FVar>;

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
 public:
  FOp op;
  CapKind cap = CapKind::In;  // CapDia/CapBox/ReplCap
  FEta eta = Name{};          // eta-position connectives
  Name var{};                 // Forall binder spelling
  FormulaPtr a, b;

  static FormulaPtr make(FOp op, CapKind cap, FEta eta, Name var, FormulaPtr a,
                         FormulaPtr b) {
    auto f = std::make_shared<Formula>();
    f->op = op;
    f->cap = cap;
    f->eta = eta;
    f->var = var;
    f->a = std::move(a);
    f->b = std::move(b);
    return f;
  }
};

inline FormulaPtr f_true() {
  static FormulaPtr t = Formula::make(FOp::True_, CapKind::In, Name{}, Name{}, nullptr, nullptr);
  return t;
}
inline FormulaPtr f_not(FormulaPtr a) {
  return Formula::make(FOp::Not, CapKind::In, Name{}, Name{}, std::move(a), nullptr);
}
inline FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  return Formula::make(FOp::Or, CapKind::In, Name{}, Name{}, std::move(a), std::move(b));
}
inline FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {  // derived dual
  return f_not(f_or(f_not(std::move(a)), f_not(std::move(b))));
}
inline FormulaPtr f_forall(Name x, FormulaPtr a) {
  return Formula::make(FOp::Forall, CapKind::In, Name{}, x, std::move(a), nullptr);
}
inline FormulaPtr f_exists(Name x, FormulaPtr a) {  // derived dual
  return f_not(f_forall(x, f_not(std::move(a))));
}
inline FormulaPtr f_sometime(FormulaPtr a) {
  return Formula::make(FOp::Sometime, CapKind::In, Name{}, Name{}, std::move(a), nullptr);
}
inline FormulaPtr f_void() {
  static FormulaPtr v = Formula::make(FOp::Void, CapKind::In, Name{}, Name{}, nullptr, nullptr);
  return v;
}
inline FormulaPtr f_amb(FEta n, FormulaPtr a) {
  return Formula::make(FOp::AmbF, CapKind::In, n, Name{}, std::move(a), nullptr);
}
inline FormulaPtr f_par(FormulaPtr a, FormulaPtr b) {
  return Formula::make(FOp::ParF, CapKind::In, Name{}, Name{}, std::move(a), std::move(b));
}
inline FormulaPtr f_at(FormulaPtr a, FEta n) {
  return Formula::make(FOp::At, CapKind::In, n, Name{}, std::move(a), nullptr);
}
inline FormulaPtr f_guarantee(FormulaPtr a, FormulaPtr b) {
  return Formula::make(FOp::Guarantee, CapKind::In, Name{}, Name{}, std::move(a), std::move(b));
}
inline FormulaPtr f_cap_dia(CapKind k, FEta n, FormulaPtr a) {
  return Formula::make(FOp::CapDia, k, n, Name{}, std::move(a), nullptr);
}
inline FormulaPtr f_cap_box(CapKind k, FEta n, FormulaPtr a) {
  return Formula::make(FOp::CapBox, k, n, Name{}, std::move(a), nullptr);
}
inline FormulaPtr f_msg(FEta n) {
  return Formula::make(FOp::MsgF, CapKind::In, n, Name{}, nullptr, nullptr);
}
inline FormulaPtr f_in_dia(FEta n, FormulaPtr a) {
  return Formula::make(FOp::InDia, CapKind::In, n, Name{}, std::move(a), nullptr);
}
inline FormulaPtr f_in_box(FEta n, FormulaPtr a) {
  return Formula::make(FOp::InBox, CapKind::In, n, Name{}, std::move(a), nullptr);
}
inline FormulaPtr f_repl_cap(CapKind k, FEta n, FormulaPtr a) {
  return Formula::make(FOp::ReplCap, k, n, Name{}, std::move(a), nullptr);
}
inline FormulaPtr f_repl_msg(FEta n) {
  return Formula::make(FOp::ReplMsg, CapKind::In, n, Name{}, nullptr, nullptr);
}
inline FormulaPtr f_repl_input(FormulaPtr a) {
  return Formula::make(FOp::ReplInput, CapKind::In, Name{}, Name{}, std::move(a), nullptr);
}
inline FormulaPtr f_repl_amb(FEta n, FormulaPtr a) {
  return Formula::make(FOp::ReplAmb, CapKind::In, n, Name{}, std::move(a), nullptr);
}
inline FormulaPtr f_free_name(FEta n) {
  return Formula::make(FOp::FreeName, CapKind::In, n, Name{}, nullptr, nullptr);
}

// ---- structural equality, names, substitution --------------------------------

inline bool feta_equal(const FEta& x, const FEta& y) {
  if (x.index() != y.index()) return false;
  if (const Name* n = std::get_if<Name>(&x)) return *n == std::get<Name>(y);
  return std::get<FVar>(x) == std::get<FVar>(y);
}

inline bool formula_equal(const FormulaPtr& x, const FormulaPtr& y) {
  if (x.get() == y.get()) return true;
  if (!x || !y) return false;
  if (x->op != y->op || x->cap != y->cap || !(x->var == y->var) ||
      !feta_equal(x->eta, y->eta))
    return false;
  return formula_equal(x->a, y->a) && formula_equal(x->b, y->b);
}

inline void formula_names(const FormulaPtr& f, NameSet& out) {
  if (!f) return;
  if (const Name* n = std::get_if<Name>(&f->eta)) out.insert(*n);
  formula_names(f->a, out);
  formula_names(f->b, out);
}

inline void free_formula_vars(const FormulaPtr& f, NameSet& bound, NameSet& out) {
  if (!f) return;
  if (const FVar* v = std::get_if<FVar>(&f->eta))
    if (!bound.count(v->id)) out.insert(v->id);
  if (f->op == FOp::Forall) {
    bool fresh = bound.insert(f->var).second;
    free_formula_vars(f->a, bound, out);
    if (fresh) bound.erase(f->var);
    return;
  }
  free_formula_vars(f->a, bound, out);
  free_formula_vars(f->b, bound, out);
}

inline bool formula_closed(const FormulaPtr& f) {
  NameSet bound, out;
  free_formula_vars(f, bound, out);
  return out.empty();
}

// A{n/x}
inline FormulaPtr formula_subst(const FormulaPtr& f, Name x, Name n) {
  if (!f) return f;
  if (f->op == FOp::Forall && f->var == x) return f;  // shadowed
  FEta eta = f->eta;
  if (const FVar* v = std::get_if<FVar>(&eta))
    if (v->id == x) eta = n;
  FormulaPtr a = formula_subst(f->a, x, n);
  FormulaPtr b = formula_subst(f->b, x, n);
  if (a.get() == f->a.get() && b.get() == f->b.get() && feta_equal(eta, f->eta))
    return f;
  return Formula::make(f->op, f->cap, eta, f->var, std::move(a), std::move(b));
}

inline std::size_t formula_size(const FormulaPtr& f) {
  if (!f) return 0;
  return 1 + formula_size(f->a) + formula_size(f->b);
}

// ---- satisfaction -------------------------------------------------------------

struct GuaranteePolicy {
  std::vector<TermPtr> witnesses;       // closed candidate refuters
  std::size_t enumeration_bound = 64;   // model-set size limit for validation
};

struct SelectivityError : std::runtime_error {
  std::string model1, model2;
  SelectivityError(std::string what, std::string m1, std::string m2)
      : std::runtime_error(what + ": models " + m1 + " and " + m2),
        model1(std::move(m1)),
        model2(std::move(m2)) {}
};

struct SatConfig {
  Fuel fuel;
  CalculusMode mode = CalculusMode::Async;
  GuaranteePolicy policy;
};

namespace detail {

class SatChecker {
 public:
  explicit SatChecker(SatConfig cfg) : cfg_(cfg) {}

  Verdict check(const TermPtr& p, const FormulaPtr& f) {
    if (!is_closed(p)) throw std::invalid_argument("satisfies: open process");
    if (!formula_closed(f)) throw std::invalid_argument("satisfies: open formula");
    return sat(canonical_term(p), f);
  }

 private:
  SatConfig cfg_;

  static Verdict neg(const Verdict& v) {
    if (v.v == Verdict::True) return Verdict::no();
    if (v.v == Verdict::False) return Verdict::yes();
    return v;
  }

  Name eta_name(const FEta& e) const {
    if (const Name* n = std::get_if<Name>(&e)) return *n;
    throw std::invalid_argument("satisfaction of an open formula");
  }

  Verdict sat(const TermPtr& p, const FormulaPtr& f) {
    switch (f->op) {
      case FOp::True_: return Verdict::yes();
      case FOp::Not: return neg(sat(p, f->a));
      case FOp::Or: {
        Verdict a = sat(p, f->a);
        if (a.v == Verdict::True) return a;
        Verdict b = sat(p, f->b);
        if (b.v == Verdict::True) return b;
        if (a.v == Verdict::Unknown) return a;
        return b;
      }
      case FOp::Forall: {
        // finitized over fn(p), the formula's names, and one fresh name
        NameSet probes = free_names(p);
        formula_names(f->a, probes);
        probes.insert(fresh_name(probes));
        Verdict acc = Verdict::yes();
        for (Name n : probes) {
          Verdict v = sat(p, formula_subst(f->a, f->var, n));
          if (v.v == Verdict::False) return v;
          if (v.v == Verdict::Unknown) acc = v;
        }
        return acc;
      }
      case FOp::Sometime: {
        ReachResult r = reduce_star(p, cfg_.fuel, cfg_.mode);
        bool unknown = !r.complete;
        for (const auto& s : r.states) {
          Verdict v = sat(s, f->a);
          if (v.v == Verdict::True) return v;
          if (v.v == Verdict::Unknown) unknown = true;
        }
        return unknown ? Verdict::unknown("reachability incomplete") : Verdict::no();
      }
      case FOp::Void:
        return canonicalize(p).comps.empty() ? Verdict::yes() : Verdict::no();
      case FOp::AmbF: {
        Name n = eta_name(f->eta);
        CanonicalProcess c = canonicalize(p);
        if (c.comps.size() != 1 || c.comps[0].replicated ||
            c.comps[0].body->op != Op::Amb ||
            !nov_equal(c.comps[0].body->head, NameOrVar{n}))
          return Verdict::no();
        return sat(canonical_term(c.comps[0].body->a), f->a);
      }
      case FOp::ParF: return sat_par(p, f);
      case FOp::At: return sat(canonical_term(amb(eta_name(f->eta), p)), f->a);
      case FOp::Guarantee: return sat_guarantee(p, f);
      case FOp::CapDia:
      case FOp::CapBox: return sat_cap_modal(p, f);
      case FOp::MsgF: {
        Name n = eta_name(f->eta);
        CanonicalProcess c = canonicalize(p);
        bool ok = c.comps.size() == 1 && !c.comps[0].replicated &&
                  c.comps[0].body->op == Op::Msg &&
                  nov_equal(c.comps[0].body->head, NameOrVar{n});
        return ok ? Verdict::yes() : Verdict::no();
      }
      case FOp::InDia:
      case FOp::InBox: return sat_input_modal(p, f);
      case FOp::ReplCap:
      case FOp::ReplInput: return sat_repl_guarded(p, f);
      case FOp::ReplMsg: {
        Name n = eta_name(f->eta);
        CanonicalProcess c = canonicalize(p);
        bool ok = c.comps.size() == 1 && c.comps[0].replicated &&
                  c.comps[0].body->op == Op::Msg && !c.comps[0].body->a &&
                  nov_equal(c.comps[0].body->head, NameOrVar{n});
        return ok ? Verdict::yes() : Verdict::no();
      }
      case FOp::ReplAmb: return sat_repl_amb(p, f);
      case FOp::FreeName:
        return free_names(p).count(eta_name(f->eta)) ? Verdict::yes()
                                                     : Verdict::no();
    }
    return Verdict::unknown("unhandled connective");
  }

  // parallel width: how many top-level components the formula can discern;
  // bounds plain-copy emission from replicated components
  static std::size_t par_width(const FormulaPtr& f) {
    if (!f) return 1;
    switch (f->op) {
      case FOp::ParF: return par_width(f->a) + par_width(f->b);
      case FOp::Not:
      case FOp::Forall: return par_width(f->a);
      case FOp::Or: return std::max(par_width(f->a), par_width(f->b));
      default: return 1;
    }
  }

  Verdict sat_par(const TermPtr& p, const FormulaPtr& f) {
    CanonicalProcess c = canonicalize(p);
    std::vector<Component> plain, replicated;
    for (auto& comp : c.comps)
      (comp.replicated ? replicated : plain).push_back(comp);
    std::size_t emit_bound = replicated.empty() ? 0 : par_width(f) + 1;

    // emission patterns: total plain copies drawn from replicated components
    std::vector<std::vector<Component>> pools{plain};
    if (!replicated.empty()) {
      std::function<void(std::size_t, std::size_t, std::vector<Component>&)> go =
          [&](std::size_t idx, std::size_t left, std::vector<Component>& acc) {
            if (idx == replicated.size()) {
              pools.push_back(acc);
              return;
            }
            for (std::size_t k = 0; k <= left; ++k) {
              for (std::size_t j = 0; j < k; ++j)
                acc.push_back({false, replicated[idx].body});
              go(idx + 1, left - k, acc);
              for (std::size_t j = 0; j < k; ++j) acc.pop_back();
            }
          };
      std::vector<Component> acc = plain;
      pools.clear();
      go(0, emit_bound, acc);
    }

    bool unknown = false;
    for (const auto& pool : pools) {
      std::size_t np = pool.size(), nr = replicated.size();
      for (std::size_t pmask = 0; pmask < (std::size_t{1} << np); ++pmask) {
        for (std::size_t rl = 0; rl < (std::size_t{1} << nr); ++rl) {
          for (std::size_t rr = 0; rr < (std::size_t{1} << nr); ++rr) {
            if ((rl | rr) != (std::size_t{1} << nr) - 1) continue;  // cover all
            std::vector<Component> left, right;
            for (std::size_t i = 0; i < np; ++i)
              (pmask >> i & 1 ? left : right).push_back(pool[i]);
            for (std::size_t i = 0; i < nr; ++i) {
              if (rl >> i & 1) left.push_back(replicated[i]);
              if (rr >> i & 1) right.push_back(replicated[i]);
            }
            Verdict va = sat(assemble_components(std::move(left)), f->a);
            if (va.v == Verdict::False) continue;
            Verdict vb = sat(assemble_components(std::move(right)), f->b);
            if (va.v == Verdict::True && vb.v == Verdict::True)
              return Verdict::yes();
            if (va.v == Verdict::Unknown || vb.v == Verdict::Unknown)
              unknown = true;
          }
        }
      }
    }
    if (unknown) return Verdict::unknown("composition split not settled");
    return Verdict::no();
  }

  // A |> B, three-valued per policy: witness refutation, plus validation when
  // A's model set is finitely enumerable
  Verdict sat_guarantee(const TermPtr& p, const FormulaPtr& f) {
    for (const auto& r : cfg_.policy.witnesses) {
      if (!is_closed(r)) continue;
      if (sat(canonical_term(r), f->a).v != Verdict::True) continue;
      Verdict v = sat(canonical_term(par(p, r)), f->b);
      if (v.v == Verdict::False) return Verdict::no();
    }
    std::vector<TermPtr> models;
    if (enumerate_models(f->a, models)) {
      Verdict acc = Verdict::yes();
      for (const auto& m : models) {
        Verdict v = sat(canonical_term(par(p, m)), f->b);
        if (v.v == Verdict::False) return Verdict::no();
        if (v.v == Verdict::Unknown) acc = v;
      }
      return acc;
    }
    return Verdict::unknown("guarantee antecedent not enumerable");
  }

  // model sets for the enumerable antecedent shapes: Void, message formulas,
  // and their closure under ambients and composition
  bool enumerate_models(const FormulaPtr& f, std::vector<TermPtr>& out) {
    switch (f->op) {
      case FOp::Void:
        out.push_back(nil());
        return true;
      case FOp::MsgF:
        if (cfg_.mode != CalculusMode::Async) return false;
        if (const Name* n = std::get_if<Name>(&f->eta)) {
          out.push_back(msg(*n));
          return true;
        }
        return false;
      case FOp::AmbF: {
        const Name* n = std::get_if<Name>(&f->eta);
        if (!n) return false;
        std::vector<TermPtr> inner;
        if (!enumerate_models(f->a, inner)) return false;
        for (auto& m : inner) out.push_back(amb(*n, m));
        return out.size() <= cfg_.policy.enumeration_bound;
      }
      case FOp::ParF: {
        std::vector<TermPtr> xs, ys;
        if (!enumerate_models(f->a, xs) || !enumerate_models(f->b, ys)) return false;
        for (auto& x : xs)
          for (auto& y : ys) out.push_back(par(x, y));
        return out.size() <= cfg_.policy.enumeration_bound;
      }
      default: return false;
    }
  }

  Verdict sat_cap_modal(const TermPtr& p, const FormulaPtr& f) {
    Name n = eta_name(f->eta);
    CanonicalProcess c = canonicalize(p);
    bool shape = c.comps.size() == 1 && !c.comps[0].replicated &&
                 c.comps[0].body->op == Op::Prefix &&
                 c.comps[0].body->cap == f->cap &&
                 nov_equal(c.comps[0].body->head, NameOrVar{n});
    if (!shape) return Verdict::no();
    ReachResult clo = stutter_closure(c.comps[0].body->a, Capability{f->cap, n},
                                      cfg_.fuel, cfg_.mode);
    if (f->op == FOp::CapDia) {
      bool unknown = !clo.complete;
      for (const auto& s : clo.states) {
        Verdict v = sat(s, f->a);
        if (v.v == Verdict::True) return v;
        if (v.v == Verdict::Unknown) unknown = true;
      }
      return unknown ? Verdict::unknown("stutter closure incomplete") : Verdict::no();
    }
    Verdict acc = clo.complete ? Verdict::yes()
                               : Verdict::unknown("stutter closure incomplete");
    for (const auto& s : clo.states) {
      Verdict v = sat(s, f->a);
      if (v.v == Verdict::False) return v;
      if (v.v == Verdict::Unknown) acc = v;
    }
    return acc;
  }

  Verdict sat_input_modal(const TermPtr& p, const FormulaPtr& f) {
    Name n = eta_name(f->eta);
    CanonicalProcess c = canonicalize(p);
    bool shape = c.comps.size() == 1 && !c.comps[0].replicated &&
                 c.comps[0].body->op == Op::Abs;
    if (!shape) return Verdict::no();
    // async: (x)P' | <n> ==> P''; sync: P'{n/x} ==> P''
    TermPtr start = cfg_.mode == CalculusMode::Async
                        ? canonical_term(par(p, msg(n)))
                        : canonical_term(instantiate(c.comps[0].body->a, n));
    ReachResult r = reduce_star(start, cfg_.fuel, cfg_.mode);
    if (f->op == FOp::InDia) {
      bool unknown = !r.complete;
      for (const auto& s : r.states) {
        Verdict v = sat(s, f->a);
        if (v.v == Verdict::True) return v;
        if (v.v == Verdict::Unknown) unknown = true;
      }
      return unknown ? Verdict::unknown("reachability incomplete") : Verdict::no();
    }
    Verdict acc = r.complete ? Verdict::yes()
                             : Verdict::unknown("reachability incomplete");
    for (const auto& s : r.states) {
      Verdict v = sat(s, f->a);
      if (v.v == Verdict::False) return v;
      if (v.v == Verdict::Unknown) acc = v;
    }
    return acc;
  }

  // !<cap n>.A and !<?>.A: P == !P1|(!)P2|...|(!)Pr with every Pi a model of A;
  // A must be sequentially selective and its found models guard-shaped
  Verdict sat_repl_guarded(const TermPtr& p, const FormulaPtr& f) {
    CanonicalProcess c = canonicalize(p);
    if (c.comps.empty()) return Verdict::no();
    bool has_repl = false;
    for (auto& comp : c.comps) has_repl = has_repl || comp.replicated;
    if (!has_repl) return Verdict::no();
    std::optional<std::size_t> model_sd;
    TermPtr first_model;
    Verdict acc = Verdict::yes();
    for (auto& comp : c.comps) {
      Verdict v = sat(comp.body, f->a);
      if (v.v == Verdict::False) return Verdict::no();
      if (v.v == Verdict::Unknown) {
        acc = v;
        continue;
      }
      bool shaped = f->op == FOp::ReplCap
                        ? (comp.body->op == Op::Prefix && comp.body->cap == f->cap)
                        : comp.body->op == Op::Abs;
      if (!shaped)
        throw SelectivityError("replicated modality argument admits a model of the wrong shape",
                               print_process(comp.body), print_process(comp.body));
      std::size_t sd = seq_degree_any(comp.body);
      if (model_sd && *model_sd != sd)
        throw SelectivityError("argument formula is not sequentially selective",
                               print_process(first_model), print_process(comp.body));
      if (!model_sd) {
        model_sd = sd;
        first_model = comp.body;
      }
    }
    return acc;
  }

  // !n[A]: every component an n-ambient whose content models the depth
  // selective A
  Verdict sat_repl_amb(const TermPtr& p, const FormulaPtr& f) {
    Name n = eta_name(f->eta);
    CanonicalProcess c = canonicalize(p);
    if (c.comps.empty()) return Verdict::no();
    bool has_repl = false;
    for (auto& comp : c.comps) has_repl = has_repl || comp.replicated;
    if (!has_repl) return Verdict::no();
    std::optional<std::size_t> model_dd;
    TermPtr first_model;
    Verdict acc = Verdict::yes();
    for (auto& comp : c.comps) {
      if (comp.body->op != Op::Amb || !nov_equal(comp.body->head, NameOrVar{n}))
        return Verdict::no();
      TermPtr body = canonical_term(comp.body->a);
      Verdict v = sat(body, f->a);
      if (v.v == Verdict::False) return Verdict::no();
      if (v.v == Verdict::Unknown) {
        acc = v;
        continue;
      }
      std::size_t dd = depth_degree(body);
      if (model_dd && *model_dd != dd)
        throw SelectivityError("argument formula is not depth selective",
                               print_process(first_model), print_process(body));
      if (!model_dd) {
        model_dd = dd;
        first_model = body;
      }
    }
    return acc;
  }
};

}  // namespace detail

inline Verdict satisfies(const TermPtr& p, const FormulaPtr& f,
                         SatConfig cfg = {}) {
  detail::SatChecker checker(cfg);
  return checker.check(p, f);
}

}  // namespace ambient
