#pragma once

// Turing machines compiled into the MA^s_IF encoding: ribbon cells as nested
// ambients, a frozen/alive/dead ribbon extensor, a replicated machine soup
// driven by open-capabilities, cleanup code turning exhausted ribbons into an
// inert old ribbon, and the loop construction whose closing is equivalent to
// acceptance.
//
// Machine text format (line oriented):
//   states: q0 q1 qA
//   start: q0
//   accept: qA
//   q0 f -> q1 t R
// with read/write letters in {f,t} and moves in {L,S,R}. Configurations are
// (left, state, right) with the head on the last letter of `left`; R moves the
// head onto the first letter of `right` (one cell deeper in the nesting),
// L one cell shallower.

#include <optional>
#include <sstream>

#include "ambient/measure.hpp"
#include "ambient/print.hpp"
#include "ambient/semantics.hpp"

namespace ambient {
namespace tm {

enum class Digit : std::uint8_t { F, T };
using Word = std::vector<Digit>;

enum class Move : std::uint8_t { Left, Stay, Right };

struct Transition {
  std::string next;
  Digit write = Digit::F;
  Move move = Move::Stay;
};

struct TuringMachine {
  std::vector<std::string> states;
  std::string start, accept;
  std::map<std::pair<std::string, Digit>, Transition> delta;

  bool has_state(const std::string& s) const {
    for (const auto& st : states)
      if (st == s) return true;
    return false;
  }
};

struct TMConfiguration {
  Word left;  // head on the last letter; non-empty while stepping
  std::string state;
  Word right;
};

inline Word parse_word(std::string_view s) {
  Word w;
  for (char c : s) {
    if (c == 'f')
      w.push_back(Digit::F);
    else if (c == 't')
      w.push_back(Digit::T);
    else
      throw std::invalid_argument("word letters must be 'f' or 't'");
  }
  return w;
}

inline std::string word_str(const Word& w) {
  std::string s;
  for (Digit d : w) s += d == Digit::F ? 'f' : 't';
  return s;
}

inline void validate(const TuringMachine& m) {
  if (!m.has_state(m.start)) throw std::invalid_argument("unknown start state");
  if (!m.has_state(m.accept)) throw std::invalid_argument("unknown accept state");
  for (const auto& [key, tr] : m.delta) {
    if (!m.has_state(key.first) || !m.has_state(tr.next))
      throw std::invalid_argument("transition over unknown state");
    if (key.first == m.accept)
      throw std::invalid_argument("accepting state cannot have transitions");
  }
  for (const auto& st : m.states) {
    if (st == m.accept) continue;
    for (Digit d : {Digit::F, Digit::T})
      if (!m.delta.count({st, d}))
        throw std::invalid_argument("transition function not total at state " + st);
  }
}

inline TuringMachine parse_machine(std::string_view text) {
  TuringMachine m;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    if (tok == "states:") {
      std::string s;
      while (ls >> s) m.states.push_back(s);
    } else if (tok == "start:") {
      ls >> m.start;
    } else if (tok == "accept:") {
      ls >> m.accept;
    } else {
      std::string read, arrow, next, write, move;
      if (!(ls >> read >> arrow >> next >> write >> move) || arrow != "->")
        throw std::invalid_argument("bad transition line: " + line);
      auto digit = [&](const std::string& s) {
        if (s == "f") return Digit::F;
        if (s == "t") return Digit::T;
        throw std::invalid_argument("bad digit: " + s);
      };
      Move mv = move == "L" ? Move::Left
                            : move == "S" ? Move::Stay
                                          : move == "R" ? Move::Right
                                                        : throw std::invalid_argument("bad move: " + move);
      m.delta[{tok, digit(read)}] = Transition{next, digit(write), mv};
    }
  }
  validate(m);
  return m;
}

// Pure machine semantics; the independent oracle for the encoding.
inline std::optional<TMConfiguration> tm_step(const TMConfiguration& c,
                                              const TuringMachine& m) {
  if (c.state == m.accept)
    throw std::invalid_argument("tm_step: accepting configurations do not step");
  if (c.left.empty()) throw std::invalid_argument("tm_step: head off the ribbon");
  Digit read = c.left.back();
  const Transition& tr = m.delta.at({c.state, read});
  Word left = c.left;
  left.back() = tr.write;
  switch (tr.move) {
    case Move::Stay: return TMConfiguration{left, tr.next, c.right};
    case Move::Right: {
      if (c.right.empty()) return std::nullopt;  // would need ribbon extension
      Word l = left;
      l.push_back(c.right.front());
      Word r(c.right.begin() + 1, c.right.end());
      return TMConfiguration{l, tr.next, r};
    }
    case Move::Left: {
      if (left.size() < 2) return std::nullopt;  // off the left end
      Word r = c.right;
      r.insert(r.begin(), left.back());
      left.pop_back();
      return TMConfiguration{left, tr.next, r};
    }
  }
  return std::nullopt;
}

// ---- the encoding -------------------------------------------------------------

namespace names {
inline Name cell() { return name("cell"); }
inline Name wo() { return name("wo"); }
inline Name ext() { return name("ext"); }
inline Name coin() { return name("coin"); }
inline Name newcell() { return name("newcell"); }
inline Name msgn() { return name("msg"); }
inline Name ribbon_left() { return name("ribbon_left"); }
inline Name start() { return name("start"); }
inline Name TM() { return name("TM"); }
inline Name head() { return name("head"); }
inline Name cl_ack() { return name("cl_ack"); }
inline Name wr_ack() { return name("wr_ack"); }
inline Name mo() { return name("mo"); }
inline Name cleaner() { return name("cleaner"); }
inline Name runclean() { return name("runclean"); }
inline Name get_out() { return name("get_out"); }
inline Name digit(Digit d) { return name(d == Digit::F ? "ff" : "tt"); }

inline NameSet reserved() {
  NameSet s;
  for (Name n : {cell(), wo(), ext(), coin(), newcell(), msgn(), ribbon_left(),
                 start(), TM(), head(), cl_ack(), wr_ack(), mo(), cleaner(),
                 runclean(), get_out(), digit(Digit::F), digit(Digit::T)})
    s.insert(n);
  return s;
}
}  // namespace names

inline void check_reserved(const TuringMachine& m) {
  NameSet res = names::reserved();
  for (const auto& st : m.states)
    if (res.count(name(st)))
      throw std::invalid_argument("machine state name clashes with a reserved name: " + st);
}

namespace enc {

using namespace names;

inline TermPtr caps(std::initializer_list<Capability> cs, TermPtr tail) {
  TermPtr t = std::move(tail);
  std::vector<Capability> v(cs);
  for (std::size_t i = v.size(); i-- > 0;) t = prefix(v[i], t);
  return t;
}
inline Capability c_in(Name n) { return {CapKind::In, n}; }
inline Capability c_out(Name n) { return {CapKind::Out, n}; }
inline Capability c_open(Name n) { return {CapKind::Open, n}; }

// cell(d)[hole] := cell[ d[0] | !open wo | hole ]
inline TermPtr cell_ctx(Digit d, TermPtr hole) {
  return amb(cell(), par(amb(digit(d), nil()),
                         par(repl(prefix(c_open(wo()), nil())), std::move(hole))));
}

// word(w)[hole]: nested cells, first letter outermost
inline TermPtr word_ctx(const Word& w, TermPtr hole) {
  TermPtr t = std::move(hole);
  for (std::size_t i = w.size(); i-- > 0;) t = cell_ctx(w[i], t);
  return t;
}

// deadextcode := !open coin.open newcell.in cell.coin[0]
//              | !newcell[ cell(ff)[out ext] ]
inline TermPtr deadextcode() {
  TermPtr loop = caps({c_open(coin()), c_open(newcell()), c_in(cell())},
                      amb(coin(), nil()));
  TermPtr spawn = amb(newcell(), cell_ctx(Digit::F, prefix(c_out(ext()), nil())));
  return par(repl(loop), repl(spawn));
}

// sendstart := msg[ out ext.!out cell | out ribbon_left.start[in TM] ]
inline TermPtr sendstart() {
  TermPtr climb = prefix(c_out(ext()), repl(prefix(c_out(cell()), nil())));
  TermPtr announce = prefix(c_out(ribbon_left()),
                            amb(start(), prefix(c_in(TM()), nil())));
  return amb(msgn(), par(climb, announce));
}

inline TermPtr extensor_frozen() {
  return amb(ext(), par(deadextcode(), prefix(c_open(coin()), sendstart())));
}
inline TermPtr extensor_alive() {
  return amb(ext(), par(amb(coin(), nil()),
                        par(deadextcode(), prefix(c_open(coin()), sendstart()))));
}
inline TermPtr extensor_dead() { return amb(ext(), deadextcode()); }

// cleaninst := open cleaner.open runclean | runclean[deadcleancode]
inline TermPtr deadcleancode() {
  return par(repl(prefix(c_open(digit(Digit::F)), nil())),
             par(repl(prefix(c_open(digit(Digit::T)), nil())),
                 par(repl(prefix(c_open(cell()), nil())),
                     repl(prefix(c_open(wo()), nil())))));
}
inline TermPtr cleaninst() {
  return par(caps({c_open(cleaner()), c_open(runclean())}, nil()),
             amb(runclean(), deadcleancode()));
}

inline TermPtr frozen_ribb(const Word& w) {
  return amb(ribbon_left(), par(cleaninst(), word_ctx(w, extensor_frozen())));
}
inline TermPtr growing_ribb(const Word& w) {
  return amb(ribbon_left(), par(cleaninst(), word_ctx(w, extensor_alive())));
}
inline TermPtr work_ribb(const Word& w1, const Word& w2, TermPtr hole) {
  return amb(ribbon_left(),
             par(cleaninst(),
                 word_ctx(w1, par(std::move(hole), word_ctx(w2, extensor_dead())))));
}
inline TermPtr old_ribb() {
  return amb(ribbon_left(), par(deadcleancode(), extensor_dead()));
}

// clear(d);P := wo[ out head.open d.cl_ack[in head] ] | open cl_ack.P
inline TermPtr clear(Digit d, TermPtr P) {
  TermPtr inner = caps({c_out(head()), c_open(digit(d))},
                       amb(cl_ack(), prefix(c_in(head()), nil())));
  return par(amb(wo(), inner), prefix(c_open(cl_ack()), std::move(P)));
}

// write(d);P := wo[ out head.d[0] | wr_ack[in head] ] | open wr_ack.P
inline TermPtr write(Digit d, TermPtr P) {
  TermPtr inner = par(prefix(c_out(head()), amb(digit(d), nil())),
                      amb(wr_ack(), prefix(c_in(head()), nil())));
  return par(amb(wo(), inner), prefix(c_open(wr_ack()), std::move(P)));
}

// become(mo);P := mo[ out head.open head.P ] | in mo
inline TermPtr become(TermPtr P) {
  return par(amb(mo(), caps({c_out(head()), c_open(head())}, std::move(P))),
             prefix(c_in(mo()), nil()));
}

inline TermPtr domove(Move mv, TermPtr P) {
  switch (mv) {
    case Move::Left: return prefix(c_out(cell()), std::move(P));
    case Move::Stay: return P;
    case Move::Right: return prefix(c_in(cell()), std::move(P));
  }
  return P;
}

// tcode(d_r, tr) := clear(d_r); write(d_w); become(mo); in TM.domove(mv); open q_w
inline TermPtr tcode(Digit read, const Transition& tr) {
  TermPtr tail = prefix(c_in(TM()),
                        domove(tr.move, prefix(c_open(name(tr.next)), nil())));
  return clear(read, write(tr.write, become(std::move(tail))));
}

// ff -> P + tt -> Q := coin[in ff.out ff.P] | coin[in tt.out tt.Q] | open coin
inline TermPtr choice(TermPtr pf, TermPtr pt) {
  Name f = digit(Digit::F), t = digit(Digit::T);
  return par(amb(coin(), caps({c_in(f), c_out(f)}, std::move(pf))),
             par(amb(coin(), caps({c_in(t), c_out(t)}, std::move(pt))),
                 prefix(c_open(coin()), nil())));
}

// the non-selected branch of a choice, absorbed by code(q)'s replicated coins
inline TermPtr coin_branch(const TuringMachine& m, const std::string& q, Digit d) {
  Name dn = digit(d);
  return amb(coin(), caps({c_in(dn), c_out(dn)}, tcode(d, m.delta.at({q, d}))));
}

// code(q) := !q[head[ out TM.(ff -> tcode(ff,..) + tt -> tcode(tt,..)) ]]
//          | !coin[in ff.out ff.tcode(ff,..)] | !coin[in tt.out tt.tcode(tt,..)]
// code(q_A) := !q_A[ get_out[0] ]
inline TermPtr code(const TuringMachine& m, const std::string& q) {
  if (q == m.accept) return repl(amb(name(q), amb(get_out(), nil())));
  TermPtr test = choice(tcode(Digit::F, m.delta.at({q, Digit::F})),
                        tcode(Digit::T, m.delta.at({q, Digit::T})));
  TermPtr head_amb = amb(head(), prefix(c_out(TM()), std::move(test)));
  return par(repl(amb(name(q), std::move(head_amb))),
             par(repl(coin_branch(m, q, Digit::F)),
                 repl(coin_branch(m, q, Digit::T))));
}

// getout := !open get_out.out cell.get_out[0]
//         | !open get_out.out ribbon_left.( cleaner[out TM.in ribbon_left]
//             | coin[out TM.in ribbon_left.in cell^{|w|}.in ext]
//             | open start.in ribbon_left.in cell.open q_start )
inline TermPtr start_listener(const TuringMachine& m) {
  return caps({c_open(start()), c_in(ribbon_left()), c_in(cell())},
              prefix(c_open(name(m.start)), nil()));
}
inline TermPtr getout(const TuringMachine& m, std::size_t wlen) {
  TermPtr ratchet = caps({c_open(get_out()), c_out(cell())},
                         amb(get_out(), nil()));
  TermPtr wake = prefix(c_in(ext()), nil());  // in cell^{|w|}.in ext
  for (std::size_t i = 0; i < wlen; ++i) wake = prefix(c_in(cell()), wake);
  TermPtr coin_back =
      prefix(c_out(TM()), prefix(c_in(ribbon_left()), std::move(wake)));
  TermPtr exit_payload = par(amb(cleaner(), caps({c_out(TM()), c_in(ribbon_left())}, nil())),
                             par(amb(coin(), std::move(coin_back)),
                                 start_listener(m)));
  TermPtr exit = caps({c_open(get_out()), c_out(ribbon_left())},
                      std::move(exit_payload));
  return par(repl(std::move(ratchet)), repl(std::move(exit)));
}

// tmsoup := code(q_0) | ... | code(q_n) | getout | !open mo
inline TermPtr tmsoup(const TuringMachine& m, std::size_t wlen) {
  TermPtr t = par(getout(m, wlen), repl(prefix(c_open(mo()), nil())));
  for (const auto& q : m.states) t = par(code(m, q), t);
  return t;
}

// TMStart := TM[ open start.in ribbon_left.in cell.open q_start | tmsoup ]
inline TermPtr tm_start(const TuringMachine& m, std::size_t wlen) {
  return amb(TM(), par(start_listener(m), tmsoup(m, wlen)));
}

// TM(q) := TM[ open q | tmsoup ]
inline TermPtr tm_state(const TuringMachine& m, const std::string& q,
                        std::size_t wlen) {
  return amb(TM(), par(prefix(c_open(name(q)), nil()), tmsoup(m, wlen)));
}

}  // namespace enc

// Single-entry macro constructor, keyed by the macro's name. Parameters not
// used by a kind are ignored; a missing required parameter throws.
struct MacroParams {
  Digit digit = Digit::F;        // cell / clear / write / choice selector
  Word word;                     // word, ribbons, getout arity
  Word word2;                    // WorkRibb right word
  Move move = Move::Stay;        // domove
  std::string state;             // code / tm
  const TuringMachine* machine = nullptr;
  TermPtr hole;                  // contexts and ;P continuations
};

inline TermPtr encode_macro(const std::string& kind, const MacroParams& p) {
  using namespace enc;
  auto hole = [&]() { return p.hole ? p.hole : nil(); };
  auto machine = [&]() -> const TuringMachine& {
    if (!p.machine) throw std::invalid_argument("encode_macro: machine required for " + kind);
    check_reserved(*p.machine);
    return *p.machine;
  };
  if (kind == "cell") return cell_ctx(p.digit, hole());
  if (kind == "word") return word_ctx(p.word, hole());
  if (kind == "ExtensorFrozen") return extensor_frozen();
  if (kind == "ExtensorAlive") return extensor_alive();
  if (kind == "ExtensorDead") return extensor_dead();
  if (kind == "FrozenRibb") return frozen_ribb(p.word);
  if (kind == "GrowingRibb") return growing_ribb(p.word);
  if (kind == "WorkRibb") return work_ribb(p.word, p.word2, hole());
  if (kind == "OldRibb") return old_ribb();
  if (kind == "cleaninst") return cleaninst();
  if (kind == "deadcleancode") return deadcleancode();
  if (kind == "deadextcode") return deadextcode();
  if (kind == "sendstart") return sendstart();
  if (kind == "clear") return clear(p.digit, hole());
  if (kind == "write") return write(p.digit, hole());
  if (kind == "become") return become(hole());
  if (kind == "domove") return domove(p.move, hole());
  if (kind == "tcode") return tcode(p.digit, machine().delta.at({p.state, p.digit}));
  if (kind == "choice")
    return choice(p.digit == Digit::F ? hole() : nil(),
                  p.digit == Digit::T ? hole() : nil());
  if (kind == "code") return code(machine(), p.state);
  if (kind == "tmsoup") return tmsoup(machine(), p.word.size());
  if (kind == "TMStart") return tm_start(machine(), p.word.size());
  if (kind == "TM") return tm_state(machine(), p.state, p.word.size());
  if (kind == "getout") return getout(machine(), p.word.size());
  throw std::invalid_argument("encode_macro: unknown kind " + kind);
}

// WorkRibb(w1, w2)[ TM(q) ], with the getout code parametrized by word_param.
inline TermPtr encode_configuration(const TMConfiguration& c,
                                    const TuringMachine& m,
                                    const Word& word_param) {
  check_reserved(m);
  if (!m.has_state(c.state)) throw std::invalid_argument("unknown state");
  return enc::work_ribb(c.left, c.right,
                        enc::tm_state(m, c.state, word_param.size()));
}

// The loop construction: Q is the blocked soup of replicated spare parts plus
// the waiting machine; P0 and P1 differ by one trailing ff cell.
struct LoopTerms {
  TermPtr q, p0, p1;
};

inline LoopTerms loop_terms(const TuringMachine& m, const Word& w) {
  check_reserved(m);
  TermPtr q = par(repl(enc::frozen_ribb(w)),
                  par(repl(enc::old_ribb()),
                      par(repl(prefix(enc::c_open(names::msgn()), nil())),
                          par(repl(prefix(enc::c_out(names::cell()), nil())),
                              enc::tm_start(m, w.size())))));
  Word wff = w;
  wff.push_back(Digit::F);
  return LoopTerms{q, canonical_term(par(q, enc::growing_ribb(w))),
                   canonical_term(par(q, enc::growing_ribb(wff)))};
}

// ---- macro step verification ---------------------------------------------------

struct MacroStepReport {
  struct Entry {
    std::string macro;
    std::size_t expected = 0;
    std::size_t steps = 0;       // deterministic steps taken to the end state
    bool end_state_matches = false;
    bool ok() const { return steps == expected && end_state_matches; }
  };
  std::vector<Entry> entries;
  bool all_ok() const {
    for (const auto& e : entries)
      if (!e.ok()) return false;
    return true;
  }
};

namespace detail_tm {

// runs ~> from `from` and reports how many deterministic steps reach `want`
inline std::pair<std::size_t, bool> det_run_to(const TermPtr& from,
                                               const TermPtr& want,
                                               std::size_t max_steps) {
  TermPtr cur = canonical_term(from);
  TermPtr target = canonical_term(want);
  for (std::size_t k = 0; k <= max_steps; ++k) {
    if (term_equal(cur, target)) return {k, true};
    auto next = det_step(cur);
    if (!next) return {k, false};
    cur = next->state;
  }
  return {max_steps, false};
}

}  // namespace detail_tm

// The four deterministic macro sequences (choice resolution, clear, write,
// become), run against an inert two-state machine soup; expected counts are
// 3, 5, 4 and 3 steps.
inline MacroStepReport verify_macro_steps(Digit d, Digit d2, const Word& w) {
  using namespace enc;
  TuringMachine m;
  m.states = {"qs", "qa"};
  m.start = "qs";
  m.accept = "qa";
  m.delta[{"qs", Digit::F}] = {"qa", Digit::F, Move::Stay};
  m.delta[{"qs", Digit::T}] = {"qa", Digit::T, Move::Stay};

  Digit nd = d == Digit::F ? Digit::T : Digit::F;
  TermPtr P = amb(name("pmark"), nil());
  TermPtr Q = amb(name("qmark"), nil());
  TermPtr M = par(amb(names::digit(d), nil()),
                  par(repl(prefix(c_open(names::wo()), nil())),
                      word_ctx(w, extensor_dead())));
  TermPtr soup = amb(names::TM(), tmsoup(m, w.size()));
  auto scene = [&](TermPtr head_content, bool with_digit) {
    TermPtr ctx = par(amb(names::cell(), M), soup);
    ctx = par(repl(prefix(c_open(names::wo()), nil())), ctx);
    if (with_digit) ctx = par(amb(names::digit(d), nil()), ctx);
    return par(amb(names::head(), std::move(head_content)), ctx);
  };
  TermPtr parked = amb(names::coin(),
                       caps({c_in(names::digit(d2)), c_out(names::digit(d2))}, Q));

  MacroStepReport rep;

  {  // choice: head[d -> P + !d -> Q] resolves in 3 steps
    TermPtr from = scene(choice(d == Digit::F ? P : Q, d == Digit::F ? Q : P), true);
    TermPtr leftover = amb(names::coin(),
                           caps({c_in(names::digit(nd)), c_out(names::digit(nd))}, Q));
    TermPtr want = scene(par(P, leftover), true);
    auto [steps, hit] = detail_tm::det_run_to(from, want, 16);
    rep.entries.push_back({"choice", 3, steps, hit});
  }
  {  // clear(d): 5 steps, consuming the digit ambient
    TermPtr from = scene(par(clear(d, P), parked), true);
    TermPtr want = scene(par(P, parked), false);
    auto [steps, hit] = detail_tm::det_run_to(from, want, 16);
    rep.entries.push_back({"clear", 5, steps, hit});
  }
  {  // write(d): 4 steps, producing the digit ambient
    TermPtr from = scene(par(write(d, P), parked), false);
    TermPtr want = scene(par(P, parked), true);
    auto [steps, hit] = detail_tm::det_run_to(from, want, 16);
    rep.entries.push_back({"write", 4, steps, hit});
  }
  {  // become(mo): 3 steps, renaming head to mo
    TermPtr from = scene(par(become(P), parked), true);
    TermPtr want = par(amb(names::mo(), par(P, parked)),
                       par(amb(names::digit(d), nil()),
                           par(repl(prefix(c_open(names::wo()), nil())),
                               par(amb(names::cell(), M), soup))));
    auto [steps, hit] = detail_tm::det_run_to(from, want, 16);
    rep.entries.push_back({"become", 3, steps, hit});
  }
  return rep;
}

// ---- ribbon evolution and the loop ----------------------------------------------

// From GrowingRibb(w . ff^n): the ribbon can grow one cell, or die into the
// message-emitting work ribbon; every visited state stays a single
// ribbon_left ambient until the message leaves.
inline Verdict ribbon_grow_check(const Word& w, std::size_t n, Fuel fuel) {
  using namespace enc;
  Word wn = w;
  for (std::size_t i = 0; i < n; ++i) wn.push_back(Digit::F);
  Word wn1 = wn;
  wn1.push_back(Digit::F);

  TermPtr p_n = canonical_term(growing_ribb(wn));
  TermPtr grown = canonical_term(growing_ribb(wn1));
  TermPtr msg_body = par(repl(prefix(c_out(names::cell()), nil())),
                         prefix(c_out(names::ribbon_left()),
                                amb(names::start(), prefix(c_in(names::TM()), nil()))));
  TermPtr died =
      canonical_term(work_ribb({}, wn, amb(names::msgn(), msg_body)));

  auto is_single_ribbon = [](const TermPtr& s) {
    CanonicalProcess c = canonicalize(s);
    return c.comps.size() == 1 && !c.comps[0].replicated &&
           c.comps[0].body->op == Op::Amb &&
           nov_equal(c.comps[0].body->head, NameOrVar{names::ribbon_left()});
  };

  bool found_grown = false, found_died = false;
  TermSet visited{p_n};
  std::deque<TermPtr> frontier{p_n};
  bool complete = true;
  while (!frontier.empty()) {
    TermPtr cur = frontier.front();
    frontier.pop_front();
    if (term_equal(cur, grown)) found_grown = true;
    if (term_equal(cur, died)) found_died = true;
    if (found_grown && found_died) return Verdict::yes();
    if (!is_single_ribbon(cur)) {
      // only the post-exit states (message beside the ribbon) may break the
      // shape; they are terminal
      if (!reduce_once(cur).empty())
        return Verdict::no();
      continue;
    }
    // beyond the two targets the ribbon just keeps growing
    if (term_equal(cur, grown) || term_equal(cur, died)) continue;
    for (auto& r : reduce_once(cur)) {
      if (visited.count(r.state)) continue;
      if (visited.size() >= fuel.max_states)
        return Verdict::unknown("ribbon search fuel exhausted");
      visited.insert(r.state);
      frontier.push_back(r.state);
    }
  }
  if (found_grown && found_died) return Verdict::yes();
  return complete ? Verdict::no() : Verdict::unknown("ribbon search truncated");
}

// WorkRibb(w, eps)[0] | cleaner[in ribbon_left] ==> OldRibb
inline Verdict cleaner_check(const Word& w, Fuel fuel) {
  using namespace enc;
  TermPtr from = par(work_ribb(w, {}, nil()),
                     amb(names::cleaner(), prefix(c_in(names::ribbon_left()), nil())));
  TermPtr want = canonical_term(old_ribb());
  ReachResult r = reduce_star(from, fuel);
  if (r.states.count(want)) return Verdict::yes();
  return r.complete ? Verdict::no() : Verdict::unknown("cleaner search truncated");
}

struct LoopResult {
  Verdict forward;   // P0 ==> P1
  Verdict backward;  // P1 ==> P0 iff the machine accepts the word
  std::size_t backward_path_length = 0;  // BFS depth of the found loop closure
};

namespace detail_tm {

inline Verdict bfs_find(const TermPtr& from, const TermPtr& target, Fuel fuel,
                        std::size_t* depth_out) {
  TermPtr start = canonical_term(from);
  TermPtr want = canonical_term(target);
  if (term_equal(start, want)) {
    if (depth_out) *depth_out = 0;
    return Verdict::yes();
  }
  TermSet visited{start};
  std::deque<std::pair<TermPtr, std::size_t>> frontier{{start, 0}};
  bool truncated = false;
  while (!frontier.empty()) {
    auto [cur, d] = frontier.front();
    frontier.pop_front();
    if (d >= fuel.max_depth) {
      truncated = true;
      continue;
    }
    for (auto& r : reduce_once(cur)) {
      if (term_equal(r.state, want)) {
        if (depth_out) *depth_out = d + 1;
        return Verdict::yes();
      }
      if (visited.count(r.state)) continue;
      if (visited.size() >= fuel.max_states) return Verdict::unknown("state budget exhausted");
      visited.insert(r.state);
      frontier.emplace_back(r.state, d + 1);
    }
  }
  return truncated ? Verdict::unknown("depth budget exhausted") : Verdict::no();
}

}  // namespace detail_tm

// Builds P0, P1 for machine and word, confirms P0 ==> P1, and searches
// P1 ==> P0, which closes exactly when the machine accepts the word on some
// ribbon w . ff^N.
inline LoopResult loop_check(const TuringMachine& m, const Word& w, Fuel fuel) {
  LoopTerms terms = loop_terms(m, w);
  LoopResult res;
  res.forward = detail_tm::bfs_find(terms.p0, terms.p1, Fuel{4096, 64}, nullptr);
  res.backward =
      detail_tm::bfs_find(terms.p1, terms.p0, fuel, &res.backward_path_length);
  return res;
}

// Every macro of the encoding stays inside MA^s_IF, except for the pieces
// containing sendstart: its message climbs an unboundedly grown ribbon with
// `out ext.!out cell`, and replication under a capability leaves the literal
// MA^s_IF grammar. The guarded body is still image-finite (its stuttering
// closure is the singleton {!out cell}), which is the property the
// completeness machinery actually uses.
inline bool encoding_is_maifs(const TuringMachine& m, const Word& w) {
  using namespace enc;
  std::vector<TermPtr> pieces = {
      old_ribb(), work_ribb(w, w, nil()), tm_start(m, w.size()),
      tm_state(m, m.start, w.size()), cleaninst(), deadcleancode(),
      extensor_dead()};
  for (const auto& p : pieces)
    if (!classify(p).is_maifs) return false;
  return true;
}

// The image-finiteness of the one guard that leaves the syntactic class.
inline bool sendstart_guard_image_finite(Fuel fuel) {
  TermPtr body = repl(prefix(enc::c_out(names::cell()), nil()));
  ReachResult clo = stutter_closure(body, enc::c_out(names::ext()), fuel);
  return clo.complete && clo.states.size() == 1;
}

}  // namespace tm
}  // namespace ambient
