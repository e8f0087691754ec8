#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace ambient;
using namespace ambient::tm;

static TuringMachine immediate_accept() {
  TuringMachine m;
  m.states = {"q0", "qA"};
  m.start = "q0";
  m.accept = "qA";
  m.delta[{"q0", Digit::F}] = {"qA", Digit::F, Move::Stay};
  m.delta[{"q0", Digit::T}] = {"qA", Digit::T, Move::Stay};
  return m;
}

static TuringMachine spinner() {  // never reaches the accepting state
  TuringMachine m;
  m.states = {"q0", "qA"};
  m.start = "q0";
  m.accept = "qA";
  m.delta[{"q0", Digit::F}] = {"q0", Digit::F, Move::Stay};
  m.delta[{"q0", Digit::T}] = {"q0", Digit::T, Move::Stay};
  return m;
}

static TuringMachine walker() {  // exercises all three moves
  TuringMachine m;
  m.states = {"q0", "q1", "qA"};
  m.start = "q0";
  m.accept = "qA";
  m.delta[{"q0", Digit::F}] = {"q1", Digit::T, Move::Right};
  m.delta[{"q0", Digit::T}] = {"qA", Digit::T, Move::Stay};
  m.delta[{"q1", Digit::F}] = {"q0", Digit::F, Move::Left};
  m.delta[{"q1", Digit::T}] = {"q1", Digit::T, Move::Right};
  return m;
}

TEST_CASE("machine file format") {
  TuringMachine m = parse_machine(
      "# a comment\n"
      "states: q0 q1 qA\n"
      "start: q0\n"
      "accept: qA\n"
      "q0 f -> q1 t R\n"
      "q0 t -> qA t S\n"
      "q1 f -> q0 f L\n"
      "q1 t -> q1 t R\n");
  CHECK(m.states.size() == 3);
  CHECK(m.delta.at({"q0", Digit::F}).move == Move::Right);
  CHECK_THROWS_AS(parse_machine("states: a b\nstart: a\naccept: b\n"),
                  std::invalid_argument);  // delta not total
  CHECK_THROWS_AS(parse_machine("states: a b\nstart: c\naccept: b\n"
                                "a f -> b f S\na t -> b t S\n"),
                  std::invalid_argument);  // unknown start
}

TEST_CASE("tm_step oracle") {
  TuringMachine m;
  m.states = {"q0", "qA"};
  m.start = "q0";
  m.accept = "qA";
  m.delta[{"q0", Digit::F}] = {"qA", Digit::T, Move::Stay};
  m.delta[{"q0", Digit::T}] = {"qA", Digit::T, Move::Stay};
  auto r = tm_step({parse_word("f"), "q0", {}}, m);
  REQUIRE(r.has_value());
  CHECK(word_str(r->left) == "t");
  CHECK(r->state == "qA");
  CHECK(r->right.empty());
  CHECK_THROWS_AS(tm_step({parse_word("f"), "qA", {}}, m), std::invalid_argument);

  // moves extend into / retreat from the right word
  TuringMachine w = walker();
  auto right = tm_step({parse_word("f"), "q0", parse_word("ff")}, w);
  REQUIRE(right.has_value());
  CHECK(word_str(right->left) == "tf");
  CHECK(word_str(right->right) == "f");
  // falling off either end yields no configuration
  CHECK_FALSE(tm_step({parse_word("f"), "q0", {}}, w).has_value());
  CHECK_FALSE(tm_step({parse_word("f"), "q1", parse_word("f")}, w).has_value());
}

TEST_CASE("encoding shapes") {
  using namespace enc;
  // cell(ff)[hole] = cell[ ff[0] | !open wo | hole ]
  TermPtr c = cell_ctx(Digit::F, amb(name("hole"), nil()));
  CHECK(struct_congruent(c, parse_process("cell[ff[0] | !open wo.0 | hole[0]]")));
  // code(q_A) = !q_A[ get_out[0] ]
  TuringMachine m = immediate_accept();
  CHECK(struct_congruent(code(m, "qA"), parse_process("!qA[get_out[0]]")));
  TuringMachine bad = immediate_accept();
  bad.states[0] = "cell";
  bad.start = "cell";
  bad.delta.clear();
  bad.delta[{"cell", Digit::F}] = {"qA", Digit::F, Move::Stay};
  bad.delta[{"cell", Digit::T}] = {"qA", Digit::T, Move::Stay};
  CHECK_THROWS_AS(check_reserved(bad), std::invalid_argument);
}

TEST_CASE("encode_macro dispatcher covers every kind") {
  TuringMachine m = walker();
  Word w = parse_word("ft");
  MacroParams base;
  base.word = w;
  base.word2 = w;
  base.machine = &m;
  base.state = "q0";
  base.digit = Digit::F;
  base.move = Move::Right;
  const char* kinds[] = {"cell", "word", "ExtensorFrozen", "ExtensorAlive",
                         "ExtensorDead", "FrozenRibb", "GrowingRibb", "WorkRibb",
                         "OldRibb", "cleaninst", "deadcleancode", "deadextcode",
                         "sendstart", "clear", "write", "become", "domove",
                         "tcode", "choice", "code", "tmsoup", "TMStart", "TM",
                         "getout"};
  // every macro is closed; all are MA^s_IF except the sendstart-bearing ones
  // (the message climb `out ext.!out cell` leaves the literal grammar)
  NameSet not_maifs;
  for (const char* k : {"ExtensorFrozen", "ExtensorAlive", "FrozenRibb",
                        "GrowingRibb", "sendstart"})
    not_maifs.insert(name(k));
  for (const char* k : kinds) {
    TermPtr t = encode_macro(k, base);
    INFO(k);
    CHECK(is_closed(t));
    CHECK(classify(t).is_maifs == !not_maifs.count(name(k)));
  }
  CHECK(struct_congruent(encode_macro("code", [&] {
                           MacroParams p = base;
                           p.state = "qA";
                           return p;
                         }()),
                         parse_process("!qA[get_out[0]]")));
  CHECK_THROWS_AS(encode_macro("nonsense", base), std::invalid_argument);
}

TEST_CASE("every macro is closed; MA^s_IF membership") {
  TuringMachine m = walker();
  Word w = parse_word("ft");
  CHECK(encoding_is_maifs(m, w));
  for (const TermPtr& t :
       {enc::frozen_ribb(w), enc::growing_ribb(w), enc::old_ribb(),
        enc::tm_start(m, w.size()), enc::work_ribb(w, w, nil())})
    CHECK(is_closed(t));
  // dead-extensor pieces are syntactically MA^s_IF
  CHECK(classify(enc::work_ribb(w, w, nil())).is_maifs);
  CHECK(classify(enc::tm_start(m, w.size())).is_maifs);
  CHECK(classify(enc::old_ribb()).is_maifs);
  // the live extensor carries `out ext.!out cell`, which leaves the literal
  // grammar; the guard is nevertheless image-finite
  CHECK_FALSE(classify(enc::growing_ribb(w)).is_maifs);
  CHECK(sendstart_guard_image_finite(Fuel{1000, 1000}));
  LoopTerms lt = loop_terms(m, w);
  CHECK(is_closed(lt.p0));
  CHECK(is_closed(lt.p1));
}

TEST_CASE("macro step counts are exactly 3/5/4/3") {
  for (Digit d : {Digit::F, Digit::T}) {
    for (Digit d2 : {Digit::F, Digit::T}) {
      auto rep = verify_macro_steps(d, d2, parse_word("ft"));
      REQUIRE(rep.entries.size() == 4);
      for (auto& e : rep.entries) {
        INFO(e.macro << " d=" << (d == Digit::F ? 'f' : 't')
                     << " d2=" << (d2 == Digit::F ? 'f' : 't'));
        CHECK(e.steps == e.expected);
        CHECK(e.end_state_matches);
      }
    }
  }
}

TEST_CASE("one-step simulation adequacy against the oracle") {
  TuringMachine m = walker();
  Word wp = parse_word("fff");
  TMConfiguration c{parse_word("f"), "q0", parse_word("ff")};
  int legs = 0;
  while (c.state != m.accept && legs < 4) {
    auto next = tm_step(c, m);
    REQUIRE(next.has_value());
    TermPtr cur = canonical_term(encode_configuration(c, m, wp));
    TermPtr want = canonical_term(encode_configuration(*next, m, wp));
    bool hit = false;
    for (int k = 0; k <= 30; ++k) {
      if (term_equal(cur, want)) {
        hit = true;
        break;
      }
      auto d = det_step(cur);
      REQUIRE(d.has_value());
      cur = d->state;
    }
    CHECK(hit);
    c = *next;
    ++legs;
  }
  CHECK(legs > 1);
}

TEST_CASE("blocked machine configurations stall the encoding") {
  TuringMachine m = walker();
  TMConfiguration c{parse_word("f"), "q0", {}};
  CHECK_FALSE(tm_step(c, m).has_value());
  TermPtr cur = canonical_term(encode_configuration(c, m, parse_word("f")));
  for (int k = 0; k < 40; ++k) {
    auto d = det_step(cur);
    if (!d) break;
    cur = d->state;
  }
  CHECK(det_step(cur) == std::nullopt);
}

TEST_CASE("ribbon evolution") {
  Fuel fuel{100000, 100000};
  CHECK(ribbon_grow_check(parse_word("f"), 0, fuel).v == Verdict::True);
  CHECK(ribbon_grow_check(parse_word("t"), 0, fuel).v == Verdict::True);
  CHECK(cleaner_check(parse_word("f"), fuel).v == Verdict::True);
  CHECK(cleaner_check(parse_word("ft"), fuel).v == Verdict::True);
}

TEST_CASE("loop lemma at desk scale") {
  Fuel fuel{100000, 100000};
  LoopResult good = loop_check(immediate_accept(), parse_word("f"), fuel);
  CHECK(good.forward.v == Verdict::True);
  CHECK(good.backward.v == Verdict::True);
  CHECK(good.backward_path_length > 0);

  // a machine that never accepts must not close the loop
  LoopResult bad = loop_check(spinner(), parse_word("f"), Fuel{3000, 3000});
  CHECK(bad.forward.v == Verdict::True);
  CHECK(bad.backward.v != Verdict::True);
}
