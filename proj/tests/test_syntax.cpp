#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace ambient;

static TermPtr P(const char* s) { return parse_process(s); }
static TermPtr PS(const char* s) { return parse_process(s, CalculusMode::Sync); }

TEST_CASE("parser on basic forms") {
  CHECK(P("0")->op == Op::Nil);
  CHECK(term_equal(P("in n.0"), prefix(CapKind::In, name("n"), nil())));
  CHECK(term_equal(P("n[0]"), amb(name("n"), nil())));
  CHECK(term_equal(P("<n>"), msg(name("n"))));
  CHECK(term_equal(P("(x)<x>"), abs(msg(Var{0}))));
  CHECK(term_equal(P("a[0] | b[0]"),
                   par(amb(name("a"), nil()), amb(name("b"), nil()))));
  // the introduction's process
  TermPtr intro = P("!a[in c.0] | open a.b[0]");
  CHECK(term_equal(intro,
                   par(repl(amb(name("a"), prefix(CapKind::In, name("c"), nil()))),
                       prefix(CapKind::Open, name("a"), amb(name("b"), nil())))));
}

TEST_CASE("prefix sugar") {
  CHECK(term_equal(P("in n"), P("in n.0")));
  CHECK(term_equal(P("!a[in c] | open a.b[0]"), P("!a[in c.0] | open a.b[0]")));
  ParseOptions strict;
  strict.sugar = false;
  CHECK_THROWS_AS(parse_process("in n", strict), ParseError);
}

TEST_CASE("precedence and grouping") {
  // prefixes bind tightest; "|" is lowest
  CHECK(term_equal(P("in n.0 | m[0]"),
                   par(prefix(CapKind::In, name("n"), nil()), amb(name("m"), nil()))));
  CHECK(term_equal(P("open a.b[0] | c[0]"),
                   par(prefix(CapKind::Open, name("a"), amb(name("b"), nil())),
                       amb(name("c"), nil()))));
  CHECK(term_equal(P("!a[0] | b[0]"),
                   par(repl(amb(name("a"), nil())), amb(name("b"), nil()))));
  CHECK(term_equal(P("in n.(a[0] | b[0])"),
                   prefix(CapKind::In, name("n"),
                          par(amb(name("a"), nil()), amb(name("b"), nil())))));
}

TEST_CASE("binders shadow and resolve by depth") {
  // (x)(y)<x> : outer var has index 1 inside two binders
  CHECK(term_equal(P("(x)(y)<x>"), abs(abs(msg(Var{1})))));
  CHECK(term_equal(P("(x)(x)<x>"), abs(abs(msg(Var{0})))));
  // unbound identifiers are names
  CHECK(term_equal(P("(x)<y>"), abs(msg(name("y")))));
}

TEST_CASE("mode violations") {
  CHECK_THROWS_AS(P("<n>.0"), ParseError);
  CHECK(term_equal(PS("<n>.0"), msg(name("n"), nil())));
  CHECK(term_equal(PS("<n>"), msg(name("n"), nil())));  // sync sugar
  ParseOptions strict;
  strict.mode = CalculusMode::Sync;
  strict.sugar = false;
  CHECK_THROWS_AS(parse_process("<n>", strict), ParseError);
  CHECK(mode_consistent(P("<n>"), CalculusMode::Async));
  CHECK_FALSE(mode_consistent(PS("<n>"), CalculusMode::Async));
}

TEST_CASE("identifiers may carry primes and underscores") {
  CHECK(term_equal(P("a'[_b1[0]]"), amb(name("a'"), amb(name("_b1"), nil()))));
}

TEST_CASE("syntax errors carry a position") {
  CHECK_THROWS_AS(P("n["), ParseError);
  CHECK_THROWS_AS(P("(x)"), ParseError);
  CHECK_THROWS_AS(P("| a[0]"), ParseError);
  CHECK_THROWS_AS(P("a"), ParseError);
}

TEST_CASE("printing round-trips the spec examples") {
  CHECK(print_process(nil()) == "0");
  CHECK(print_process(par(msg(name("n")), abs(nil()))) == "<n> | (x)0");
  CHECK(term_equal(P(print_process(P("!a[in c.0] | open a.b[0]")).c_str()),
                   P("!a[in c.0] | open a.b[0]")));
}

TEST_CASE("round-trip on generated terms") {
  ts::Rng rng(20240801);
  for (int i = 0; i < 1000; ++i) {
    ts::GenOpts o;
    o.mode = (i % 3 == 0) ? CalculusMode::Sync : CalculusMode::Async;
    TermPtr t = ts::gen_term(rng, o);
    std::string s = print_process(t);
    ParseOptions po;
    po.mode = o.mode;
    TermPtr back = parse_process(s, po);
    INFO(s);
    CHECK(term_equal(t, back));
  }
}

TEST_CASE("free names") {
  CHECK(free_names(P("open n.0")) == NameSet{name("n")});
  CHECK(free_names(P("(x)<x>")).empty());
  NameSet nm{name("n")};
  nm.insert(name("m"));
  CHECK(free_names(P("n[<m>] | open n.0")) == nm);
  ts::Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    TermPtr t = ts::gen_term(rng, {});
    NameSet ref;
    ts::oracle_fn(t, ref);
    CHECK(free_names(t) == ref);
  }
}

TEST_CASE("free variables and closedness") {
  CHECK(free_vars(P("(x)<x>")).empty());
  CHECK(is_closed(P("(x)<x>")));
  TermPtr open_msg = msg(FreeVar{name("x")});
  CHECK(free_vars(open_msg) == NameSet{name("x")});
  CHECK_FALSE(is_closed(open_msg));
  // (x)(<x> | <y>) with y a free variable
  TermPtr t = abs(par(msg(Var{0}), msg(FreeVar{name("y")})));
  CHECK(free_vars(t) == NameSet{name("y")});
}

TEST_CASE("substitution") {
  Name x = name("x"), n = name("n");
  // binder shadows: parsed (x)<x> has no free x
  TermPtr t = P("(x)<x>");
  CHECK(term_equal(substitute_name(t, x, n), t));
  CHECK(term_equal(substitute_name(msg(FreeVar{x}), x, n), msg(n)));
  TermPtr s = prefix(CapKind::In, FreeVar{x}, msg(FreeVar{x}));
  CHECK(term_equal(substitute_name(s, x, n), P("in n.<n>")));
  // fv(P{n/x}) = fv(P) minus x; fn grows by at most {n}
  ts::Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    TermPtr base = ts::gen_term(rng, {});
    TermPtr with_fv = par(base, msg(FreeVar{x}));
    TermPtr sub = substitute_name(with_fv, x, n);
    CHECK(free_vars(sub).count(x) == 0);
    NameSet expect = free_names(with_fv);
    expect.insert(n);
    for (Name fn : free_names(sub)) CHECK(expect.count(fn) == 1);
  }
}

TEST_CASE("replace_name") {
  Name m = name("m"), n = name("n");
  CHECK(term_equal(replace_name(P("m[0]"), m, n), P("n[0]")));
  TermPtr t = P("open a.b[0]");
  CHECK(term_equal(replace_name(t, m, n), t));  // m not free
  ts::Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    TermPtr base = ts::gen_term(rng, {});
    TermPtr r = replace_name(base, m, n);
    CHECK(free_names(r).count(m) == 0);
  }
}

TEST_CASE("degrees on the defining examples") {
  CHECK(seq_degree(P("0")) == 0);
  CHECK(seq_degree(P("<n>")) == 1);
  // (x)((x)0 | <x>) eta-normalizes to (x)0, so sd = 1
  CHECK(seq_degree(P("(x)((x)0 | <x>)")) == 1);
  CHECK(depth_degree(P("in n.m[0]")) == 0);
  CHECK(depth_degree(P("n[m[0]]")) == 2);
  CHECK(depth_degree(P("!a[0] | b[c[0]]")) == 2);
  CHECK_THROWS_AS(seq_degree(msg(FreeVar{name("x")})), std::invalid_argument);
}

TEST_CASE("prefix and message counts") {
  CHECK(count_prefixes(P("in n.(x)0")) == 2);
  CHECK(count_messages(P("<n> | <m>")) == 2);
  CHECK(count_prefixes(P("0")) == 0);
}

TEST_CASE("classification") {
  auto c1 = classify(P("!a[0]"));
  CHECK_FALSE(c1.is_finite);
  CHECK(c1.is_maifs);
  auto c2 = classify(P("in n.!a[0]"));
  CHECK_FALSE(c2.is_maifs);
  auto c3 = classify(P("!0"));
  CHECK(c3.is_finite);
  auto c4 = classify(P("in n.0"));
  CHECK(c4.is_single);
  CHECK(classify(P("n[<m>]")).is_single);
  CHECK_FALSE(classify(P("<n>")).is_single);
  CHECK_FALSE(classify(P("a[0] | b[0]")).is_single);
  CHECK_FALSE(classify(msg(FreeVar{name("x")})).is_closed);
}
