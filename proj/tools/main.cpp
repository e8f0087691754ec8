// Command-line front end for the ambient calculus workbench.
//
// Processes, formulas and machine descriptions are accepted inline or as
// @file references. Verdicts print as true / false / unknown:<reason>; with
// --format records every result line is a self-delimiting JSON record.
// Exit codes: 0 success, 1 input error, 2 (configurable) for Unknown verdicts.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ambient/ambient.hpp"

using namespace ambient;
using nlohmann::json;

namespace {

struct Common {
  bool sync = false;
  std::size_t max_states = 100000;
  std::size_t max_depth = 64;
  std::string format = "text";
  int unknown_exit = 2;

  CalculusMode mode() const {
    return sync ? CalculusMode::Sync : CalculusMode::Async;
  }
  Fuel fuel() const { return Fuel{max_states, max_depth}; }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_flag("--sync", c.sync, "synchronous communication mode");
  cmd->add_option("--max-states", c.max_states, "state budget for searches")
      ->capture_default_str();
  cmd->add_option("--max-depth", c.max_depth, "depth budget for searches")
      ->capture_default_str();
  cmd->add_option("--format", c.format, "output format: text or records")
      ->check(CLI::IsMember({"text", "records"}))
      ->capture_default_str();
  cmd->add_option("--unknown-exit", c.unknown_exit,
                  "exit status for unknown verdicts")
      ->capture_default_str();
}

std::string slurp(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw std::runtime_error("cannot read file: " + arg.substr(1));
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

TermPtr read_process(const std::string& arg, const Common& c) {
  return parse_process(slurp(arg), c.mode());
}

void emit(const Common& c, const std::string& key, const std::string& value) {
  if (c.format == "records")
    std::cout << json{{key, value}} << "\n";
  else
    std::cout << value << "\n";
}

int verdict_exit(const Common& c, const Verdict& v) {
  return v.v == Verdict::Unknown ? c.unknown_exit : 0;
}

int run(int argc, char** argv) {
  CLI::App app{"workbench for the public mobile ambients calculus and the ambient logic"};
  app.require_subcommand(1);

  Common c;
  std::string arg1, arg2, method = "auto", emit_what = "p1", word_arg,
              left_arg, right_arg, state_arg;
  std::vector<std::string> witnesses;
  std::size_t enum_bound = 64, max_steps = 256;
  bool explain = false;
  std::string digit_arg = "f", parked_arg = "t", macro_word = "ft";

  auto* parse_cmd = app.add_subcommand("parse", "parse a process and print it back");
  add_common(parse_cmd, c);
  parse_cmd->add_option("process", arg1)->required();

  auto* norm = app.add_subcommand("norm", "print the canonical form for ==");
  add_common(norm, c);
  norm->add_option("process", arg1)->required();

  auto* reduce = app.add_subcommand("reduce", "print the one-step reducts");
  add_common(reduce, c);
  reduce->add_option("process", arg1)->required();

  auto* trace = app.add_subcommand("trace", "follow deterministic evolution, one record per step");
  add_common(trace, c);
  trace->add_option("process", arg1)->required();
  trace->add_option("--max-steps", max_steps, "step limit")->capture_default_str();

  auto* barbs_cmd = app.add_subcommand("barbs", "weak barbs of a process");
  add_common(barbs_cmd, c);
  barbs_cmd->add_option("process", arg1)->required();

  auto* equiv = app.add_subcommand("equiv", "decide logical equivalence");
  add_common(equiv, c);
  equiv->add_option("p", arg1)->required();
  equiv->add_option("q", arg2)->required();
  equiv->add_option("--method", method, "eta | bisim | auto")
      ->check(CLI::IsMember({"eta", "bisim", "auto"}))
      ->capture_default_str();
  equiv->add_flag("--explain", explain, "print the clause trace that decided the pair");

  auto* check = app.add_subcommand("check", "model-check a formula against a process");
  add_common(check, c);
  check->add_option("process", arg1)->required();
  check->add_option("formula", arg2)->required();
  check->add_option("--witness", witnesses,
                    "candidate refuter for guarantee formulas (repeatable)");
  check->add_option("--enum-bound", enum_bound,
                    "model enumeration bound for guarantee validation")
      ->capture_default_str();

  auto* dist = app.add_subcommand("distinguish",
                                  "formula separating two non-bisimilar finite processes");
  add_common(dist, c);
  dist->add_option("p", arg1)->required();
  dist->add_option("q", arg2)->required();

  auto* enc = app.add_subcommand("encode-tm", "compile a Turing machine description");
  add_common(enc, c);
  enc->add_option("machine", arg1)->required();
  enc->add_option("--word", word_arg, "input word over {f,t}")->required();
  enc->add_option("--emit", emit_what,
                  "tmstart | config | p0 | p1 | q (loop context)")
      ->check(CLI::IsMember({"tmstart", "config", "p0", "p1", "q"}))
      ->capture_default_str();
  enc->add_option("--left", left_arg, "left word of a configuration (default: first letter)");
  enc->add_option("--right", right_arg, "right word of a configuration");
  enc->add_option("--state", state_arg, "machine state of a configuration");

  auto* loop = app.add_subcommand("loop-check", "search the loop of the undecidability construction");
  add_common(loop, c);
  loop->add_option("machine", arg1)->required();
  loop->add_option("--word", word_arg, "input word over {f,t}")->required();
  loop->get_option("--max-depth")->default_val(std::size_t{100000});

  auto* macros = app.add_subcommand("verify-macros", "deterministic step counts of the encoding macros");
  add_common(macros, c);
  macros->add_option("--digit", digit_arg, "cell digit (f|t)")->capture_default_str();
  macros->add_option("--parked", parked_arg, "digit of the parked choice branch (f|t)")
      ->capture_default_str();
  macros->add_option("--word", macro_word, "nested ribbon word")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (parse_cmd->parsed()) {
    emit(c, "process", print_process(read_process(arg1, c)));
    return 0;
  }
  if (norm->parsed()) {
    emit(c, "canonical", print_process(canonical_term(read_process(arg1, c))));
    return 0;
  }
  if (reduce->parsed()) {
    for (auto& r : reduce_once(read_process(arg1, c), c.mode())) {
      if (c.format == "records")
        std::cout << json{{"rule", rule_name(r.rule)},
                          {"process", print_process(r.state)}}
                  << "\n";
      else
        std::cout << rule_name(r.rule) << "  " << print_process(r.state) << "\n";
    }
    return 0;
  }
  if (trace->parsed()) {
    TermPtr cur = canonical_term(read_process(arg1, c));
    for (std::size_t i = 0; i < max_steps; ++i) {
      auto d = det_step(cur, c.mode());
      if (!d) break;
      if (c.format == "records")
        std::cout << json{{"rule", rule_name(d->rule)},
                          {"process", print_process(d->state)}}
                  << "\n";
      else
        std::cout << rule_name(d->rule) << "  " << print_process(d->state) << "\n";
      cur = d->state;
    }
    return 0;
  }
  if (barbs_cmd->parsed()) {
    BarbResult b = barbs(read_process(arg1, c), c.fuel(), c.mode());
    std::string names;
    for (Name n : b.names) names += (names.empty() ? "" : " ") + name_str(n);
    if (c.format == "records")
      std::cout << json{{"barbs", names}, {"complete", b.complete}} << "\n";
    else
      std::cout << names << (b.complete ? "" : "  (incomplete)") << "\n";
    return b.complete ? 0 : c.unknown_exit;
  }
  if (equiv->parsed()) {
    TermPtr p = read_process(arg1, c), q = read_process(arg2, c);
    BisimConfig cfg;
    cfg.fuel = c.fuel();
    cfg.mode = c.mode();
    cfg.explain = explain;
    Verdict v;
    if (method == "eta") {
      if (c.sync)
        v = struct_congruent(p, q) ? Verdict::yes() : Verdict::no();
      else
        v = eta_congruent(p, q) ? Verdict::yes() : Verdict::no();
    } else if (method == "bisim") {
      BisimChecker checker(cfg);
      v = checker.check(p, q);
      if (explain)
        for (const auto& line : checker.explanation()) std::cerr << line << "\n";
    } else if (classify(p).is_maifs && classify(q).is_maifs) {
      v = logical_equiv(p, q, cfg);
      if (explain)
        std::cerr << (c.sync ? "decided by structural congruence on synchronous MA^ss_IF"
                             : "decided by eta-congruence on MA^s_IF")
                  << "\n";
    } else {
      BisimChecker checker(cfg);
      v = checker.check(p, q);
      if (explain)
        for (const auto& line : checker.explanation()) std::cerr << line << "\n";
    }
    emit(c, "verdict", to_string(v));
    return verdict_exit(c, v);
  }
  if (check->parsed()) {
    SatConfig cfg;
    cfg.fuel = c.fuel();
    cfg.mode = c.mode();
    cfg.policy.enumeration_bound = enum_bound;
    for (const auto& w : witnesses) cfg.policy.witnesses.push_back(read_process(w, c));
    Verdict v = satisfies(read_process(arg1, c), parse_formula(slurp(arg2)), cfg);
    emit(c, "verdict", to_string(v));
    return verdict_exit(c, v);
  }
  if (dist->parsed()) {
    auto f = distinguish(read_process(arg1, c), read_process(arg2, c), c.mode());
    if (!f) {
      emit(c, "result", "bisimilar");
      return 0;
    }
    emit(c, "formula", print_formula(*f));
    return 0;
  }
  if (enc->parsed()) {
    tm::TuringMachine m = tm::parse_machine(slurp(arg1));
    tm::check_reserved(m);
    tm::Word w = tm::parse_word(word_arg);
    TermPtr t;
    if (emit_what == "tmstart") {
      t = tm::enc::tm_start(m, w.size());
    } else if (emit_what == "config") {
      tm::TMConfiguration conf;
      conf.left = left_arg.empty() ? tm::Word{w.at(0)} : tm::parse_word(left_arg);
      conf.right = right_arg.empty() ? tm::Word(w.begin() + 1, w.end())
                                     : tm::parse_word(right_arg);
      conf.state = state_arg.empty() ? m.start : state_arg;
      t = tm::encode_configuration(conf, m, w);
    } else {
      tm::LoopTerms lt = tm::loop_terms(m, w);
      t = emit_what == "p0" ? lt.p0 : emit_what == "p1" ? lt.p1 : lt.q;
    }
    emit(c, "process", print_process(canonical_term(t)));
    return 0;
  }
  if (loop->parsed()) {
    tm::TuringMachine m = tm::parse_machine(slurp(arg1));
    tm::LoopResult r = tm::loop_check(m, tm::parse_word(word_arg), c.fuel());
    if (c.format == "records")
      std::cout << json{{"forward", to_string(r.forward)},
                        {"backward", to_string(r.backward)},
                        {"loop_length", r.backward_path_length}}
                << "\n";
    else {
      std::cout << "P0 ==> P1: " << to_string(r.forward) << "\n";
      std::cout << "P1 ==> P0: " << to_string(r.backward);
      if (r.backward.v == Verdict::True)
        std::cout << "  (loop closes after " << r.backward_path_length << " steps)";
      std::cout << "\n";
    }
    if (r.forward.v == Verdict::Unknown || r.backward.v == Verdict::Unknown)
      return c.unknown_exit;
    return 0;
  }
  if (macros->parsed()) {
    auto digit = [](const std::string& s) {
      return s == "t" ? tm::Digit::T : tm::Digit::F;
    };
    tm::MacroStepReport rep = tm::verify_macro_steps(
        digit(digit_arg), digit(parked_arg), tm::parse_word(macro_word));
    for (auto& e : rep.entries) {
      if (c.format == "records")
        std::cout << json{{"macro", e.macro},
                          {"steps", e.steps},
                          {"expected", e.expected},
                          {"end_state", e.end_state_matches ? "match" : "mismatch"}}
                  << "\n";
      else
        std::cout << e.macro << ": " << e.steps << " steps (expected "
                  << e.expected << "), end state "
                  << (e.end_state_matches ? "matches" : "MISMATCH") << "\n";
    }
    return rep.all_ok() ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
