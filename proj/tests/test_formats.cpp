#include <doctest.h>

#include <string>

#include "resol/formats.hpp"

using namespace resol;

namespace {

ParseError capture(void (*f)(const char*), const char* text) {
  try {
    f(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a ParseError");
  return ParseError("", 0, 0, "");
}

void wiring_probe(const char* t) { parse_wiring_text(t, "probe"); }
void automaton_probe(const char* t) { parse_automaton_text(t, "probe"); }
void circuit_probe(const char* t) { parse_circuit_text(t, "probe"); }
void query_probe(const char* t) { parse_query_text(t, "probe"); }

}  // namespace

TEST_CASE("wiring files ignore comments and blank lines") {
  Wiring w = parse_wiring_text(
      "# movement rules\n"
      "\n"
      "f(X) <- g(X)  # swap\n"
      "  h(X) <- h(X)\n");
  CHECK(w.size() == 2);
  CHECK(w.contains(parse_flow("f(X) <- g(X)")));
  CHECK(w.contains(parse_flow("h(X) <- h(X)")));
}

TEST_CASE("wiring parse errors carry file line and column") {
  ParseError e = capture(wiring_probe, "f(X) <- g(X)\nf(X) = g(X)\n");
  CHECK(e.file == "probe");
  CHECK(e.line == 2);
  CHECK(e.col == 1);

  e = capture(wiring_probe, "a <- b <- c\n");
  CHECK(e.line == 1);

  // A bad term inside the body is located past the arrow.
  e = capture(wiring_probe, "f(X) <- g(X))\n");
  CHECK(e.line == 1);
  CHECK(e.col > 9);

  // Flow invariant violations surface as parse errors too.
  e = capture(wiring_probe, "f(Y) <- g(X)\n");
  CHECK(e.line == 1);

  // Indentation shifts the reported column.
  e = capture(wiring_probe, "   broken\n");
  CHECK(e.col == 4);
}

TEST_CASE("automaton files parse sections and transitions") {
  Automaton m = parse_automaton_text(
      "# comments allowed\n"
      "states: go reject\n"
      "init: go\n"
      "input: a b\n"
      "stack: s t\n"
      "heads: 1\n"
      "trans:\n"
      "(go; a; bot) -> (go; +1; push s)\n"
      "(go; b; s) -> (go; -1; pop)\n"
      "(go; rend; t) -> (reject; 0; push s)\n");
  CHECK(m.states.size() == 2);
  CHECK(m.init == m.state_index("go"));
  CHECK(m.heads == 1);
  REQUIRE(m.transitions.size() == 3);
  CHECK(m.transitions[0].action == Automaton::Transition::kPush);
  CHECK(m.transitions[0].push_sym == "s");
  CHECK(m.transitions[1].action == Automaton::Transition::kPop);
  CHECK(m.transitions[1].moves == std::vector<int>{-1});
  CHECK(m.transitions[2].reads == std::vector<std::string>{"rend"});
}

TEST_CASE("stay transitions desugar into a marker round trip") {
  Automaton m = parse_automaton_text(
      "states: go\n"
      "init: go\n"
      "input: a\n"
      "stack: s\n"
      "heads: 1\n"
      "trans:\n"
      "(go; a; s) -> (go; +1; stay)\n");
  // One extra synthesized state and the marker stack symbol.
  REQUIRE(m.states.size() == 2);
  CHECK(m.states[1].substr(0, 5) == "_stay");
  CHECK(m.stack_alphabet.back() == "_staym");
  REQUIRE(m.transitions.size() == 2);
  const auto& out = m.transitions[0];
  const auto& back = m.transitions[1];
  CHECK(out.action == Automaton::Transition::kPush);
  CHECK(out.push_sym == "_staym");
  CHECK(out.moves == std::vector<int>{0});
  CHECK(out.to == 1);
  CHECK(back.from == 1);
  CHECK(back.action == Automaton::Transition::kPop);
  CHECK(back.stack_read == "_staym");
  CHECK(back.moves == std::vector<int>{+1});
  CHECK(back.to == m.state_index("go"));
}

TEST_CASE("automaton parse errors") {
  // Missing heads section.
  ParseError e = capture(automaton_probe,
                         "states: go\ninit: go\ninput: a\nstack: s\ntrans:\n");
  CHECK(e.file == "probe");

  // Unknown state in a transition.
  e = capture(automaton_probe,
              "states: go\ninit: go\ninput: a\nstack: s\nheads: 1\ntrans:\n"
              "(go; a; s) -> (gone; +1; pop)\n");
  CHECK(e.line == 7);

  // Bad move token.
  e = capture(automaton_probe,
              "states: go\ninit: go\ninput: a\nstack: s\nheads: 1\ntrans:\n"
              "(go; a; s) -> (go; +2; pop)\n");
  CHECK(e.line == 7);

  // Transition line outside a trans: section.
  e = capture(automaton_probe,
              "states: go\n(go; a; s) -> (go; +1; pop)\n");
  CHECK(e.line == 2);

  // Validation failures point at the file too: reads arity vs head count.
  e = capture(automaton_probe,
              "states: go\ninit: go\ninput: a\nstack: s\nheads: 2\ntrans:\n"
              "(go; a; s) -> (go; +1; pop)\n");
  CHECK(e.file == "probe");
}

TEST_CASE("circuit files parse gates and the output") {
  Circuit c = parse_circuit_text(
      "gate x = one\n"
      "gate y = zero  # constant\n"
      "gate z = or(x, y)\n"
      "gate w = not(y)\n"
      "gate o = and(z, w)\n"
      "output o\n");
  CHECK(c.gates.size() == 5);
  CHECK(c.output == "o");
  CHECK(c.gates[2].kind == Circuit::kOr);
  CHECK(c.gates[2].inputs == std::vector<std::string>{"x", "y"});
  CHECK(eval_circuit(c) == 1);
}

TEST_CASE("circuit parse errors") {
  CHECK(capture(circuit_probe, "gate x = one\n").line == 1);  // missing output
  CHECK(capture(circuit_probe, "gate x = nand(a, b)\noutput x\n").line == 1);
  CHECK(capture(circuit_probe, "gate x = not(a, b)\noutput x\n").line == 1);
  CHECK(capture(circuit_probe, "gate x = one\ngate x = zero\noutput x\n").line == 2);
  CHECK(capture(circuit_probe, "output x\noutput x\n").line == 2);
  CHECK(capture(circuit_probe, "wire x = one\noutput x\n").line == 1);
}

TEST_CASE("query files parse all three sections") {
  UnaryQuery q = parse_query_text(
      "data:\n"
      "  f(c)\n"
      "  g(d)\n"
      "program:\n"
      "  g(X) <- f(X)\n"
      "goal:\n"
      "  g(c)\n");
  REQUIRE(q.data.size() == 2);
  CHECK(q.data[0] == parse_term("f(c)"));
  CHECK(q.data[1] == parse_term("g(d)"));
  CHECK(q.program.size() == 1);
  CHECK(q.goal == parse_term("g(c)"));
  CHECK(query_succeeds(q));
}

TEST_CASE("query parse errors") {
  CHECK(capture(query_probe, "data:\n  f(c)\n").line > 0);  // missing goal
  // Program flows must be unary stack operations.
  ParseError e = capture(query_probe,
                         "data:\n  c\nprogram:\n  f(X) . c <- d . X\ngoal:\n  c\n");
  CHECK(e.line == 4);
  e = capture(query_probe, "data:\n  c\ngoal:\n  c\n  d\n");
  CHECK(e.line == 5);
  e = capture(query_probe, "f(c)\n");
  CHECK(e.line == 1);
  // Bad term positions honor the section indentation.
  e = capture(query_probe, "data:\n  f(\ngoal:\n  c\n");
  CHECK(e.line == 2);
  CHECK(e.col >= 3);
}

TEST_CASE("formatted queries parse back unchanged") {
  UnaryQuery q = parse_query_text(
      "data:\n  f(g(c))\n  d\nprogram:\n  g(X) <- f(X)\n  X <- g(X)\ngoal:\n  d\n");
  std::string text = format_query(q);
  UnaryQuery r = parse_query_text(text);
  CHECK(r.data == q.data);
  CHECK(r.program == q.program);
  CHECK(r.goal == q.goal);
  // Idempotent: formatting the reparse changes nothing.
  CHECK(format_query(r) == text);
}

TEST_CASE("file loading reports missing paths") {
  CHECK_THROWS_AS(load_wiring("/nonexistent/path.w"), std::invalid_argument);
  CHECK_THROWS_AS(read_file("/nonexistent/path"), std::invalid_argument);
}
