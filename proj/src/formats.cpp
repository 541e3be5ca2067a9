#include "resol/formats.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace resol {

namespace {

struct Line {
  int number;
  int indent;        // column of the first kept character
  std::string text;  // comment-stripped, trimmed
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    std::size_t hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::size_t b = 0, e = raw.size();
    while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
    if (e > b)
      out.push_back({number, static_cast<int>(b) + 1,
                     std::string(raw.substr(b, e - b))});
    pos = end + 1;
    if (end == text.size()) break;
  }
  return out;
}

// Re-raises a single-line sub-parse at its position in the enclosing file.
[[noreturn]] void rethrow_at(const ParseError& e, const std::string& file,
                             int line, int col_base) {
  throw ParseError(file, line, col_base + e.col - 1, e.what());
}

TermId parse_term_at(std::string_view text, const std::string& file, int line,
                     int col_base) {
  try {
    return parse_term(text);
  } catch (const ParseError& e) {
    rethrow_at(e, file, line, col_base);
  }
}

// Scanner for the fixed-shape lines of .aut and .ckt files.
struct LineScan {
  const std::string& file;
  int line;
  int indent;
  std::string_view s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(file, line, indent + static_cast<int>(pos), msg);
  }
  void ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool done() {
    ws();
    return pos >= s.size();
  }
  void expect(char c) {
    ws();
    if (pos >= s.size() || s[pos] != c)
      fail(std::string("expected '") + c + "'");
    ++pos;
  }
  bool accept(char c) {
    ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect_arrow() {
    ws();
    if (s.substr(pos, 2) != "->") fail("expected '->'");
    pos += 2;
  }
  std::string ident() {
    ws();
    std::size_t b = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (pos == b) fail("expected an identifier");
    return std::string(s.substr(b, pos - b));
  }
  int move() {
    ws();
    if (s.substr(pos, 2) == "+1") { pos += 2; return 1; }
    if (s.substr(pos, 2) == "-1") { pos += 2; return -1; }
    if (pos < s.size() && s[pos] == '0') { ++pos; return 0; }
    fail("expected a head move (-1, 0 or +1)");
  }
  std::size_t number() {
    ws();
    std::size_t b = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (pos == b) fail("expected a number");
    return std::stoul(std::string(s.substr(b, pos - b)));
  }
};

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write \"" + path + "\"");
  out << content;
  if (!out) throw std::invalid_argument("failed writing \"" + path + "\"");
}

Wiring parse_wiring_text(std::string_view text, const std::string& file) {
  std::vector<Flow> flows;
  for (const Line& ln : split_lines(text)) {
    std::size_t arrow = ln.text.find("<-");
    if (arrow == std::string::npos)
      throw ParseError(file, ln.number, ln.indent,
                       "expected a 'HEAD <- BODY' flow");
    if (ln.text.find("<-", arrow + 2) != std::string::npos)
      throw ParseError(file, ln.number, ln.indent,
                       "more than one '<-' on a line");
    TermId head =
        parse_term_at(ln.text.substr(0, arrow), file, ln.number, ln.indent);
    TermId body = parse_term_at(ln.text.substr(arrow + 2), file, ln.number,
                                ln.indent + static_cast<int>(arrow) + 2);
    try {
      flows.push_back(make_flow(head, body));
    } catch (const std::invalid_argument& e) {
      throw ParseError(file, ln.number, ln.indent, e.what());
    }
  }
  return Wiring(flows);
}

Wiring load_wiring(const std::string& path) {
  return parse_wiring_text(read_file(path), path);
}

Automaton parse_automaton_text(std::string_view text,
                               const std::string& file) {
  Automaton m;
  m.heads = 0;
  bool in_trans = false, saw_init = false, saw_heads = false;
  std::string init_name;
  struct RawTrans {
    int line, indent;
    std::string from, to, stack_read, action, push_sym;
    std::vector<std::string> reads;
    std::vector<int> moves;
  };
  std::vector<RawTrans> raw;

  auto words_after = [](const std::string& s, std::size_t at) {
    std::vector<std::string> out;
    std::istringstream ss(s.substr(at));
    for (std::string w; ss >> w;) out.push_back(w);
    return out;
  };

  for (const Line& ln : split_lines(text)) {
    auto starts = [&](const char* key) {
      return ln.text.rfind(key, 0) == 0;
    };
    if (starts("states:")) {
      m.states = words_after(ln.text, 7);
      in_trans = false;
    } else if (starts("init:")) {
      auto ws = words_after(ln.text, 5);
      if (ws.size() != 1)
        throw ParseError(file, ln.number, ln.indent,
                         "init: wants exactly one state");
      init_name = ws[0];
      saw_init = true;
      in_trans = false;
    } else if (starts("input:")) {
      m.input_alphabet = words_after(ln.text, 6);
      in_trans = false;
    } else if (starts("stack:")) {
      m.stack_alphabet = words_after(ln.text, 6);
      in_trans = false;
    } else if (starts("heads:")) {
      LineScan sc{file, ln.number, ln.indent, ln.text, 6};
      m.heads = static_cast<unsigned>(sc.number());
      if (!sc.done()) sc.fail("trailing input after the head count");
      saw_heads = true;
      in_trans = false;
    } else if (ln.text == "trans:") {
      in_trans = true;
    } else if (in_trans) {
      LineScan sc{file, ln.number, ln.indent, ln.text};
      RawTrans t;
      t.line = ln.number;
      t.indent = ln.indent;
      sc.expect('(');
      t.from = sc.ident();
      sc.expect(';');
      t.reads.push_back(sc.ident());
      while (sc.accept(',')) t.reads.push_back(sc.ident());
      sc.expect(';');
      t.stack_read = sc.ident();
      sc.expect(')');
      sc.expect_arrow();
      sc.expect('(');
      t.to = sc.ident();
      sc.expect(';');
      t.moves.push_back(sc.move());
      while (sc.accept(',')) t.moves.push_back(sc.move());
      sc.expect(';');
      t.action = sc.ident();
      if (t.action == "push") t.push_sym = sc.ident();
      else if (t.action != "pop" && t.action != "stay")
        sc.fail("expected pop, push or stay");
      sc.expect(')');
      if (!sc.done()) sc.fail("trailing input after the transition");
      raw.push_back(std::move(t));
    } else {
      throw ParseError(file, ln.number, ln.indent,
                       "expected a section header");
    }
  }

  if (!saw_heads || !saw_init || m.states.empty())
    throw ParseError(file, 1, 1, "missing states:, init: or heads: section");

  auto state_of = [&](const std::string& n, int line, int indent) {
    for (std::size_t i = 0; i < m.states.size(); ++i)
      if (m.states[i] == n) return i;
    throw ParseError(file, line, indent, "unknown state \"" + n + "\"");
  };
  m.init = state_of(init_name, 1, 1);

  // Desugar stay actions: push a marker over the read symbol, then pop it
  // again from a synthesized state that performs the move.
  bool any_stay = false;
  for (const RawTrans& t : raw) any_stay |= (t.action == "stay");
  if (any_stay) m.stack_alphabet.push_back("_staym");
  std::size_t stay_id = 0;
  for (const RawTrans& t : raw) {
    Automaton::Transition out;
    out.from = state_of(t.from, t.line, t.indent);
    out.reads = t.reads;
    out.stack_read = t.stack_read;
    if (t.action != "stay") {
      out.to = state_of(t.to, t.line, t.indent);
      out.moves = t.moves;
      out.action = t.action == "pop" ? Automaton::Transition::kPop
                                     : Automaton::Transition::kPush;
      out.push_sym = t.push_sym;
      m.transitions.push_back(std::move(out));
      continue;
    }
    std::string mid = "_stay" + std::to_string(stay_id++);
    m.states.push_back(mid);
    out.to = m.states.size() - 1;
    out.moves.assign(t.reads.size(), 0);
    out.action = Automaton::Transition::kPush;
    out.push_sym = "_staym";
    m.transitions.push_back(out);
    Automaton::Transition back;
    back.from = m.states.size() - 1;
    back.to = state_of(t.to, t.line, t.indent);
    back.reads = t.reads;
    back.stack_read = "_staym";
    back.moves = t.moves;
    back.action = Automaton::Transition::kPop;
    m.transitions.push_back(std::move(back));
  }

  try {
    validate_automaton(m);
  } catch (const std::invalid_argument& e) {
    throw ParseError(file, 1, 1, e.what());
  }
  return m;
}

Automaton load_automaton(const std::string& path) {
  return parse_automaton_text(read_file(path), path);
}

Circuit parse_circuit_text(std::string_view text, const std::string& file) {
  Circuit c;
  bool saw_output = false;
  for (const Line& ln : split_lines(text)) {
    LineScan sc{file, ln.number, ln.indent, ln.text};
    std::string kw = sc.ident();
    if (kw == "output") {
      if (saw_output) sc.fail("more than one output line");
      c.output = sc.ident();
      saw_output = true;
      if (!sc.done()) sc.fail("trailing input after the output vertex");
      continue;
    }
    if (kw != "gate") sc.fail("expected 'gate' or 'output'");
    Circuit::Gate g;
    g.target = sc.ident();
    sc.expect('=');
    std::string op = sc.ident();
    std::size_t arity;
    if (op == "and") { g.kind = Circuit::kAnd; arity = 2; }
    else if (op == "or") { g.kind = Circuit::kOr; arity = 2; }
    else if (op == "not") { g.kind = Circuit::kNot; arity = 1; }
    else if (op == "zero") { g.kind = Circuit::kZero; arity = 0; }
    else if (op == "one") { g.kind = Circuit::kOne; arity = 0; }
    else sc.fail("unknown gate kind \"" + op + "\"");
    if (arity > 0) {
      sc.expect('(');
      g.inputs.push_back(sc.ident());
      for (std::size_t i = 1; i < arity; ++i) {
        sc.expect(',');
        g.inputs.push_back(sc.ident());
      }
      sc.expect(')');
    }
    if (!sc.done()) sc.fail("trailing input after the gate");
    for (const auto& prev : c.gates)
      if (prev.target == g.target)
        throw ParseError(file, ln.number, ln.indent,
                         "vertex \"" + g.target + "\" is driven twice");
    c.gates.push_back(std::move(g));
  }
  if (!saw_output) throw ParseError(file, 1, 1, "missing output line");
  return c;
}

Circuit load_circuit(const std::string& path) {
  return parse_circuit_text(read_file(path), path);
}

UnaryQuery parse_query_text(std::string_view text, const std::string& file) {
  UnaryQuery q;
  bool saw_goal = false;
  std::vector<StackOp> program;
  enum { kNone, kData, kProgram, kGoal } section = kNone;
  for (const Line& ln : split_lines(text)) {
    if (ln.text == "data:") { section = kData; continue; }
    if (ln.text == "program:") { section = kProgram; continue; }
    if (ln.text == "goal:") { section = kGoal; continue; }
    switch (section) {
      case kNone:
        throw ParseError(file, ln.number, ln.indent,
                         "expected data:, program: or goal:");
      case kData:
        q.data.push_back(parse_term_at(ln.text, file, ln.number, ln.indent));
        break;
      case kGoal: {
        if (saw_goal)
          throw ParseError(file, ln.number, ln.indent,
                           "more than one goal term");
        q.goal = parse_term_at(ln.text, file, ln.number, ln.indent);
        saw_goal = true;
        break;
      }
      case kProgram: {
        // parse_wiring_text counts lines from 1 inside the fragment.
        try {
          Wiring one = parse_wiring_text(ln.text, file);
          for (const Flow& f : one) {
            auto op = flow_to_op(f);
            if (!op)
              throw std::invalid_argument("program flow is not a stack "
                                          "operation: " +
                                          print_flow(f));
            program.push_back(*op);
          }
        } catch (const std::invalid_argument& e) {
          throw ParseError(file, ln.number, ln.indent, e.what());
        } catch (const ParseError& e) {
          rethrow_at(e, file, ln.number, ln.indent);
        }
        break;
      }
    }
  }
  if (!saw_goal) throw ParseError(file, 1, 1, "missing goal: section");
  q.program = StackWiring(program);
  return q;
}

UnaryQuery load_query(const std::string& path) {
  return parse_query_text(read_file(path), path);
}

std::string format_query(const UnaryQuery& q) {
  std::ostringstream out;
  out << "data:\n";
  for (TermId d : q.data) out << "  " << print_term(d) << "\n";
  out << "program:\n";
  for (const StackOp& op : q.program)
    out << "  " << print_flow(op_to_flow(op)) << "\n";
  out << "goal:\n  " << print_term(q.goal) << "\n";
  return out.str();
}

}  // namespace resol
