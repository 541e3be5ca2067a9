#include "resol/machines.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace resol {

namespace {

constexpr std::string_view kPositionPrefix = "_pos";

SymbolId dir_left() { return intern_symbol("l", 0); }
SymbolId dir_right() { return intern_symbol("r", 0); }

bool valid_lower_name(std::string_view s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

bool reserved_name(std::string_view s) {
  return s == "lend" || s == "rend" || s == "bot" || s == "star" || s == "l" ||
         s == "r";
}

// Right-associated spine of exactly n components.
TermId build_spine(const std::vector<TermId>& comps) {
  TermId t = comps.back();
  for (std::size_t i = comps.size() - 1; i-- > 0;) t = make_pair(comps[i], t);
  return t;
}

bool split_spine(TermId t, std::size_t n, std::vector<TermId>& out) {
  out.clear();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (term_is_var(t) || term_symbol(t) != pair_symbol()) return false;
    out.push_back(term_children(t)[0]);
    t = term_children(t)[1];
  }
  out.push_back(t);
  return true;
}

bool is_constant(TermId t) {
  return !term_is_var(t) && term_children(t).empty();
}

// Unary chain ending in a variable; fills the symbols outermost first.
bool unary_chain(TermId t, std::vector<SymbolId>& syms, VarId& var) {
  syms.clear();
  while (!term_is_var(t)) {
    if (term_children(t).size() != 1) return false;
    syms.push_back(term_symbol(t));
    t = term_children(t)[0];
  }
  var = term_var(t);
  return true;
}

bool mentions_position(TermId t) {
  if (term_is_var(t)) return false;
  if (is_position_name(symbol_name(term_symbol(t)))) return true;
  for (TermId c : term_children(t))
    if (mentions_position(c)) return true;
  return false;
}

// Interns base, or base with "x" appended until the name is free to carry
// the wanted arity.
SymbolId fresh_symbol(std::string base, std::uint32_t arity) {
  for (;;) {
    auto existing = find_symbol(base);
    if (!existing || symbol_arity(*existing) == arity)
      return intern_symbol(base, arity);
    base += "x";
  }
}

}  // namespace

bool is_position_name(std::string_view name) {
  return name.substr(0, kPositionPrefix.size()) == kPositionPrefix;
}

bool uses_position_symbol(TermId t) { return mentions_position(t); }

SymbolId main_slot_symbol() { return intern_symbol("hd", 1); }

SymbolId aux_slot_symbol(std::uint32_t k) {
  return intern_symbol("aux" + std::to_string(k), k);
}

WordContext make_word_context(const std::vector<std::string>& alphabet,
                              const std::vector<std::string>& word,
                              std::string_view position_prefix) {
  if (position_prefix.substr(0, kPositionPrefix.size()) != kPositionPrefix)
    throw std::invalid_argument("position prefix must start with \"_pos\"");
  WordContext ctx;
  std::set<std::string> seen;
  for (const std::string& a : alphabet) {
    if (!valid_lower_name(a) || reserved_name(a))
      throw std::invalid_argument("bad alphabet letter \"" + a + "\"");
    if (!seen.insert(a).second)
      throw std::invalid_argument("duplicate alphabet letter \"" + a + "\"");
    ctx.alphabet.push_back(intern_symbol(a, 0));
  }
  for (const std::string& c : word) {
    if (!seen.count(c))
      throw std::invalid_argument("word letter \"" + c +
                                  "\" is not in the alphabet");
    ctx.word.push_back(intern_symbol(c, 0));
  }
  for (std::size_t i = 0; i <= word.size(); ++i) {
    std::string name = std::string(position_prefix) + std::to_string(i);
    ctx.positions.push_back(intern_symbol(name, 0));
  }
  return ctx;
}

Wiring word_rep(const WordContext& ctx) {
  const std::size_t n = ctx.word.size();
  std::vector<Flow> flows;
  auto cell = [&](std::size_t i) {
    return i == 0 || i == n + 1 ? star_symbol() : ctx.word[i - 1];
  };
  auto conf = [&](std::size_t i, SymbolId dir) {
    std::vector<TermId> comps{make_const(cell(i)), make_const(dir),
                              make_const(ctx.positions[i % (n + 1)])};
    return build_spine(comps);
  };
  for (std::size_t i = 0; i <= n; ++i) {
    TermId at_i = conf(i, dir_right());
    TermId at_next = conf(i + 1, dir_left());
    flows.push_back(make_flow(at_i, at_next));
    flows.push_back(make_flow(at_next, at_i));
  }
  return Wiring(flows);
}

ObservationCheck check_observation(const Wiring& F) {
  ObservationCheck res;
  SymbolId hd = main_slot_symbol();
  for (const Flow& f : F) {
    auto fail = [&](std::string why) {
      res.ok = false;
      res.reason = std::move(why);
      res.offending = f;
      return res;
    };
    std::vector<TermId> h, b;
    if (!split_spine(f.head, 6, h) || !split_spine(f.body, 6, b))
      return fail("flow does not split into the six interaction slots");
    for (TermId side : {f.head, f.body})
      if (mentions_position(side))
        return fail("flow mentions a reserved position constant");
    // slot 1: letter, slot 2: direction, slot 4: state.
    for (auto [idx, what] : {std::pair<int, const char*>{0, "letter"},
                             {1, "direction"},
                             {3, "state"}}) {
      for (TermId t : {h[idx], b[idx]})
        if (!is_constant(t))
          return fail(std::string(what) + " slot is not a constant");
    }
    for (TermId t : {h[0], b[0]}) {
      SymbolId s = term_symbol(t);
      if (s == dir_left() || s == dir_right())
        return fail("letter slot uses a direction tag");
    }
    for (TermId t : {h[1], b[1]}) {
      SymbolId s = term_symbol(t);
      if (s != dir_left() && s != dir_right())
        return fail("direction slot must be l or r");
    }
    // slot 3: unary stack chain over a shared variable.
    std::vector<SymbolId> hsyms, bsyms;
    VarId hvar, bvar;
    if (!unary_chain(h[2], hsyms, hvar) || !unary_chain(b[2], bsyms, bvar))
      return fail("stack slot is not a unary chain ending in a variable");
    if (hvar != bvar)
      return fail("stack slots of head and body use different variables");
    // slots 5 and 6: applications with atomic arguments, none of them the
    // stack variable; hd wraps the main position.
    auto atom_ok = [&](TermId t) {
      if (term_is_var(t)) return term_var(t) != hvar;
      return term_children(t).empty();
    };
    for (TermId t : {h[4], b[4]}) {
      if (term_is_var(t)) return fail("aux slot is not an application");
      for (TermId c : term_children(t))
        if (!atom_ok(c))
          return fail("aux slot arguments must be atoms distinct from the "
                      "stack variable");
    }
    if (term_symbol(h[4]) != term_symbol(b[4]))
      return fail("aux slots of head and body use different symbols");
    for (TermId t : {h[5], b[5]}) {
      if (term_is_var(t) || term_symbol(t) != hd ||
          term_children(t).size() != 1)
        return fail("main slot must be hd applied to one atom");
      if (!atom_ok(term_children(t)[0]))
        return fail("main slot argument must be an atom distinct from the "
                    "stack variable");
    }
  }
  return res;
}

Observation validate_observation(const Wiring& F) {
  ObservationCheck c = check_observation(F);
  if (!c.ok)
    throw std::invalid_argument("not an observation: " + c.reason + " in " +
                                print_flow(c.offending));
  Observation o;
  o.wiring = F;
  std::set<SymbolId> letters;
  for (const Flow& f : F) {
    std::vector<TermId> h, b;
    split_spine(f.head, 6, h);
    split_spine(f.body, 6, b);
    for (TermId t : {h[0], b[0]}) {
      SymbolId s = term_symbol(t);
      if (s != star_symbol()) letters.insert(s);
    }
  }
  std::vector<std::pair<std::string, SymbolId>> named;
  for (SymbolId s : letters) named.emplace_back(symbol_name(s), s);
  std::sort(named.begin(), named.end());
  for (auto& [_, s] : named) o.letters.push_back(s);
  return o;
}

Wiring embed_word_rep(const Wiring& rep) {
  SymbolId hd = main_slot_symbol();
  TermId xs = make_var(intern_var("S"));
  TermId xq = make_var(intern_var("Q"));
  TermId xn = make_var(intern_var("N"));
  std::vector<Flow> flows;
  for (const Flow& f : rep) {
    std::vector<TermId> h, b;
    if (!split_spine(f.head, 3, h) || !split_spine(f.body, 3, b) ||
        !term_closed(f.head) || !term_closed(f.body))
      throw std::invalid_argument(
          "not a word representation flow: " + print_flow(f));
    auto lift = [&](const std::vector<TermId>& c) {
      std::vector<TermId> comps{c[0], c[1], xs, xq, xn,
                                make_app(hd, {c[2]})};
      return build_spine(comps);
    };
    flows.push_back(make_flow(lift(h), lift(b)));
  }
  return Wiring(flows);
}

namespace {

// One interaction flow split into its stack coordinate and the closed
// remainder used as a wrapper key.
struct PendingOp {
  std::string head_key, body_key;
  std::vector<SymbolId> head_syms, body_syms;
};

}  // namespace

Wiring interaction(const Observation& O, const std::vector<std::string>& word,
                   std::string_view position_prefix) {
  std::set<std::string> alpha;
  for (SymbolId s : O.letters) alpha.insert(symbol_name(s));
  for (const std::string& c : word) alpha.insert(c);
  WordContext ctx = make_word_context(
      std::vector<std::string>(alpha.begin(), alpha.end()), word,
      position_prefix);
  return wiring_product(O.wiring, embed_word_rep(word_rep(ctx)));
}

StackWiring reduce(const Observation& O, const std::vector<std::string>& word,
                   std::string_view position_prefix) {
  Wiring pi = interaction(O, word, position_prefix);

  // Pool of closed atoms the free variables can range over.
  std::set<TermId> pool_set;
  for (const Flow& f : pi) {
    for (TermId side : {f.head, f.body}) {
      std::vector<TermId> c;
      if (!split_spine(side, 6, c))
        throw std::logic_error("interaction flow lost its slot structure");
      for (TermId slot : {c[4], c[5]})
        if (!term_is_var(slot))
          for (TermId arg : term_children(slot))
            if (!term_is_var(arg) && term_children(arg).empty())
              pool_set.insert(arg);
    }
  }
  if (pool_set.empty()) pool_set.insert(star_term());
  std::vector<TermId> pool(pool_set.begin(), pool_set.end());
  std::sort(pool.begin(), pool.end(),
            [](TermId a, TermId b) { return term_compare(a, b) < 0; });

  std::vector<PendingOp> pending;
  for (const Flow& f : pi) {
    std::vector<TermId> h, b;
    split_spine(f.head, 6, h);
    split_spine(f.body, 6, b);
    std::vector<SymbolId> hsyms, bsyms;
    VarId hvar, bvar;
    if (!unary_chain(h[2], hsyms, hvar) || !unary_chain(b[2], bsyms, bvar) ||
        hvar != bvar)
      throw std::logic_error("interaction flow has a malformed stack slot");
    auto tuple_of = [&](const std::vector<TermId>& c) {
      std::vector<TermId> comps{c[0], c[1], c[3], c[4], c[5]};
      return build_spine(comps);
    };
    TermId th = tuple_of(h), tb = tuple_of(b);
    std::vector<VarId> vars;
    collect_vars(tb, vars);
    if (vars.size() > 6)
      throw std::length_error("too many free variables in interaction flow");
    double combos = 1;
    for (std::size_t i = 0; i < vars.size(); ++i) combos *= pool.size();
    if (combos > 200000)
      throw std::length_error("grounding the interaction flow would blow up");
    std::vector<std::size_t> odo(vars.size(), 0);
    for (;;) {
      Subst s;
      for (std::size_t i = 0; i < vars.size(); ++i) s.bind(vars[i], pool[odo[i]]);
      TermId gh = s.apply(th), gb = s.apply(tb);
      if (!term_closed(gh) || !term_closed(gb))
        throw std::logic_error("grounded interaction flow is not closed");
      pending.push_back({print_term(gh), print_term(gb), hsyms, bsyms});
      std::size_t i = 0;
      while (i < odo.size() && ++odo[i] == pool.size()) odo[i++] = 0;
      if (i == odo.size()) break;
    }
  }

  std::set<std::string> keys;
  for (const PendingOp& p : pending) {
    keys.insert(p.head_key);
    keys.insert(p.body_key);
  }
  std::map<std::string, SymbolId> wrap;
  std::size_t idx = 0;
  for (const std::string& k : keys)
    wrap[k] = fresh_symbol("_w" + std::to_string(idx++), 1);

  std::vector<StackOp> ops;
  for (const PendingOp& p : pending) {
    std::vector<SymbolId> push{wrap[p.head_key]}, pop{wrap[p.body_key]};
    push.insert(push.end(), p.head_syms.begin(), p.head_syms.end());
    pop.insert(pop.end(), p.body_syms.begin(), p.body_syms.end());
    ops.push_back(StackOp{std::move(push), std::move(pop)});
  }
  return StackWiring(ops);
}

bool accepts(const Observation& O, const std::vector<std::string>& word,
             std::string_view position_prefix) {
  return stack_nilpotent(reduce(O, word, position_prefix));
}

// ---- automata -------------------------------------------------------------

const char* const kLeftEnd = "lend";
const char* const kRightEnd = "rend";
const char* const kStackBottom = "bot";
const char* const kRejectState = "reject";

std::size_t Automaton::state_index(std::string_view name) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == name) return i;
  throw std::invalid_argument("unknown state \"" + std::string(name) + "\"");
}

void validate_automaton(const Automaton& m) {
  auto bad = [](const std::string& why) {
    throw std::invalid_argument("ill-formed automaton: " + why);
  };
  if (m.states.empty()) bad("no states");
  if (m.heads < 1) bad("needs at least one head");
  std::set<std::string> all;
  auto check_names = [&](const std::vector<std::string>& ns,
                         const char* what) {
    for (const std::string& n : ns) {
      // _stay names are produced by the stay-action desugaring.
      if (!valid_lower_name(n) && n.rfind("_stay", 0) != 0)
        bad(std::string(what) + " \"" + n +
            "\" must start with a lowercase letter");
      if (reserved_name(n)) bad("\"" + n + "\" is a reserved name");
      if (!all.insert(n).second)
        bad("\"" + n + "\" is used twice across states, input and stack");
    }
  };
  check_names(m.states, "state");
  check_names(m.input_alphabet, "letter");
  check_names(m.stack_alphabet, "stack symbol");
  if (m.init >= m.states.size()) bad("initial state out of range");
  std::set<std::string> letters(m.input_alphabet.begin(),
                                m.input_alphabet.end());
  std::set<std::string> stack(m.stack_alphabet.begin(),
                              m.stack_alphabet.end());
  bool enters_reject = false;
  for (const auto& t : m.transitions) {
    if (t.from >= m.states.size() || t.to >= m.states.size())
      bad("transition state out of range");
    if (m.states[t.from] == kRejectState)
      bad("the reject state must be a sink");
    if (m.states[t.to] == kRejectState) enters_reject = true;
    if (t.reads.size() != m.heads) bad("transition reads wrong head count");
    for (const std::string& r : t.reads)
      if (!letters.count(r) && r != kLeftEnd && r != kRightEnd)
        bad("transition reads unknown letter \"" + r + "\"");
    if (!stack.count(t.stack_read) && t.stack_read != kStackBottom)
      bad("transition reads unknown stack symbol \"" + t.stack_read + "\"");
    if (t.moves.size() != m.heads) bad("transition moves wrong head count");
    int moving = 0;
    for (int mv : t.moves) {
      if (mv < -1 || mv > 1) bad("head moves must be -1, 0 or +1");
      if (mv != 0) ++moving;
    }
    if (moving > 1) bad("at most one head may move per transition");
    if (t.action == Automaton::Transition::kPop &&
        t.stack_read == kStackBottom)
      bad("the stack bottom is never popped");
    if (t.action == Automaton::Transition::kPush && !stack.count(t.push_sym))
      bad("transition pushes unknown stack symbol \"" + t.push_sym + "\"");
  }
  if (enters_reject && m.heads > 1)
    bad("rejecting transitions are only supported for single-head machines");
}

RunResult simulate(const Automaton& m, const std::vector<std::string>& word) {
  validate_automaton(m);
  std::set<std::string> letters(m.input_alphabet.begin(),
                                m.input_alphabet.end());
  for (const std::string& c : word)
    if (!letters.count(c))
      throw std::invalid_argument("word letter \"" + c +
                                  "\" is not in the input alphabet");
  const std::size_t n = word.size();
  const std::size_t cells = n + 2;
  auto letter_at = [&](std::size_t p) -> std::string {
    if (p == 0) return kLeftEnd;
    if (p == n + 1) return kRightEnd;
    return word[p - 1];
  };
  std::size_t pospow = 1;
  for (unsigned i = 0; i < m.heads; ++i) pospow *= cells;
  const std::size_t nloc = m.states.size() * pospow;
  std::vector<std::string> gamma{kStackBottom};
  gamma.insert(gamma.end(), m.stack_alphabet.begin(), m.stack_alphabet.end());
  auto gidx = [&](const std::string& g) {
    for (std::size_t i = 0; i < gamma.size(); ++i)
      if (gamma[i] == g) return i;
    throw std::logic_error("unknown stack symbol");
  };

  auto decode = [&](std::size_t loc, std::size_t& state,
                    std::vector<std::size_t>& pos) {
    state = loc % m.states.size();
    std::size_t rest = loc / m.states.size();
    pos.resize(m.heads);
    for (unsigned i = 0; i < m.heads; ++i) {
      pos[i] = rest % cells;
      rest /= cells;
    }
  };
  auto encode = [&](std::size_t state, const std::vector<std::size_t>& pos) {
    std::size_t rest = 0;
    for (unsigned i = m.heads; i-- > 0;) rest = rest * cells + pos[i];
    return rest * m.states.size() + state;
  };

  // Step rules per (location, stack top).
  struct Push {
    std::size_t to;
    std::size_t sym;
  };
  std::vector<std::vector<std::size_t>> pops(nloc * gamma.size());
  std::vector<std::vector<Push>> pushes(nloc * gamma.size());
  std::vector<std::size_t> state_of(nloc);
  for (std::size_t loc = 0; loc < nloc; ++loc) {
    std::size_t st;
    std::vector<std::size_t> pos;
    decode(loc, st, pos);
    state_of[loc] = st;
    if (m.states[st] == kRejectState) continue;
    for (const auto& t : m.transitions) {
      if (t.from != st) continue;
      bool match = true;
      for (unsigned h = 0; h < m.heads && match; ++h)
        if (t.reads[h] != letter_at(pos[h])) match = false;
      if (!match) continue;
      std::vector<std::size_t> npos = pos;
      bool in_bounds = true;
      for (unsigned h = 0; h < m.heads; ++h) {
        long long p = static_cast<long long>(pos[h]) + t.moves[h];
        if (p < 0 || p >= static_cast<long long>(cells)) in_bounds = false;
        else npos[h] = static_cast<std::size_t>(p);
      }
      if (!in_bounds) continue;
      std::size_t to = encode(t.to, npos);
      std::size_t g = gidx(t.stack_read);
      if (t.action == Automaton::Transition::kPop)
        pops[loc * gamma.size() + g].push_back(to);
      else
        pushes[loc * gamma.size() + g].push_back({to, gidx(t.push_sym)});
    }
  }

  // POP(l, g) = surface locations reachable once the g on top is popped.
  std::vector<std::set<std::size_t>> pop_to(nloc * gamma.size());
  for (std::size_t hkey = 0; hkey < pop_to.size(); ++hkey)
    for (std::size_t to : pops[hkey]) pop_to[hkey].insert(to);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t loc = 0; loc < nloc; ++loc) {
      for (std::size_t g = 0; g < gamma.size(); ++g) {
        for (const Push& p : pushes[loc * gamma.size() + g]) {
          for (std::size_t mid : pop_to[p.to * gamma.size() + p.sym]) {
            for (std::size_t out : pop_to[mid * gamma.size() + g]) {
              if (pop_to[loc * gamma.size() + g].insert(out).second)
                changed = true;
            }
          }
        }
      }
    }
  }

  // Reachable surface configurations and the step graph over them.
  std::vector<std::size_t> init_pos(m.heads, 0);
  std::size_t start = encode(m.init, init_pos) * gamma.size() + gidx(kStackBottom);
  auto edges_of = [&](std::size_t hkey) {
    std::vector<std::size_t> out;
    std::size_t loc = hkey / gamma.size(), g = hkey % gamma.size();
    for (const Push& p : pushes[loc * gamma.size() + g]) {
      out.push_back(p.to * gamma.size() + p.sym);
      for (std::size_t mid : pop_to[p.to * gamma.size() + p.sym])
        out.push_back(mid * gamma.size() + g);
    }
    return out;
  };
  std::set<std::size_t> reach;
  std::queue<std::size_t> bfs;
  reach.insert(start);
  bfs.push(start);
  while (!bfs.empty()) {
    std::size_t hkey = bfs.front();
    bfs.pop();
    if (m.states[state_of[hkey / gamma.size()]] == kRejectState)
      return RunResult::kReject;
    for (std::size_t next : edges_of(hkey))
      if (reach.insert(next).second) bfs.push(next);
  }
  // A cycle among reachable surface configurations is an endless run.
  std::unordered_map<std::size_t, char> color;
  for (std::size_t root : reach) {
    if (color.count(root)) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [node, i] = stack.back();
      std::vector<std::size_t> out = edges_of(node);
      if (i == out.size()) {
        color[node] = 2;
        stack.pop_back();
        continue;
      }
      std::size_t next = out[i++];
      auto it = color.find(next);
      if (it == color.end()) {
        color[next] = 1;
        stack.emplace_back(next, 0);
      } else if (it->second == 1) {
        return RunResult::kReject;
      }
    }
  }
  return RunResult::kAccept;
}

namespace {

// Flow construction helpers shared by the encoder.
struct Encoder {
  const Automaton& m;
  SymbolId hd = main_slot_symbol();
  SymbolId aux;
  TermId x, z;
  std::vector<TermId> ys;
  std::vector<Flow> flows;

  explicit Encoder(const Automaton& a)
      : m(a), aux(aux_slot_symbol(a.heads - 1)) {
    x = make_var(intern_var("Xst"));
    z = make_var(intern_var("Z"));
    for (unsigned i = 1; i < m.heads; ++i)
      ys.push_back(make_var(intern_var("Y" + std::to_string(i))));
  }

  TermId letter_const(const std::string& name) const {
    if (name == kLeftEnd || name == kRightEnd) return star_term();
    return make_const(intern_symbol(name, 0));
  }
  TermId state_const(const std::string& q,
                     const std::vector<std::string>& mem) const {
    if (m.heads == 1) return make_const(intern_symbol(q, 0));
    std::string n = "_m_" + q;
    for (const std::string& l : mem) n += "_" + l;
    return make_const(intern_symbol(n, 0));
  }
  TermId micro_const(const std::string& tag,
                     const std::vector<std::string>& mem) const {
    std::string n = tag;
    for (const std::string& l : mem) n += "_" + l;
    return make_const(intern_symbol(n, 0));
  }
  TermId aux_term(const std::vector<TermId>& args) const {
    return make_app(aux, args);
  }
  TermId spine(TermId c, TermId d, TermId st, TermId q, TermId a,
               TermId main) const {
    return build_spine({c, d, st, q, a, make_app(hd, {main})});
  }
  void emit(TermId head, TermId body) { flows.push_back(make_flow(head, body)); }

  TermId stack_after(const Automaton::Transition& t) const {
    TermId read = make_app(intern_symbol(t.stack_read, 1), {x});
    if (t.action == Automaton::Transition::kPop) return x;
    return make_app(intern_symbol(t.push_sym, 1), {read});
  }
  TermId stack_read_term(const Automaton::Transition& t) const {
    return make_app(intern_symbol(t.stack_read, 1), {x});
  }

  std::vector<TermId> dirs_for(const std::string& read) const {
    if (read == kLeftEnd) return {make_const(dir_right())};
    if (read == kRightEnd) return {make_const(dir_left())};
    return {make_const(dir_right()), make_const(dir_left())};
  }
  TermId opp(TermId d) const {
    return term_symbol(d) == dir_left() ? make_const(dir_right())
                                        : make_const(dir_left());
  }

  std::vector<std::string> fan_letters() const {
    std::vector<std::string> out = m.input_alphabet;
    out.push_back("star");
    return out;
  }
  TermId fan_const(const std::string& name) const {
    return name == "star" ? star_term() : make_const(intern_symbol(name, 0));
  }
};

}  // namespace

Observation encode_automaton(const Automaton& m) {
  validate_automaton(m);
  Encoder e(m);
  const unsigned K = m.heads - 1;
  bool needs_reset = false;

  for (std::size_t ti = 0; ti < m.transitions.size(); ++ti) {
    const auto& t = m.transitions[ti];
    const std::string& q = m.states[t.from];
    const std::string& q2 = m.states[t.to];
    std::vector<std::string> mem(t.reads.begin() + 1, t.reads.end());
    TermId c1 = e.letter_const(t.reads[0]);
    TermId qc = e.state_const(q, mem);
    TermId base_aux = e.aux_term(e.ys);
    std::string micro = "_t" + std::to_string(ti);

    if (q2 == kRejectState) {
      needs_reset = true;
      for (TermId d : e.dirs_for(t.reads[0])) {
        // Reads the stack top like any transition, but leaves it alone: the
        // restart buries the whole stack under a fresh bottom anyway.
        TermId body = e.spine(c1, d, e.stack_read_term(t), qc, base_aux, e.z);
        if (t.reads[0] == kLeftEnd) {
          // Already at the reset point: push a fresh bottom and restart.
          TermId head = e.spine(
              star_term(), make_const(dir_right()),
              make_app(intern_symbol(kStackBottom, 1), {e.stack_read_term(t)}),
              e.micro_const("_rei", {}), base_aux, e.z);
          e.emit(head, body);
        } else {
          TermId head = e.spine(c1, make_const(dir_left()),
                                e.stack_read_term(t),
                                e.micro_const("_rejwalk", {}), base_aux, e.z);
          e.emit(head, body);
        }
      }
      continue;
    }

    int moved = -1;
    for (unsigned h = 0; h < m.heads; ++h)
      if (t.moves[h] != 0) moved = static_cast<int>(h);

    if (moved <= 0) {
      // Main head only: move, or bounce in place.
      if (moved == 0) {
        if (t.reads[0] == kRightEnd && t.moves[0] > 0) continue;
        if (t.reads[0] == kLeftEnd && t.moves[0] < 0) continue;
        TermId dout =
            t.moves[0] > 0 ? make_const(dir_right()) : make_const(dir_left());
        TermId q2c = e.state_const(q2, mem);
        for (TermId d : e.dirs_for(t.reads[0]))
          e.emit(e.spine(c1, dout, e.stack_after(t), q2c, base_aux, e.z),
                 e.spine(c1, d, e.stack_read_term(t), qc, base_aux, e.z));
      } else {
        TermId q2c = e.state_const(q2, mem);
        for (TermId d : e.dirs_for(t.reads[0])) {
          std::string dn = term_symbol(d) == dir_left() ? "l" : "r";
          TermId u = e.micro_const(micro + "_ret_" + dn, mem);
          e.emit(e.spine(c1, d, e.stack_after(t), u, base_aux, e.z),
                 e.spine(c1, d, e.stack_read_term(t), qc, base_aux, e.z));
          for (const std::string& g : e.fan_letters()) {
            TermId gc = e.fan_const(g);
            e.emit(e.spine(gc, e.opp(d), e.x, q2c, base_aux, e.z),
                   e.spine(gc, e.opp(d), e.x, u, base_aux, e.z));
          }
        }
      }
      continue;
    }

    // An auxiliary head moves: swap it into the main slot, let the word
    // wiring move it, learn the letter, swap back and bounce home.
    unsigned slot = static_cast<unsigned>(moved) - 1;
    if (t.reads[moved] == kRightEnd && t.moves[moved] > 0) continue;
    if (t.reads[moved] == kLeftEnd && t.moves[moved] < 0) continue;
    TermId dm = t.moves[moved] > 0 ? make_const(dir_right())
                                   : make_const(dir_left());
    TermId claim = e.letter_const(t.reads[moved]);
    std::vector<TermId> swapped = e.ys;
    swapped[slot] = e.z;
    for (TermId d : e.dirs_for(t.reads[0])) {
      std::string dn = term_symbol(d) == dir_left() ? "l" : "r";
      TermId u1 = e.micro_const(micro + "_a_" + dn, mem);
      e.emit(e.spine(claim, dm, e.stack_after(t), u1, e.aux_term(swapped),
                     e.ys[slot]),
             e.spine(c1, d, e.stack_read_term(t), qc, base_aux, e.z));
      for (const std::string& g : e.fan_letters()) {
        TermId gc = e.fan_const(g);
        std::string learned =
            g == "star"
                ? (t.moves[moved] > 0 ? kRightEnd : kLeftEnd)
                : g;
        std::vector<std::string> mem2 = mem;
        mem2[slot] = learned;
        TermId u2 = e.micro_const(micro + "_b_" + dn + "_" + g, mem);
        e.emit(e.spine(c1, d, e.x, u2, base_aux, e.z),
               e.spine(gc, e.opp(dm), e.x, u1, e.aux_term(swapped),
                       e.ys[slot]));
        TermId q2c = e.state_const(q2, mem2);
        for (const std::string& g2 : e.fan_letters()) {
          TermId g2c = e.fan_const(g2);
          e.emit(e.spine(g2c, e.opp(d), e.x, q2c, base_aux, e.z),
                 e.spine(g2c, e.opp(d), e.x, u2, base_aux, e.z));
        }
      }
    }
  }

  if (needs_reset) {
    TermId walk = e.micro_const("_rejwalk", {});
    TermId rei = e.micro_const("_rei", {});
    TermId base_aux = e.aux_term(e.ys);
    // Walk left over the letters, tagged by arrival from the right.
    for (const std::string& a : m.input_alphabet) {
      TermId ac = e.fan_const(a);
      e.emit(e.spine(ac, make_const(dir_left()), e.x, walk, base_aux, e.z),
             e.spine(ac, make_const(dir_right()), e.x, walk, base_aux, e.z));
    }
    // At the marker cell, push a fresh bottom and turn around.
    e.emit(e.spine(star_term(), make_const(dir_right()),
                   make_app(intern_symbol(kStackBottom, 1), {e.x}), rei,
                   base_aux, e.z),
           e.spine(star_term(), make_const(dir_right()), e.x, walk, base_aux,
                   e.z));
    // One step to the right, then come back in the initial state.
    TermId init = e.state_const(
        m.states[m.init],
        std::vector<std::string>(K, kLeftEnd));
    for (const std::string& g : e.fan_letters()) {
      TermId gc = e.fan_const(g);
      e.emit(e.spine(gc, make_const(dir_left()), e.x, init, base_aux, e.z),
             e.spine(gc, make_const(dir_left()), e.x, rei, base_aux, e.z));
    }
  }

  return validate_observation(Wiring(e.flows));
}

}  // namespace resol
